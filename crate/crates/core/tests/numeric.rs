mod common;

use common::*;
use monoshare_core::{
    build_monomial, numeric_monomial_eval, spherical_derivative, zalcman_rescale, Expr, GaussianRational,
    MonomialSpec, NumericFunction, RationalFunction, RescaleSpec,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn arb_spec() -> impl Strategy<Value = MonomialSpec> {
    (0u32..=3, prop::collection::vec((1u32..=3, 1u32..=3), 1..=2)).prop_map(|(n, pairs)| {
        let (ns, ts) = pairs.into_iter().unzip();
        MonomialSpec::new(n, ns, ts).unwrap()
    })
}

fn arb_ratfunc() -> impl Strategy<Value = RationalFunction> {
    (arb_poly(3), arb_nonzero_poly(2))
        .prop_map(|(n, d)| RationalFunction::normalize(n, d).unwrap())
        .prop_filter("non-constant", |f| !f.is_constant())
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
}

fn point<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn spherical_derivative_is_inversion_invariant(f in arb_ratfunc(), seed in any::<u64>()) {
        let tree = Expr::from_rational_function(&f);
        let direct = NumericFunction::new(tree.clone());
        let inverted = NumericFunction::new(Expr::div(Expr::int(1), tree));
        let mut rng = rng(seed);
        for _ in 0..20 {
            let z = point(&mut rng);
            if let (Some(a), Some(b)) = (spherical_derivative(&direct, z), spherical_derivative(&inverted, z)) {
                prop_assert!((a - b).abs() <= 1e-9 * a.max(b).max(1e-300), "{f} at {z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn numeric_monomial_agrees_with_exact(f in arb_ratfunc(), spec in arb_spec(), seed in any::<u64>()) {
        let exact = build_monomial(&f, &spec).unwrap();
        let numeric = NumericFunction::new(Expr::from_rational_function(&f));
        let mut rng = rng(seed);
        for _ in 0..20 {
            let z = random_gq(&mut rng, 7);
            let Some(want) = exact.eval(&z) else { continue };
            let want = want.to_complex();
            let got = numeric_monomial_eval(&numeric, &spec, z.to_complex()).unwrap();
            prop_assert!(close(want, got, 1e-9), "{f}, {spec} at {z}: {want} vs {got}");
        }
    }

    #[test]
    fn derivative_matches_central_difference(f in arb_ratfunc(), a in arb_poly(2), seed in any::<u64>()) {
        let tree = Expr::mul(Expr::from_rational_function(&f), Expr::exp(Expr::from_rational_function(&RationalFunction::from_polynomial(a))));
        let g = NumericFunction::new(tree);
        let h = 1e-6;
        let mut rng = rng(seed);
        for _ in 0..20 {
            let z = point(&mut rng);
            let (Ok(v), Ok(dv)) = (g.eval(z), g.eval_derivative(z)) else { continue };
            // Skip the neighbourhood of a pole where the difference quotient is meaningless.
            if v.norm() > 1e3 {
                continue;
            }
            let step = Complex64::new(h, 0.0);
            let (Ok(up), Ok(down)) = (g.eval(z + step), g.eval(z - step)) else { continue };
            let fd = (up - down) / (2.0 * h);
            prop_assert!(close(dv, fd, 1e-4), "at {z}: {dv} vs {fd}");
        }
    }

    #[test]
    fn exponential_image_matches_numeric_monomial(
        spec in arb_spec(),
        c in arb_gi().prop_filter("nonzero", |c| *c != GaussianRational::from_int(0)),
        d in arb_gq(),
        seed in any::<u64>(),
    ) {
        let image = spec.exp_image(&c).unwrap();
        let tree = Expr::exp(Expr::add(Expr::mul(Expr::constant(c), Expr::var()), Expr::constant(d.clone())));
        let f = NumericFunction::new(tree);
        let mut rng = rng(seed);
        for _ in 0..10 {
            let zeta = point(&mut rng) * 0.2;
            let want = image.eval(zeta, d.to_complex());
            let got = numeric_monomial_eval(&f, &spec, zeta).unwrap();
            prop_assert!((want - got).norm() <= 1e-9 * want.norm(), "{spec}: {want} vs {got}");
        }
    }

    #[test]
    fn rescale_is_pointwise(f in arb_ratfunc(), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let spec = RescaleSpec {
            center: point(&mut rng),
            scale: rng.random_range(0.01..1.0),
            exponent: -rng.random_range(0.0..1.0),
        };
        let base = NumericFunction::new(Expr::from_rational_function(&f));
        let rescaled = zalcman_rescale(&base, &spec).unwrap();
        for _ in 0..10 {
            let zeta = point(&mut rng);
            let (Ok(got), Ok(inner)) = (rescaled.eval(zeta), base.eval(spec.center + spec.scale * zeta)) else { continue };
            let want = spec.scale.powf(spec.exponent) * inner;
            prop_assert!(close(want, got, 1e-9), "{want} vs {got}");
        }
    }
}

#[test]
fn marty_families_separate() {
    use monoshare_core::marty_scan;
    let family = |s: &str| NumericFunction::new(monoshare_core::parse(s, monoshare_core::Mode::Numeric).unwrap());
    let linear = marty_scan(&family("m*z"), 1..=50, 0.5, 101, 10.0).unwrap();
    assert!(linear.non_normal_flag && linear.growth_ratio >= 49.0);
    let bounded = marty_scan(&family("z + m/(m+1)"), 1..=50, 0.5, 101, 10.0).unwrap();
    assert!(!bounded.non_normal_flag, "{}", bounded.growth_ratio);
}
