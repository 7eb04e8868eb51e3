//! Shared generators and the numeric root oracle used by the integration
//! tests.

#![allow(dead_code)]

use monoshare_core::campaign::{gen_nonzero_constant, gen_ratfunc, gen_spec, CampaignConfig, SpecMode};
use monoshare_core::ppoint::target_numerator;
use std::sync::Arc;

use monoshare_core::{build_monomial, Expr, GaussianRational, Polynomial, Rational};
use num_complex::{Complex, Complex64};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use twofloat::TwoFloat;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gi(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

pub fn random_gi<R: Rng>(rng: &mut R, h: i64) -> GaussianRational {
    gi(rng.random_range(-h..=h), rng.random_range(-h..=h))
}

/// Gaussian rational with parts `a/b`, `|a| <= h`, `1 <= b <= h`.
pub fn random_gq<R: Rng>(rng: &mut R, h: i64) -> GaussianRational {
    let mut part = || Rational::new(rng.random_range(-h..=h).into(), rng.random_range(1..=h).into());
    GaussianRational::new(part(), part())
}

pub fn random_poly<R: Rng>(rng: &mut R, max_degree: usize, h: i64) -> Polynomial {
    let d = rng.random_range(0..=max_degree);
    Polynomial::new((0..=d).map(|_| random_gi(rng, h)).collect())
}

/// Nonzero constant times a product of `(z - r)^m` over planted roots.
/// Returns the polynomial and its number of distinct roots.
pub fn planted_poly<R: Rng>(rng: &mut R, max_degree: usize, max_mult: u32) -> (Polynomial, usize) {
    let mut roots: Vec<GaussianRational> = Vec::new();
    let mut p = Polynomial::constant(loop {
        let c = random_gi(rng, 5);
        if !c.is_zero() {
            break c;
        }
    });
    let mut degree = 0;
    while degree < max_degree {
        let r = random_gq(rng, 4);
        let m = rng.random_range(1..=max_mult).min((max_degree - degree) as u32);
        if !roots.contains(&r) {
            roots.push(r.clone());
        }
        p = &p * &Polynomial::linear_root(&r).pow(m);
        degree += m as usize;
        if rng.random_range(0..4) == 0 {
            break;
        }
    }
    (p, roots.len())
}

/// A target numerator `num(M(f)) - p den(M(f))` of degree between 1 and
/// `max_degree`, drawn from the same generators as the campaigns.
pub fn small_target_numerator<R: Rng>(rng: &mut R, max_degree: usize) -> Polynomial {
    let config = CampaignConfig { max_poly_degree: 2, max_k: 2, max_exponent: 3, ..Default::default() };
    loop {
        let f = gen_ratfunc(rng, &config).unwrap();
        let spec = gen_spec(rng, &config, SpecMode::Meromorphic).unwrap();
        let p = gen_nonzero_constant(rng, config.coefficient_height);
        let nt = target_numerator(&build_monomial(&f, &spec).unwrap(), &Polynomial::constant(p));
        if matches!(nt.degree(), Some(d) if (1..=max_degree).contains(&d)) {
            return nt;
        }
    }
}

pub fn arb_gi() -> impl Strategy<Value = GaussianRational> {
    (-5i64..=5, -5i64..=5).prop_map(|(a, b)| gi(a, b))
}

pub fn arb_gq() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=6, -6i64..=6, 1i64..=6).prop_map(|(a, b, c, d)| {
        GaussianRational::new(Rational::new(a.into(), b.into()), Rational::new(c.into(), d.into()))
    })
}

/// Polynomials of degree at most `max_degree` with small Gaussian-integer
/// coefficients.
pub fn arb_poly(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(arb_gi(), 1..=max_degree + 1).prop_map(Polynomial::new)
}

pub fn arb_nonzero_poly(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    arb_poly(max_degree).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn arb_monic(min_degree: usize, max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(arb_gi(), min_degree..=max_degree).prop_map(|mut c| {
        c.push(GaussianRational::from_int(1));
        Polynomial::new(c)
    })
}

/// Random exact expression trees over `z` and Gaussian-rational constants.
pub fn exact_tree() -> impl Strategy<Value = Arc<Expr>> {
    let leaf = prop_oneof![
        arb_gq().prop_map(|c| Arc::new(Expr::Const(c))),
        Just(Arc::new(Expr::Var)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arc::new(Expr::Add(a, b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arc::new(Expr::Sub(a, b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arc::new(Expr::Mul(a, b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arc::new(Expr::Div(a, b))),
            inner.clone().prop_map(|a| Arc::new(Expr::Neg(a))),
            (inner, -2i64..=3).prop_map(|(a, k)| Arc::new(Expr::Pow(a, k))),
        ]
    })
}

// ---------------------------------------------------------------------------
// Root oracle: Aberth iteration in double-double complex arithmetic, then
// single-linkage clustering. Independent of every exact kernel.

type Cdd = Complex<TwoFloat>;

fn dd(q: &Rational) -> TwoFloat {
    let hi = q.to_f64().expect("finite");
    let lo = (q - Rational::from_float(hi).expect("finite")).to_f64().expect("finite");
    TwoFloat::new_add(hi, lo)
}

fn cdd(c: &GaussianRational) -> Cdd {
    Cdd::new(dd(&c.re), dd(&c.im))
}

fn abs(z: Cdd) -> f64 {
    z.norm_sqr().hi().sqrt()
}

/// All complex roots with multiplicity, by simultaneous Aberth iteration.
pub fn numeric_roots(p: &Polynomial) -> Vec<Complex64> {
    let n = p.degree().expect("nonzero");
    if n == 0 {
        return Vec::new();
    }
    let lc = cdd(p.leading().unwrap());
    let a: Vec<Cdd> = p.coeffs().iter().map(|c| cdd(c) / lc).collect();
    // Fujiwara bound on the root moduli.
    let bound = (0..n)
        .map(|k| (abs(a[k]) * if k == 0 { 0.5 } else { 1.0 }).powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let mut z: Vec<Cdd> = (0..n)
        .map(|k| {
            let w = Complex64::from_polar(bound.max(1e-3), 0.4 + std::f64::consts::TAU * k as f64 / n as f64);
            Cdd::new(TwoFloat::from(w.re), TwoFloat::from(w.im))
        })
        .collect();
    let one = Cdd::new(TwoFloat::from(1.0), TwoFloat::from(0.0));
    for _ in 0..2000 {
        let mut biggest: f64 = 0.0;
        for k in 0..n {
            let (mut v, mut dv) = (a[n], Cdd::zero());
            for c in a[..n].iter().rev() {
                dv = dv * z[k] + v;
                v = v * z[k] + c;
            }
            if v.is_zero() {
                continue;
            }
            let ratio = v / dv;
            let mut s = Cdd::zero();
            for j in 0..n {
                if j != k {
                    s += one / (z[k] - z[j]);
                }
            }
            let w = ratio / (one - ratio * s);
            z[k] -= w;
            biggest = biggest.max(abs(w) / (1.0 + abs(z[k])));
        }
        if biggest < 1e-28 {
            break;
        }
    }
    z.into_iter().map(|c| Complex64::new(c.re.hi(), c.im.hi())).collect()
}

/// Number of groups after joining roots closer than `tol * max(1, |r|)`.
pub fn cluster_count(roots: &[Complex64], tol: f64) -> usize {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() < tol * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

pub fn oracle_distinct_roots(p: &Polynomial) -> usize {
    cluster_count(&numeric_roots(p), 1e-6)
}
