mod common;

use std::sync::Arc;

use common::*;
use monoshare_core::{parse, print_expr, Expr, Mode};
use num_complex::Complex64;
use proptest::prelude::*;

fn numeric_tree() -> impl Strategy<Value = Arc<Expr>> {
    let leaf = prop_oneof![
        arb_gq().prop_map(|c| Arc::new(Expr::Const(c))),
        Just(Arc::new(Expr::Var)),
        Just(Arc::new(Expr::Param)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arc::new(Expr::Add(a, b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arc::new(Expr::Sub(a, b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arc::new(Expr::Mul(a, b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arc::new(Expr::Div(a, b))),
            inner.clone().prop_map(|a| Arc::new(Expr::Neg(a))),
            inner.clone().prop_map(|a| Arc::new(Expr::Exp(a))),
            (inner, -2i64..=3).prop_map(|(a, k)| Arc::new(Expr::Pow(a, k))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn exact_round_trip(e in exact_tree()) {
        let text = print_expr(&e);
        let back = parse(&text, Mode::Exact).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back.to_rational_function(), e.to_rational_function(), "{}", text);
    }

    #[test]
    fn numeric_round_trip(e in numeric_tree(), seed in any::<u64>()) {
        let text = print_expr(&e);
        let back = parse(&text, Mode::Numeric).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        let mut rng = rng(seed);
        for _ in 0..10 {
            use rand::Rng;
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            match (e.eval(z, Some(3)), back.eval(z, Some(3))) {
                (Ok(a), Ok(b)) => prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{}", text),
                (a, b) => prop_assert_eq!(a.is_err(), b.is_err(), "{}", text),
            }
        }
    }

    #[test]
    fn syntax_errors_carry_positions(text in "[zmi0-9+*/^() .-]{0,24}|exp\\([zm0-9+*-]{0,8}\\)?") {
        for mode in [Mode::Exact, Mode::Numeric] {
            if let Err(e) = parse(&text, mode) {
                prop_assert!(e.offset <= text.len());
                prop_assert!(e.to_string().contains("at byte"));
            }
        }
    }
}

#[test]
fn parser_examples() {
    let f = parse("(z^2+1)/z", Mode::Exact).unwrap().to_rational_function().unwrap();
    assert_eq!(f.to_string(), "(z^2+1)/(z)");
    let c = parse("1/2 + 3/4*i", Mode::Exact).unwrap().to_rational_function().unwrap();
    assert_eq!(c.to_string(), "(1/2+3/4*i)");
    assert!(parse("exp(m*z)", Mode::Exact).is_err());
    assert!(parse("exp(m*z)", Mode::Numeric).is_ok());
    assert!(parse("z^2^3", Mode::Exact).is_err());
    assert!(parse("0.5*z", Mode::Exact).is_err());
    assert!(parse("1/0", Mode::Exact).is_err());
    assert_eq!(
        parse("-z^2", Mode::Exact).unwrap().to_rational_function().unwrap().to_string(),
        "-z^2"
    );
}
