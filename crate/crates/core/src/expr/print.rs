//! Canonical text for expression trees; re-parses to an equivalent tree.

use num_traits::{One, Signed, Zero};

use super::Expr;
use crate::gaussian::GaussianRational;

// binding strength of the outermost operator of a printed fragment
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

fn const_level(c: &GaussianRational) -> u8 {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) if c.re.is_negative() => UNARY,
        (_, true) => ATOM,
        (true, false) if c.im.is_one() => ATOM,
        (true, false) if (-c.im.clone()).is_one() => UNARY,
        (true, false) => PRODUCT,
        (false, false) => SUM,
    }
}

fn wrap(s: String, level: u8, min: u8) -> String {
    if level < min {
        format!("({s})")
    } else {
        s
    }
}

fn go(e: &Expr) -> (String, u8) {
    match e {
        Expr::Const(c) => (c.to_string(), const_level(c)),
        Expr::Var => ("z".into(), ATOM),
        Expr::Param => ("m".into(), ATOM),
        Expr::Add(a, b) => (format!("{}+{}", operand(a, SUM), right_operand(b, PRODUCT)), SUM),
        Expr::Sub(a, b) => (format!("{}-{}", operand(a, SUM), right_operand(b, PRODUCT)), SUM),
        Expr::Mul(a, b) => (format!("{}*{}", operand(a, PRODUCT), right_operand(b, UNARY)), PRODUCT),
        Expr::Div(a, b) => {
            // "2/3^2" would lex the literal 2/3 first
            let rhs = right_operand(b, UNARY);
            let rhs = if rhs.starts_with(|c: char| c.is_ascii_digit()) { format!("({rhs})") } else { rhs };
            (format!("{}/{}", operand(a, PRODUCT), rhs), PRODUCT)
        }
        Expr::Neg(a) => (format!("-{}", operand(a, UNARY)), UNARY),
        Expr::Pow(a, k) => (format!("{}^{}", operand(a, ATOM), k), UNARY + 1),
        Expr::Exp(a) => (format!("exp({})", go(a).0), ATOM),
    }
}

fn operand(e: &Expr, min: u8) -> String {
    let (s, level) = go(e);
    wrap(s, level, min)
}

/// Operands after an infix operator are also parenthesized when they start
/// with a minus sign, so `a - -b` never appears.
fn right_operand(e: &Expr, min: u8) -> String {
    let (s, level) = go(e);
    if s.starts_with('-') {
        format!("({s})")
    } else {
        wrap(s, level, min)
    }
}

pub fn print_expr(e: &Expr) -> String {
    go(e).0
}
