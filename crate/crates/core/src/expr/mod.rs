//! Expression trees for textual function input.
//!
//! Exact-mode trees (no `exp`, no parameter `m`) convert to
//! [`RationalFunction`]s; numeric-mode trees are differentiated
//! symbolically and evaluated in double precision.

mod parse;
mod print;

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

pub use parse::{parse, Mode, ParseError, ParseErrorKind};
pub use print::print_expr;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::ratfunc::RationalFunction;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(GaussianRational),
    /// The variable `z`.
    Var,
    /// The family parameter `m`.
    Param,
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Neg(Arc<Expr>),
    Pow(Arc<Expr>, i64),
    Exp(Arc<Expr>),
}

/// Evaluation hit a pole (or overflowed), or `m` was left unbound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalError {
    Pole,
    UnboundParameter,
}

/// Denominators smaller than this fraction of the numerator scale count as poles.
pub const POLE_TOLERANCE: f64 = 1e-9;

// Smart constructors take `Arc` operands, so the operator traits do not fit.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn constant(c: GaussianRational) -> Arc<Expr> {
        Arc::new(Expr::Const(c))
    }

    pub fn int(n: i64) -> Arc<Expr> {
        Expr::constant(GaussianRational::from_int(n))
    }

    pub fn var() -> Arc<Expr> {
        Arc::new(Expr::Var)
    }

    fn as_const(&self) -> Option<&GaussianRational> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    fn is_zero_const(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    fn is_one_const(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    /// `a + b` with constant folding and zero elimination.
    pub fn add(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::constant(x + y),
            _ if a.is_zero_const() => b,
            _ if b.is_zero_const() => a,
            _ => Arc::new(Expr::Add(a, b)),
        }
    }

    pub fn sub(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::constant(x - y),
            _ if b.is_zero_const() => a,
            _ if a.is_zero_const() => Expr::neg(b),
            _ => Arc::new(Expr::Sub(a, b)),
        }
    }

    pub fn mul(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::constant(x * y),
            _ if a.is_zero_const() || b.is_zero_const() => Expr::int(0),
            _ if a.is_one_const() => b,
            _ if b.is_one_const() => a,
            _ => Arc::new(Expr::Mul(a, b)),
        }
    }

    pub fn div(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if !y.is_zero() => Expr::constant(x / y),
            _ if a.is_zero_const() && !b.is_zero_const() => Expr::int(0),
            _ if b.is_one_const() => a,
            _ => Arc::new(Expr::Div(a, b)),
        }
    }

    pub fn neg(a: Arc<Expr>) -> Arc<Expr> {
        match &*a {
            Expr::Const(c) => Expr::constant(-c),
            Expr::Neg(inner) => inner.clone(),
            _ => Arc::new(Expr::Neg(a)),
        }
    }

    pub fn pow(a: Arc<Expr>, k: i64) -> Arc<Expr> {
        match (k, a.as_const()) {
            (0, Some(c)) if c.is_zero() => Arc::new(Expr::Pow(a, 0)),
            (0, _) => Expr::int(1),
            (1, _) => a,
            (k, Some(c)) if k > 0 && k <= u32::MAX as i64 => Expr::constant(c.pow(k as u32)),
            (k, Some(c)) if k < 0 && -k <= u32::MAX as i64 && !c.is_zero() => {
                Expr::constant(c.inv().expect("nonzero").pow((-k) as u32))
            }
            _ => Arc::new(Expr::Pow(a, k)),
        }
    }

    pub fn exp(a: Arc<Expr>) -> Arc<Expr> {
        if a.is_zero_const() {
            return Expr::int(1);
        }
        Arc::new(Expr::Exp(a))
    }

    pub fn has_param(&self) -> bool {
        match self {
            Expr::Param => true,
            Expr::Const(_) | Expr::Var => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_param() || b.has_param()
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) => a.has_param(),
        }
    }

    pub fn has_exp(&self) -> bool {
        match self {
            Expr::Exp(_) => true,
            Expr::Const(_) | Expr::Var | Expr::Param => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_exp() || b.has_exp()
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_exp(),
        }
    }

    /// Rebuild the tree with `z` replaced by `var` and `m` by `param` (when given).
    pub fn substitute(self: &Arc<Expr>, var: Option<&Arc<Expr>>, param: Option<&Arc<Expr>>) -> Arc<Expr> {
        let rec = |e: &Arc<Expr>| e.substitute(var, param);
        match &**self {
            Expr::Var => var.cloned().unwrap_or_else(|| self.clone()),
            Expr::Param => param.cloned().unwrap_or_else(|| self.clone()),
            Expr::Const(_) => self.clone(),
            Expr::Add(a, b) => Expr::add(rec(a), rec(b)),
            Expr::Sub(a, b) => Expr::sub(rec(a), rec(b)),
            Expr::Mul(a, b) => Expr::mul(rec(a), rec(b)),
            Expr::Div(a, b) => Expr::div(rec(a), rec(b)),
            Expr::Neg(a) => Expr::neg(rec(a)),
            Expr::Pow(a, k) => Expr::pow(rec(a), *k),
            Expr::Exp(a) => Expr::exp(rec(a)),
        }
    }

    /// Symbolic `d/dz`.
    pub fn derivative(self: &Arc<Expr>) -> Arc<Expr> {
        match &**self {
            Expr::Const(_) | Expr::Param => Expr::int(0),
            Expr::Var => Expr::int(1),
            Expr::Add(a, b) => Expr::add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => Expr::sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.derivative(), b.clone()),
                Expr::mul(a.clone(), b.derivative()),
            ),
            Expr::Div(a, b) => Expr::div(
                Expr::sub(
                    Expr::mul(a.derivative(), b.clone()),
                    Expr::mul(a.clone(), b.derivative()),
                ),
                Expr::pow(b.clone(), 2),
            ),
            Expr::Neg(a) => Expr::neg(a.derivative()),
            Expr::Pow(_, 0) => Expr::int(0),
            Expr::Pow(a, k) => Expr::mul(
                Expr::mul(Expr::int(*k), Expr::pow(a.clone(), k - 1)),
                a.derivative(),
            ),
            Expr::Exp(a) => Expr::mul(self.clone(), a.derivative()),
        }
    }

    pub fn nth_derivative(self: &Arc<Expr>, k: usize) -> Arc<Expr> {
        (0..k).fold(self.clone(), |e, _| e.derivative())
    }

    /// Tree for `1/self` that avoids evaluating `self` where possible, so a
    /// pole of `self` can be a regular point of the reciprocal.
    pub fn reciprocal(self: &Arc<Expr>) -> Arc<Expr> {
        match &**self {
            Expr::Div(a, b) => Expr::div(b.clone(), a.clone()),
            Expr::Pow(a, k) => Expr::pow(a.clone(), -k),
            Expr::Mul(a, b) => Expr::mul(a.reciprocal(), b.reciprocal()),
            Expr::Neg(a) => Expr::neg(a.reciprocal()),
            Expr::Exp(a) => Expr::exp(Expr::neg(a.clone())),
            _ => Expr::div(Expr::int(1), self.clone()),
        }
    }

    /// Double-precision value at `z` with `m = param`.
    pub fn eval(&self, z: Complex64, param: Option<i64>) -> std::result::Result<Complex64, EvalError> {
        let v = match self {
            Expr::Const(c) => c.to_complex(),
            Expr::Var => z,
            Expr::Param => Complex64::new(param.ok_or(EvalError::UnboundParameter)? as f64, 0.0),
            Expr::Add(a, b) => a.eval(z, param)? + b.eval(z, param)?,
            Expr::Sub(a, b) => a.eval(z, param)? - b.eval(z, param)?,
            Expr::Mul(a, b) => a.eval(z, param)? * b.eval(z, param)?,
            Expr::Div(a, b) => {
                let num = a.eval(z, param)?;
                let den = b.eval(z, param)?;
                if den.norm() < POLE_TOLERANCE * num.norm().max(1.0) {
                    return Err(EvalError::Pole);
                }
                num / den
            }
            Expr::Neg(a) => -a.eval(z, param)?,
            Expr::Pow(a, k) => {
                let base = a.eval(z, param)?;
                if *k < 0 && base.norm() < POLE_TOLERANCE {
                    return Err(EvalError::Pole);
                }
                let k = i32::try_from(*k).map_err(|_| EvalError::Pole)?;
                base.powi(k)
            }
            Expr::Exp(a) => a.eval(z, param)?.exp(),
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::Pole)
        }
    }

    /// Exact value in the rational-function field.
    pub fn to_rational_function(&self) -> Result<RationalFunction> {
        Ok(match self {
            Expr::Const(c) => RationalFunction::constant(c.clone()),
            Expr::Var => RationalFunction::z(),
            Expr::Param => return Err(Error::Usage("parameter m has no exact value".into())),
            Expr::Exp(_) => return Err(Error::Usage("exp has no rational-function value".into())),
            Expr::Add(a, b) => a.to_rational_function()?.add(&b.to_rational_function()?),
            Expr::Sub(a, b) => a.to_rational_function()?.sub(&b.to_rational_function()?),
            Expr::Mul(a, b) => a.to_rational_function()?.mul(&b.to_rational_function()?),
            Expr::Div(a, b) => a.to_rational_function()?.div(&b.to_rational_function()?)?,
            Expr::Neg(a) => a.to_rational_function()?.neg(),
            Expr::Pow(a, k) => a.to_rational_function()?.powi(*k)?,
        })
    }

    /// Tree for an exact rational function, `(num)/(den)`.
    pub fn from_rational_function(f: &RationalFunction) -> Arc<Expr> {
        let poly = |p: &crate::poly::Polynomial| {
            p.coeffs().iter().enumerate().rev().fold(Expr::int(0), |acc, (d, c)| {
                if c.is_zero() {
                    return acc;
                }
                let term = Expr::mul(Expr::constant(c.clone()), Expr::pow(Expr::var(), d as i64));
                Expr::add(acc, term)
            })
        };
        Expr::div(poly(f.num()), poly(f.den()))
    }

    /// Number of nodes, counting shared subtrees once per reference.
    pub fn size(&self) -> usize {
        1 + match self {
            Expr::Const(_) | Expr::Var | Expr::Param => 0,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.size() + b.size(),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) => a.size(),
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_expr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn derivative_rules() {
        let e = parse("z^3 + 2*z", Mode::Exact).unwrap();
        let d = Arc::new(e).derivative();
        assert_eq!(d.eval(c(2.0, 0.0), None).unwrap(), c(14.0, 0.0));

        let e = Arc::new(parse("exp(m*z)", Mode::Numeric).unwrap());
        let d = e.derivative();
        let v = d.eval(c(0.5, 0.0), Some(3)).unwrap();
        assert!((v - 3.0 * (1.5f64).exp()).norm() < 1e-12);

        let e = Arc::new(parse("1/z", Mode::Exact).unwrap());
        let d2 = e.nth_derivative(2);
        assert!((d2.eval(c(2.0, 0.0), None).unwrap() - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn poles_are_reported() {
        let e = parse("1/z", Mode::Exact).unwrap();
        assert_eq!(e.eval(c(0.0, 0.0), None), Err(EvalError::Pole));
        let e = parse("z^-2", Mode::Exact).unwrap();
        assert_eq!(e.eval(c(0.0, 0.0), None), Err(EvalError::Pole));
        let e = parse("m*z", Mode::Numeric).unwrap();
        assert_eq!(e.eval(c(1.0, 0.0), None), Err(EvalError::UnboundParameter));
    }

    #[test]
    fn reciprocal_avoids_the_pole() {
        let e = Arc::new(parse("1/z", Mode::Exact).unwrap());
        assert_eq!(e.reciprocal().eval(c(0.0, 0.0), None).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn to_rational_function_examples() {
        let f = parse("z^(-1)", Mode::Exact).unwrap().to_rational_function().unwrap();
        assert_eq!(f.to_string(), "(1)/(z)");
        let f = parse("(z+1)*(z-1)", Mode::Exact).unwrap().to_rational_function().unwrap();
        assert_eq!(f.to_string(), "z^2-1");
        let f = parse("z/z", Mode::Exact).unwrap().to_rational_function().unwrap();
        assert_eq!(f, RationalFunction::one());
        assert_eq!(
            parse("1/(z-z)", Mode::Exact).unwrap().to_rational_function(),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            parse("(z-z)^0", Mode::Exact).unwrap().to_rational_function(),
            Err(Error::ZeroToZeroPower)
        );
    }

    #[test]
    fn rational_function_tree_round_trip() {
        let f = parse("(z^2+1/2*i)/(3*z-1)", Mode::Exact).unwrap().to_rational_function().unwrap();
        let back = Expr::from_rational_function(&f).to_rational_function().unwrap();
        assert_eq!(back, f);
    }
}
