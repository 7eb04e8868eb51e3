//! Rational functions over Q(i) in lowest terms, and the differential
//! monomial `f^n (f^n1)^(t1) ... (f^nk)^(tk)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::poly::Polynomial;
use crate::spec::MonomialSpec;

/// `num / den` with `gcd(num, den) = 1` and `den` monic. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Cancel the common factor and make the denominator monic.
    pub fn normalize(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let g = Polynomial::gcd(&num, &den)?;
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        Ok(Self::from_coprime(num, den))
    }

    /// Assemble from a pair already known to be coprime; only the monic
    /// scaling is applied.
    pub(crate) fn from_coprime(num: Polynomial, den: Polynomial) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lc.inv().expect("nonzero");
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn z() -> Self {
        Self::from_polynomial(Polynomial::z())
    }

    pub fn zero() -> Self {
        Self::from_polynomial(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_polynomial(Polynomial::one())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::normalize(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Self::normalize(num, &self.den * &rhs.den).expect("nonzero den")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    /// Product with cross-cancellation: only `num_a` against `den_b` and
    /// `num_b` against `den_a` can share factors.
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let g1 = Polynomial::gcd(&self.num, &rhs.den).expect("nonzero");
        let g2 = Polynomial::gcd(&rhs.num, &self.den).expect("nonzero");
        let cancel = |p: &Polynomial, g: &Polynomial| {
            if g.is_one() { p.clone() } else { p.exact_div(g).expect("divisor") }
        };
        let num = &cancel(&self.num, &g1) * &cancel(&rhs.num, &g2);
        let den = &cancel(&self.den, &g2) * &cancel(&rhs.den, &g1);
        Self::from_coprime(num, den)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    /// Power by repeated squaring. Coprimality is inherited, so no gcd is
    /// taken.
    pub fn pow(&self, e: u32) -> Result<Self> {
        if e == 0 {
            if self.is_zero() {
                return Err(Error::ZeroToZeroPower);
            }
            return Ok(Self::one());
        }
        Ok(RationalFunction { num: self.num.pow(e), den: self.den.pow(e) })
    }

    /// `self^e` for a signed exponent.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let mag = u32::try_from(e.unsigned_abs()).map_err(|_| Error::Usage("exponent too large".into()))?;
        if e < 0 {
            self.recip()?.pow(mag)
        } else {
            self.pow(mag)
        }
    }

    /// Exact `k`-th derivative in lowest terms.
    pub fn derivative(&self, k: usize) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        if self.den.is_constant() {
            return Self::from_polynomial(self.num.derivative(k));
        }
        let rad = self.den.squarefree_part().expect("nonzero den");
        let s = (&self.den.derivative(1) * &rad).exact_div(&self.den).expect("radical");
        let num = derivative_chain(self.num.clone(), &rad, &s, k);
        RationalFunction { num, den: &self.den * &rad.pow(k as u32) }
    }

    /// `deg(num) - deg(den)`.
    pub fn deg_infinity(&self) -> Result<i64> {
        let dn = self.num.degree().ok_or(Error::ZeroFunction)?;
        let dd = self.den.degree().expect("nonzero den");
        Ok(dn as i64 - dd as i64)
    }

    /// Value at a point, `None` at a pole.
    pub fn eval(&self, z: &GaussianRational) -> Option<GaussianRational> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(z) / &d)
    }
}

/// Numerator of `(N / D)^{(k)}` over `D rad^k`, where `rad` is the radical
/// of `D` and `s = D' rad / D`.
///
/// With `D_j = D rad^j` one step is
/// `(N / D_j)' = (N' rad - N (s + j rad')) / (D_j rad)`. When `N` has no
/// root in common with `D` the new numerator is nonzero at every root of
/// `rad`, so no gcd is ever needed.
fn derivative_chain(mut num: Polynomial, rad: &Polynomial, s: &Polynomial, k: usize) -> Polynomial {
    let drad = rad.derivative(1);
    for j in 0..k {
        if num.is_zero() {
            break;
        }
        let log = s + &drad.scale(&GaussianRational::from_int(j as i64));
        num = &(&num.derivative(1) * rad) - &(&num * &log);
    }
    num
}

/// The differential monomial `f^n * prod_i (f^{n_i})^{(t_i)}`.
///
/// For `f = P / Q` in lowest terms with radical `R` of `Q`, the factor
/// `(f^{n_i})^{(t_i)}` has denominator `Q^{n_i} R^{t_i}` and a numerator
/// prime to `Q`. The product is therefore already reduced, with denominator
/// `Q^{d} R^{theta}`.
pub fn build_monomial(f: &RationalFunction, spec: &MonomialSpec) -> Result<RationalFunction> {
    if f.is_zero() {
        return Err(Error::Hypothesis("monomial of the zero function".into()));
    }
    let (p, q) = (f.num(), f.den());
    let pairs = spec.exponents().iter().zip(spec.orders());
    if q.is_constant() {
        let mut num = p.pow(spec.n());
        for (&ni, &ti) in pairs {
            num = &num * &p.pow(ni).derivative(ti as usize);
        }
        return Ok(RationalFunction::from_polynomial(num));
    }
    let rad = q.squarefree_part()?;
    let s_q = (&q.derivative(1) * &rad).exact_div(q)?;
    let mut num = p.pow(spec.n());
    for (&ni, &ti) in pairs {
        let s = s_q.scale(&GaussianRational::from_int(ni as i64));
        num = &num * &derivative_chain(p.pow(ni), &rad, &s, ti as usize);
    }
    let den = &q.pow(spec.lower_degree() as u32) * &rad.pow(spec.theta() as u32);
    Ok(RationalFunction { num, den })
}

/// Prints in the expression grammar as `(num)/(den)` or just the polynomial.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl std::ops::Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: Self) -> Self {
        RationalFunction::add(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::normalize(p(n), p(d)).unwrap()
    }

    fn inv_z() -> RationalFunction {
        rf(&[1], &[0, 1])
    }

    #[test]
    fn normalize_examples() {
        let a = rf(&[-1, 0, 1], &[-1, 1]);
        assert_eq!((a.num(), a.den()), (&p(&[1, 1]), &p(&[1])));
        let b = rf(&[0, 2], &[2]);
        assert_eq!((b.num(), b.den()), (&p(&[0, 1]), &p(&[1])));
        let c = rf(&[0, 1], &[0, 1]);
        assert_eq!(c, RationalFunction::one());
        assert_eq!(
            RationalFunction::normalize(p(&[1]), Polynomial::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn normalize_is_idempotent() {
        let a = rf(&[3, 0, 2], &[4, 6, 2]);
        let again = RationalFunction::normalize(a.num().clone(), a.den().clone()).unwrap();
        assert_eq!(a, again);
        assert!(a.den().is_monic());
    }

    #[test]
    fn arith_examples() {
        assert_eq!(inv_z().mul(&inv_z()), rf(&[1], &[0, 0, 1]));
        let f = rf(&[1, 2], &[3, 0, 1]);
        assert_eq!(f.sub(&f), RationalFunction::zero());
        assert_eq!(inv_z().add(&inv_z()), rf(&[2], &[0, 1]));
        assert_eq!(f.div(&f).unwrap(), RationalFunction::one());
        assert_eq!(f.div(&RationalFunction::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(inv_z().pow(3).unwrap(), rf(&[1], &[0, 0, 0, 1]));
        assert_eq!(rf(&[1, 1], &[3, 1]).pow(0).unwrap(), RationalFunction::one());
        assert_eq!(rf(&[0, 1], &[1, 1]).pow(2).unwrap(), rf(&[0, 0, 1], &[1, 2, 1]));
        assert_eq!(RationalFunction::zero().pow(0), Err(Error::ZeroToZeroPower));
        assert_eq!(RationalFunction::zero().pow(2).unwrap(), RationalFunction::zero());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(inv_z().derivative(1), rf(&[-1], &[0, 0, 1]));
        assert_eq!(rf(&[0, 0, 0, 0, 1], &[1]).derivative(2), rf(&[0, 0, 12], &[1]));
        // 1/z -> -1/z^2 -> 2/z^3
        assert_eq!(inv_z().derivative(2), rf(&[2], &[0, 0, 0, 1]));
    }

    #[test]
    fn derivative_matches_naive_quotient_rule() {
        let f = rf(&[1, -3, 0, 2], &[0, 0, 1, 0, -1, 1]);
        let mut naive = f.clone();
        for _ in 0..3 {
            let n = &(&naive.num().derivative(1) * naive.den()) - &(naive.num() * &naive.den().derivative(1));
            naive = RationalFunction::normalize(n, naive.den() * naive.den()).unwrap();
        }
        assert_eq!(f.derivative(3), naive);
    }

    #[test]
    fn deg_infinity_examples() {
        assert_eq!(rf(&[1, 0, 1], &[0, 1]).deg_infinity(), Ok(1));
        assert_eq!(inv_z().deg_infinity(), Ok(-1));
        assert_eq!(rf(&[5], &[1]).deg_infinity(), Ok(0));
        assert_eq!(RationalFunction::zero().deg_infinity(), Err(Error::ZeroFunction));
    }

    #[test]
    fn monomial_examples() {
        let z = RationalFunction::z();
        let s = MonomialSpec::new(0, vec![4], vec![1]).unwrap();
        assert_eq!(build_monomial(&z, &s).unwrap(), rf(&[0, 0, 0, 4], &[1]));

        let s = MonomialSpec::new(3, vec![1], vec![1]).unwrap();
        assert_eq!(build_monomial(&inv_z(), &s).unwrap(), rf(&[-1], &[0, 0, 0, 0, 0, 1]));

        let s = MonomialSpec::new(1, vec![2], vec![2]).unwrap();
        assert_eq!(build_monomial(&z, &s).unwrap(), rf(&[0, 2], &[1]));

        assert!(build_monomial(&RationalFunction::zero(), &s).is_err());
    }

    #[test]
    fn monomial_matches_generic_product() {
        // f = (z^2 + i) / ((z - 1)^2 (z + 2))
        let num = Polynomial::new(vec![GaussianRational::i(), GaussianRational::zero(), GaussianRational::one()]);
        let den = &p(&[-1, 1]).pow(2) * &p(&[2, 1]);
        let f = RationalFunction::normalize(num, den).unwrap();
        let s = MonomialSpec::new(2, vec![1, 3], vec![1, 2]).unwrap();
        let mut generic = f.pow(2).unwrap();
        for (&ni, &ti) in s.exponents().iter().zip(s.orders()) {
            let mut g = f.pow(ni).unwrap();
            for _ in 0..ti {
                let n = &(&g.num().derivative(1) * g.den()) - &(g.num() * &g.den().derivative(1));
                g = RationalFunction::normalize(n, g.den() * g.den()).unwrap();
            }
            generic = generic.mul(&g);
        }
        assert_eq!(build_monomial(&f, &s).unwrap(), generic);
    }
}
