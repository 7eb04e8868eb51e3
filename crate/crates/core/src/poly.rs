//! Dense univariate polynomials over Q(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::modular;

/// Dense polynomial in `z`; `coeffs[i]` is the coefficient of `z^i`.
///
/// The zero polynomial is the empty vector, so the last stored coefficient
/// is always nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<GaussianRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Polynomial::monomial(GaussianRational::one(), 1)
    }

    /// `c * z^d`.
    pub fn monomial(c: GaussianRational, d: usize) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); d + 1];
        coeffs[d] = c;
        Polynomial { coeffs }
    }

    /// `z - r`.
    pub fn linear_root(r: &GaussianRational) -> Self {
        Polynomial::new(vec![-r, GaussianRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<GaussianRational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> GaussianRational {
        self.coeffs.get(i).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Divide by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Polynomial::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Exact `k`-th formal derivative (`k = 0` returns the input).
    pub fn derivative(&self, k: usize) -> Self {
        if k >= self.coeffs.len() {
            return Polynomial::zero();
        }
        let coeffs = (k..self.coeffs.len())
            .map(|i| {
                // i (i-1) ... (i-k+1)
                let falling: i64 = ((i - k + 1)..=i).map(|j| j as i64).product();
                self.coeffs[i].scale_int(falling)
            })
            .collect();
        Polynomial::new(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let Some(sd) = self.degree() else {
            return Ok((Polynomial::zero(), Polynomial::zero()));
        };
        if sd < dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let lc = divisor.leading().expect("nonzero divisor");
        let lc_inv = if lc.is_one() { None } else { Some(lc.inv().expect("nonzero")) };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussianRational::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let q = match &lc_inv {
                Some(inv) => top * inv,
                None => top.clone(),
            };
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &(&q * dc);
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        if divisor.is_one() {
            return Ok(self.clone());
        }
        let (q, r) = self.div_rem(divisor)?;
        debug_assert!(r.is_zero(), "inexact division");
        Ok(q)
    }

    pub fn divides(&self, other: &Polynomial) -> bool {
        other.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd. Computed modulo word-size primes and certified by exact
    /// division; the Euclidean sequence is the fallback.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::UndefinedGcd);
        }
        if a.is_zero() || b.is_zero() {
            return Ok(if a.is_zero() { b.monic() } else { a.monic() });
        }
        if a.is_constant() || b.is_constant() {
            return Ok(Polynomial::one());
        }
        match modular::gcd(a, b) {
            Some(g) => Ok(g),
            None => Polynomial::gcd_euclidean(a, b),
        }
    }

    /// Monic gcd by the Euclidean remainder sequence, each remainder made monic.
    pub fn gcd_euclidean(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::UndefinedGcd);
        }
        let (mut r0, mut r1) = if a.degree() >= b.degree() {
            (a.monic(), b.monic())
        } else {
            (b.monic(), a.monic())
        };
        while !r1.is_zero() {
            if r1.is_constant() {
                return Ok(Polynomial::one());
            }
            let (_, r) = r0.div_rem(&r1)?;
            r0 = r1;
            r1 = r.monic();
        }
        Ok(r0)
    }

    /// Yun's squarefree decomposition: monic, squarefree, pairwise coprime
    /// factors `(f_i, i)` with `a = c * prod f_i^i` for a nonzero constant `c`.
    /// Factors equal to 1 are omitted; a nonzero constant gives an empty list.
    pub fn squarefree_decompose(&self) -> Result<Vec<(Polynomial, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(Vec::new());
        }
        let da = self.derivative(1);
        let c = Polynomial::gcd(self, &da)?;
        let mut w = self.exact_div(&c)?.monic();
        let mut y = da.exact_div(&c)?.scale(&self.exact_div(&c)?.leading().unwrap().inv().unwrap());
        let mut zz = &y - &w.derivative(1);
        let mut out = Vec::new();
        let mut mult = 1u32;
        while !w.is_constant() {
            let g = if zz.is_zero() { w.clone() } else { Polynomial::gcd(&w, &zz)? };
            if !g.is_constant() {
                out.push((g.clone(), mult));
            }
            w = w.exact_div(&g)?;
            y = zz.exact_div(&g)?;
            zz = &y - &w.derivative(1);
            mult += 1;
        }
        Ok(out)
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(Polynomial::one());
        }
        let g = Polynomial::gcd(self, &self.derivative(1))?;
        Ok(self.exact_div(&g)?.monic())
    }

    /// Number of distinct complex roots, i.e. the degree of the squarefree part.
    pub fn distinct_root_count(&self) -> Result<usize> {
        Ok(self.squarefree_part()?.degree().unwrap_or(0))
    }

    pub fn to_complex_coeffs(&self) -> Vec<num_complex::Complex64> {
        self.coeffs.iter().map(GaussianRational::to_complex).collect()
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Polynomial::new(coeffs)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, GaussianRational::zero());
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        Polynomial::new(coeffs)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if self.coeffs.len() > 2 && rhs.coeffs.len() > 2 {
            return modular::mul(self, rhs);
        }
        let mut coeffs = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Prints in the expression grammar, e.g. `4*z^3-1` or `(1+i)*z+2`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = if c.is_real() { c.re < num_traits::zero() } else { c.re.is_zero() && c.im < num_traits::zero() };
            let (neg, mag) = if negative {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let compound = !mag.re.is_zero() && !mag.im.is_zero();
            let coef = if compound { format!("({mag})") } else { mag.to_string() };
            match d {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coef}*")?;
                    }
                    if d == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        let q = p(&[3, 0, 2]);
        assert_eq!(&q + &Polynomial::zero(), q);
        assert_eq!(&p(&[0, 2]) * &p(&[0, 0, 3]), p(&[0, 0, 0, 6]));
        assert_eq!((&q - &q), Polynomial::zero());
    }

    #[test]
    fn derivative_examples() {
        let z4 = p(&[0, 0, 0, 0, 1]);
        assert_eq!(z4.derivative(1), p(&[0, 0, 0, 4]));
        assert_eq!(z4.derivative(4), p(&[24]));
        assert_eq!(z4.derivative(5), Polynomial::zero());
        assert_eq!(p(&[5]).derivative(1), Polynomial::zero());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(Polynomial::gcd(&p(&[-1, 0, 1]), &p(&[1, -2, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(Polynomial::gcd(&p(&[0, 1]), &p(&[1, 1])).unwrap(), Polynomial::one());
        let zm2 = p(&[-2, 1]);
        assert_eq!(Polynomial::gcd(&zm2.pow(3), &zm2).unwrap(), zm2);
        assert_eq!(Polynomial::gcd(&Polynomial::zero(), &Polynomial::zero()), Err(Error::UndefinedGcd));
        assert_eq!(Polynomial::gcd(&Polynomial::zero(), &p(&[4, 2])).unwrap(), p(&[2, 1]));
    }

    #[test]
    fn modular_gcd_agrees_with_euclid() {
        let i = GaussianRational::i();
        let half = GaussianRational::new(crate::gaussian::rat(1, 2), crate::gaussian::rat(-3, 7));
        let u = Polynomial::new(vec![half.clone(), i.clone(), GaussianRational::from_int(3)]);
        let v = &Polynomial::linear_root(&i) * &p(&[5, 0, -2, 1]);
        let w = &Polynomial::linear_root(&half).pow(2) * &p(&[1, 1]);
        let a = &(&u * &w) * &v;
        let b = &(&w * &w) * &u.derivative(1);
        let g = Polynomial::gcd(&a, &b).unwrap();
        assert_eq!(g, Polynomial::gcd_euclidean(&a, &b).unwrap());
        assert_eq!(g, w.monic());
    }

    #[test]
    fn product_matches_schoolbook() {
        let a = Polynomial::new(vec![
            GaussianRational::new(crate::gaussian::rat(1, 3), crate::gaussian::rat(2, 5)),
            GaussianRational::from_ints(0, -4),
            GaussianRational::from_int(7),
            GaussianRational::from_ints(1, 1),
        ]);
        let b = &a.derivative(1) + &p(&[0, 0, 0, 0, 2]);
        let mut naive = Polynomial::zero();
        for (i, c) in b.coeffs().iter().enumerate() {
            naive = &naive + &Polynomial::new(
                (0..i).map(|_| GaussianRational::zero()).chain(a.coeffs().iter().map(|x| x * c)).collect(),
            );
        }
        assert_eq!(&a * &b, naive);
    }

    #[test]
    fn squarefree_examples() {
        let a = &p(&[-1, 1]).pow(2) * &p(&[-2, 1]);
        let d = a.squarefree_decompose().unwrap();
        assert_eq!(d, vec![(p(&[-2, 1]), 1), (p(&[-1, 1]), 2)]);
        assert_eq!(a.squarefree_part().unwrap().degree(), Some(2));

        let cube = p(&[-1, 0, 0, 1]);
        assert_eq!(cube.squarefree_decompose().unwrap(), vec![(cube.clone(), 1)]);

        let z4 = &p(&[0, 0, 1]) * &p(&[0, 0, 1]);
        assert_eq!(z4.squarefree_decompose().unwrap(), vec![(p(&[0, 1]), 4)]);

        assert_eq!(Polynomial::zero().squarefree_decompose(), Err(Error::ZeroPolynomial));
        assert!(p(&[7]).squarefree_decompose().unwrap().is_empty());
    }

    #[test]
    fn squarefree_with_non_monic_input() {
        // 3 (z-1)^3 (z+i)^2 z
        let a = (&p(&[-1, 1]).pow(3)
            * &Polynomial::linear_root(&-GaussianRational::i()).pow(2))
            .scale(&GaussianRational::from_int(3));
        let a = &a * &p(&[0, 1]);
        let d = a.squarefree_decompose().unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d[0], (p(&[0, 1]), 1));
        assert_eq!(d[1], (Polynomial::linear_root(&-GaussianRational::i()), 2));
        assert_eq!(d[2], (p(&[-1, 1]), 3));
    }

    #[test]
    fn eval_examples() {
        let i = GaussianRational::i();
        assert_eq!(p(&[1, 0, 1]).eval(&i), GaussianRational::zero());
        assert_eq!(p(&[0, 0, 0, 1]).eval(&GaussianRational::from_int(2)), GaussianRational::from_int(8));
        let q = p(&[7, 3, 2]);
        assert_eq!(q.eval(&GaussianRational::zero()), GaussianRational::from_int(7));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 0, 4]).to_string(), "4*z^3-1");
        assert_eq!(p(&[0, -1]).to_string(), "-z");
        let c = Polynomial::new(vec![GaussianRational::from_int(2), GaussianRational::from_ints(1, 1)]);
        assert_eq!(c.to_string(), "(1+i)*z+2");
    }
}
