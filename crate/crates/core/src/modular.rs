//! Word-size prime fields and the kernels built on them: Gaussian-integer
//! polynomial products and a certified modular gcd over Q(i).
//!
//! A prime `p = 1 mod 4` has two ring maps `Z[i] -> F_p`, sending `i` to `r`
//! and to `-r` where `r^2 = -1`. Images under both maps recover the real and
//! imaginary parts of a coefficient separately, so ordinary CRT and rational
//! reconstruction apply to each part.

use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::gaussian::{GaussianRational, Rational};
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Field {
    pub p: u64,
    /// A square root of -1.
    pub r: u64,
}

impl Field {
    fn new(p: u64) -> Self {
        let e = (p - 1) / 4;
        let r = (2..)
            .map(|g| pow_mod(g, e, p))
            .find(|&x| mul_mod(x, x, p) == p - 1)
            .expect("p = 1 mod 4");
        Field { p, r }
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.p - b }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        pow_mod(a, self.p - 2, self.p)
    }

    fn reduce(&self, x: &BigInt) -> u64 {
        let m = (x.magnitude() % BigUint::from(self.p)).to_u64().expect("below p");
        if x.sign() == Sign::Minus && m != 0 { self.p - m } else { m }
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let mut x = pow_mod(a, d, n);
        if x == 0 || x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn field_table() -> &'static RwLock<Vec<Field>> {
    static TABLE: OnceLock<RwLock<Vec<Field>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Vec::new()))
}

/// The `idx`-th prime `p = 1 mod 4` counting down from `2^62`.
pub(crate) fn field(idx: usize) -> Field {
    if let Some(f) = field_table().read().expect("lock").get(idx) {
        return *f;
    }
    let mut table = field_table().write().expect("lock");
    let mut cand = table.last().map_or((1u64 << 62) - 3, |f| f.p - 4);
    while table.len() <= idx {
        // cand = 1 mod 4 throughout
        if is_prime(cand) {
            table.push(Field::new(cand));
        }
        cand -= 4;
    }
    table[idx]
}

/// Coefficients scaled to Gaussian integers by a common positive denominator.
pub(crate) struct IntPoly {
    pub re: Vec<BigInt>,
    pub im: Vec<BigInt>,
    pub den: BigInt,
}

impl IntPoly {
    pub fn from_poly(a: &Polynomial) -> Self {
        let mut den = BigInt::one();
        for c in a.coeffs() {
            for part in [&c.re, &c.im] {
                if !part.denom().is_one() {
                    den = den.lcm(part.denom());
                }
            }
        }
        let lift = |x: &Rational| {
            if den.is_one() {
                x.numer().clone()
            } else {
                x.numer() * (&den / x.denom())
            }
        };
        IntPoly {
            re: a.coeffs().iter().map(|c| lift(&c.re)).collect(),
            im: a.coeffs().iter().map(|c| lift(&c.im)).collect(),
            den,
        }
    }

    fn is_real(&self) -> bool {
        self.im.iter().all(Zero::is_zero)
    }

    /// Images under `i -> r` and `i -> -r`, or `None` when either leading
    /// coefficient vanishes.
    fn images(&self, f: &Field) -> Option<(Vec<u64>, Vec<u64>)> {
        let n = self.re.len();
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        for (a, b) in self.re.iter().zip(&self.im) {
            let a = f.reduce(a);
            let b = if b.is_zero() { 0 } else { f.mul(f.reduce(b), f.r) };
            plus.push(f.add(a, b));
            minus.push(f.sub(a, b));
        }
        if plus.last() == Some(&0) || minus.last() == Some(&0) {
            return None;
        }
        Some((plus, minus))
    }
}

/// Exact product through Gaussian-integer convolution, so rational
/// normalization happens once per output coefficient.
pub(crate) fn mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (x, y) = (IntPoly::from_poly(a), IntPoly::from_poly(b));
    let n = x.re.len() + y.re.len() - 1;
    let mut re = vec![BigInt::zero(); n];
    let mut im = vec![BigInt::zero(); n];
    let (xr, yr) = (x.is_real(), y.is_real());
    for i in 0..x.re.len() {
        for j in 0..y.re.len() {
            let k = i + j;
            if !x.re[i].is_zero() && !y.re[j].is_zero() {
                re[k] += &x.re[i] * &y.re[j];
            }
            if !xr && !yr && !x.im[i].is_zero() && !y.im[j].is_zero() {
                re[k] -= &x.im[i] * &y.im[j];
            }
            if !yr && !x.re[i].is_zero() && !y.im[j].is_zero() {
                im[k] += &x.re[i] * &y.im[j];
            }
            if !xr && !x.im[i].is_zero() && !y.re[j].is_zero() {
                im[k] += &x.im[i] * &y.re[j];
            }
        }
    }
    let den = x.den * y.den;
    let unit = den.is_one();
    let part = |v: BigInt| {
        if unit { Rational::from_integer(v) } else { Rational::new(v, den.clone()) }
    };
    Polynomial::new(
        re.into_iter()
            .zip(im)
            .map(|(r, i)| GaussianRational::new(part(r), part(i)))
            .collect(),
    )
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd in `F_p[z]`; inputs have nonzero leading coefficients.
fn gcd_mod(f: &Field, a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    let (mut r0, mut r1) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    trim(&mut r1);
    while !r1.is_empty() {
        let inv = f.inv(*r1.last().unwrap());
        let dl = r1.len() - 1;
        while r0.len() > dl {
            let top = r0.len() - 1;
            let q = f.mul(r0[top], inv);
            if q != 0 {
                let shift = top - dl;
                for (j, &c) in r1.iter().enumerate() {
                    r0[shift + j] = f.sub(r0[shift + j], f.mul(q, c));
                }
            }
            r0.pop();
            trim(&mut r0);
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    let inv = f.inv(*r0.last().expect("nonzero input"));
    r0.iter().map(|&c| f.mul(c, inv)).collect()
}

/// `x / y` with `|x|, y <= sqrt(m / 2)` and `x = u y mod m`, if one exists.
fn reconstruct(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
    }
    if s1.is_zero() || &s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rational::new(r1, s1))
}

/// Upper bound on the number of primes tried before giving up.
const MAX_PRIMES: usize = 400;

/// Monic gcd of two nonzero polynomials by CRT over word-size primes.
///
/// Every prime keeping both leading coefficients gives an image degree at
/// least the true gcd degree, so an image of degree 0 proves coprimality. A
/// reconstructed candidate is only returned once it divides both inputs,
/// which together with the degree bound makes it the gcd. `None` means the
/// prime budget ran out.
pub(crate) fn gcd(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    let (x, y) = (IntPoly::from_poly(a), IntPoly::from_poly(b));
    let mut best: Option<usize> = None;
    let mut modulus = BigInt::one();
    let mut acc_re: Vec<BigInt> = Vec::new();
    let mut acc_im: Vec<BigInt> = Vec::new();
    let mut previous: Option<Polynomial> = None;
    for idx in 0..MAX_PRIMES {
        let f = field(idx);
        let (Some((xp, xm)), Some((yp, ym))) = (x.images(&f), y.images(&f)) else {
            continue;
        };
        let gp = gcd_mod(&f, xp, yp);
        let gm = gcd_mod(&f, xm, ym);
        if gp.len() != gm.len() {
            continue;
        }
        let d = gp.len() - 1;
        if d == 0 {
            return Some(Polynomial::one());
        }
        match best {
            Some(b) if d > b => continue,
            Some(b) if d == b => {}
            _ => {
                best = Some(d);
                modulus = BigInt::one();
                acc_re = vec![BigInt::zero(); d];
                acc_im = vec![BigInt::zero(); d];
                previous = None;
            }
        }
        // (gp + gm) / 2 and (gp - gm) / (2 r)
        let half = f.inv(2);
        let inv_2r = f.inv(f.mul(2, f.r));
        let pb = BigInt::from(f.p);
        let m_inv = BigInt::from(f.inv(f.reduce(&modulus)));
        for k in 0..d {
            let re = f.mul(f.add(gp[k], gm[k]), half);
            let im = f.mul(f.sub(gp[k], gm[k]), inv_2r);
            for (acc, v) in [(&mut acc_re[k], re), (&mut acc_im[k], im)] {
                // acc + modulus * ((v - acc) / modulus mod p)
                let delta = (BigInt::from(v) - &*acc).mod_floor(&pb);
                *acc += &modulus * ((delta * &m_inv) % &pb);
            }
        }
        modulus *= &pb;
        let bound = (&modulus >> 1u32).sqrt();
        let mut coeffs = Vec::with_capacity(d + 1);
        for k in 0..d {
            let (Some(re), Some(im)) = (
                reconstruct(&acc_re[k], &modulus, &bound),
                reconstruct(&acc_im[k], &modulus, &bound),
            ) else {
                break;
            };
            coeffs.push(GaussianRational::new(re, im));
        }
        if coeffs.len() < d {
            previous = None;
            continue;
        }
        coeffs.push(GaussianRational::one());
        let candidate = Polynomial::new(coeffs);
        if previous.as_ref() == Some(&candidate) && candidate.divides(a) && candidate.divides(b) {
            return Some(candidate);
        }
        previous = Some(candidate);
    }
    None
}
