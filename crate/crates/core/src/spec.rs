//! Exponent data of the differential monomial and the quantities derived
//! from it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianRational, Rational};

/// `(n; n_1..n_k; t_1..t_k)` for `f^n (f^{n_1})^{(t_1)} ... (f^{n_k})^{(t_k)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialSpec {
    n: u32,
    exponents: Vec<u32>,
    orders: Vec<u32>,
}

impl MonomialSpec {
    pub fn new(n: u32, exponents: Vec<u32>, orders: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidSpec("k must be at least 1".into()));
        }
        if exponents.len() != orders.len() {
            return Err(Error::InvalidSpec(format!(
                "{} exponents but {} derivative orders",
                exponents.len(),
                orders.len()
            )));
        }
        if exponents.iter().chain(&orders).any(|&x| x == 0) {
            return Err(Error::InvalidSpec("exponents and orders must be positive".into()));
        }
        Ok(MonomialSpec { n, exponents, orders })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn k(&self) -> usize {
        self.exponents.len()
    }

    /// Lower degree `n + sum n_j`.
    pub fn lower_degree(&self) -> u64 {
        self.n as u64 + self.exponents.iter().map(|&x| x as u64).sum::<u64>()
    }

    /// Weight `sum t_j`.
    pub fn theta(&self) -> u64 {
        self.orders.iter().map(|&x| x as u64).sum()
    }

    pub fn condition_a(&self) -> bool {
        self.exponents.iter().zip(&self.orders).all(|(n, t)| n >= t)
    }

    pub fn admissible_meromorphic(&self) -> bool {
        self.condition_a() && self.lower_degree() >= 3 + self.theta()
    }

    pub fn admissible_holomorphic(&self) -> bool {
        self.condition_a() && self.lower_degree() >= 2 + self.theta()
    }

    /// Rescaling exponent `-theta / d`.
    pub fn zalcman_alpha(&self) -> Rational {
        Rational::new(
            -BigInt::from(self.theta()),
            BigInt::from(self.lower_degree()),
        )
    }

    pub fn profile(&self) -> SpecProfile {
        SpecProfile {
            lower_degree: self.lower_degree(),
            theta: self.theta(),
            zalcman_alpha: self.zalcman_alpha(),
            admissible_meromorphic: self.admissible_meromorphic(),
            admissible_holomorphic: self.admissible_holomorphic(),
            condition_a: self.condition_a(),
        }
    }

    /// Image of `g(z) = exp(c z + d)` under the monomial.
    ///
    /// `(g^m)^{(t)} = (m c)^t exp(m (c z + d))`, so the product collapses to
    /// `prod (n_i c)^{t_i} * exp(D c z + D d)` with `D = n + sum n_i`.
    pub fn exp_image(&self, c: &GaussianRational) -> Result<ExpImage> {
        if c.is_zero() {
            return Err(Error::ZeroRate);
        }
        let d = self.lower_degree();
        let coefficient = self
            .exponents
            .iter()
            .zip(&self.orders)
            .fold(GaussianRational::from_int(1), |acc, (&ni, &ti)| {
                &acc * &c.scale_int(ni as i64).pow(ti)
            });
        Ok(ExpImage { coefficient, rate: c.scale_int(d as i64), offset_scale: d })
    }
}

/// Parses `n:n1,n2,..:t1,t2,..`.
impl FromStr for MonomialSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [n, ns, ts] = parts.as_slice() else {
            return Err(Error::InvalidSpec(format!("expected n:n1,..:t1,.. but got {s:?}")));
        };
        let num = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidSpec(format!("not a non-negative integer: {x:?}")))
        };
        let list = |x: &str| x.split(',').map(num).collect::<Result<Vec<u32>>>();
        MonomialSpec::new(num(n)?, list(ns)?, list(ts)?)
    }
}

impl fmt::Display for MonomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}:{}:{}", self.n, join(&self.exponents), join(&self.orders))
    }
}

impl Serialize for MonomialSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecProfile {
    pub lower_degree: u64,
    pub theta: u64,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub zalcman_alpha: Rational,
    pub admissible_meromorphic: bool,
    pub admissible_holomorphic: bool,
    pub condition_a: bool,
}

/// `M(exp(c z + d)) = coefficient * exp(rate * z + offset_scale * d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpImage {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub coefficient: GaussianRational,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub rate: GaussianRational,
    pub offset_scale: u64,
}

impl ExpImage {
    pub fn eval(&self, zeta: Complex64, d: Complex64) -> Complex64 {
        self.coefficient.to_complex()
            * (self.rate.to_complex() * zeta + d * self.offset_scale as f64).exp()
    }
}
