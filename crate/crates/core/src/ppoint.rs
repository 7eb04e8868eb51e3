//! Exact p-point counting for the differential monomial, IM sharing, and
//! the degree-at-infinity checks for derivatives of rational functions.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::poly::Polynomial;
use crate::ratfunc::{build_monomial, RationalFunction};
use crate::report::ser_display;
use crate::spec::MonomialSpec;

/// Distinct solutions of `M(f)(z) = target(z)` in the finite plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroReport {
    pub target_description: String,
    pub distinct_count: usize,
    /// `(multiplicity, number of distinct roots with that multiplicity)`, ascending.
    pub multiplicity_profile: Vec<(u32, usize)>,
    pub numerator_degree: usize,
}

impl ZeroReport {
    /// Profile the roots of a nonzero polynomial.
    pub fn of_polynomial(poly: &Polynomial, target_description: String) -> Result<Self> {
        let factors = poly.squarefree_decompose()?;
        let mut profile: BTreeMap<u32, usize> = BTreeMap::new();
        for (g, m) in &factors {
            *profile.entry(*m).or_default() += g.degree().unwrap_or(0);
        }
        let multiplicity_profile: Vec<(u32, usize)> = profile.into_iter().collect();
        Ok(ZeroReport {
            target_description,
            distinct_count: multiplicity_profile.iter().map(|(_, c)| c).sum(),
            multiplicity_profile,
            numerator_degree: poly.degree().unwrap_or(0),
        })
    }

    pub fn is_consistent(&self) -> bool {
        self.distinct_count == self.multiplicity_profile.iter().map(|(_, c)| c).sum::<usize>()
            && self.numerator_degree
                == self.multiplicity_profile.iter().map(|(m, c)| *m as usize * c).sum::<usize>()
    }
}

/// `num(M) - target * den(M)`; its roots are exactly the finite points where
/// `M = target`, since `num(M)` and `den(M)` are coprime.
pub fn target_numerator(m: &RationalFunction, target: &Polynomial) -> Polynomial {
    m.num() - &(target * m.den())
}

pub fn distinct_ppoints(
    f: &RationalFunction,
    spec: &MonomialSpec,
    target: &Polynomial,
) -> Result<ZeroReport> {
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let m = build_monomial(f, spec)?;
    let nt = target_numerator(&m, target);
    if nt.is_zero() {
        return Err(Error::InfinitelyManyPoints);
    }
    ZeroReport::of_polynomial(&nt, format!("M(f) = {target}"))
}

/// Check the two-p-point property for an admissible spec and `p != 0`.
/// Returns the report so a `false` outcome can be reproduced.
pub fn lemma4_report(
    f: &RationalFunction,
    spec: &MonomialSpec,
    p: &GaussianRational,
) -> Result<(bool, ZeroReport)> {
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    if p.is_zero() {
        return Err(Error::ZeroTarget);
    }
    if !spec.admissible_meromorphic() {
        let why = if spec.condition_a() {
            "n + sum n_j < 3 + sum t_j"
        } else {
            "some n_j < t_j"
        };
        return Err(Error::InadmissibleSpec(why.into()));
    }
    let report = distinct_ppoints(f, spec, &Polynomial::constant(p.clone()))?;
    Ok((report.distinct_count >= 2, report))
}

pub fn lemma4_verdict(f: &RationalFunction, spec: &MonomialSpec, p: &GaussianRational) -> Result<bool> {
    lemma4_report(f, spec, p).map(|(v, _)| v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShareVerdict {
    pub shared: bool,
    #[serde(serialize_with = "ser_display")]
    pub zero_set_left: Polynomial,
    #[serde(serialize_with = "ser_display")]
    pub zero_set_right: Polynomial,
}

/// Whether `M(f)` and `M(g)` take the value `target` at the same points,
/// ignoring multiplicity: both monic squarefree parts must coincide.
pub fn shares_value(
    f: &RationalFunction,
    g: &RationalFunction,
    spec: &MonomialSpec,
    target: &Polynomial,
) -> Result<ShareVerdict> {
    let zero_set = |h: &RationalFunction| -> Result<Polynomial> {
        if h.is_constant() {
            return Err(Error::ConstantFunction);
        }
        let nt = target_numerator(&build_monomial(h, spec)?, target);
        if nt.is_zero() {
            return Err(Error::InfinitelyManyPoints);
        }
        nt.squarefree_part()
    };
    let left = zero_set(f)?;
    let right = zero_set(g)?;
    Ok(ShareVerdict { shared: left == right, zero_set_left: left, zero_set_right: right })
}

/// `deg_inf(R^(k)) <= deg_inf(R) - k` for `R` with non-constant denominator.
pub fn degree_drop_check(r: &RationalFunction, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::Hypothesis("k must be positive".into()));
    }
    if r.den().is_constant() {
        return Err(Error::Hypothesis("denominator must be non-constant".into()));
    }
    let d = r.derivative(k);
    if d.is_zero() {
        return Err(Error::Hypothesis("R^(k) vanishes identically".into()));
    }
    Ok(d.deg_infinity()? <= r.deg_infinity()? - k as i64)
}

/// `deg_inf(R^(k)) = deg_inf(R) - k` for `R` = polynomial of degree
/// `m >= k` plus a proper fraction.
pub fn degree_drop_equality_check(r: &RationalFunction, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::Hypothesis("k must be positive".into()));
    }
    let (poly_part, _) = r.num().div_rem(r.den())?;
    let m = match poly_part.degree() {
        Some(m) if m >= 1 => m,
        _ => return Err(Error::Hypothesis("no non-constant polynomial part".into())),
    };
    if k > m {
        return Err(Error::Hypothesis(format!("k = {k} exceeds polynomial degree {m}")));
    }
    Ok(r.derivative(k).deg_infinity()? == r.deg_infinity()? - k as i64)
}

/// Degree bookkeeping for `f = A prod (z - a_i)^{m_i} / prod (z - b_j)^{n'_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorProfile {
    /// Number of distinct zeros.
    pub s: usize,
    /// Number of distinct poles.
    pub t: usize,
    pub zero_multiplicities: Vec<u32>,
    pub pole_multiplicities: Vec<u32>,
    /// `n * sum m_i`
    pub m_big: u64,
    /// `n * sum n'_j`
    pub n_big: u64,
    /// `n_i * sum m_j`, one entry per factor of the monomial.
    pub m_list: Vec<u64>,
    /// `n_i * sum n'_j`
    pub n_list: Vec<u64>,
}

fn multiplicities(p: &Polynomial) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for (g, m) in p.squarefree_decompose()? {
        out.extend(std::iter::repeat_n(m, g.degree().unwrap_or(0)));
    }
    Ok(out)
}

pub fn factor_profile(f: &RationalFunction, spec: &MonomialSpec) -> Result<FactorProfile> {
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let zero_multiplicities = multiplicities(f.num())?;
    let pole_multiplicities = multiplicities(f.den())?;
    let zsum: u64 = zero_multiplicities.iter().map(|&m| m as u64).sum();
    let psum: u64 = pole_multiplicities.iter().map(|&m| m as u64).sum();
    let n = spec.n() as u64;
    Ok(FactorProfile {
        s: zero_multiplicities.len(),
        t: pole_multiplicities.len(),
        m_big: n * zsum,
        n_big: n * psum,
        m_list: spec.exponents().iter().map(|&ni| ni as u64 * zsum).collect(),
        n_list: spec.exponents().iter().map(|&ni| ni as u64 * psum).collect(),
        zero_multiplicities,
        pole_multiplicities,
    })
}
