//! Seeded instance generators and verification campaigns.
//!
//! Trial `i` of a campaign with seed `s` draws everything from a ChaCha8
//! stream seeded with `s ^ i`, so results do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::gaussian::{GaussianRational, Rational};
use crate::numeric::{numeric_monomial_eval, NumericFunction};
use crate::poly::Polynomial;
use crate::ppoint::{
    degree_drop_check, degree_drop_equality_check, distinct_ppoints, lemma4_report, shares_value, ZeroReport,
};
use crate::ratfunc::RationalFunction;
use crate::spec::{ExpImage, MonomialSpec};

const MAX_ATTEMPTS: usize = 1000;

/// Relative error bound for the exponential-image cross-check.
pub const EXP_IDENTITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_poly_degree: usize,
    pub max_k: usize,
    pub max_exponent: u32,
    pub coefficient_height: i64,
    /// Worker threads; 1 runs inline. Not echoed: results are independent of it.
    #[serde(skip)]
    pub jobs: usize,
    /// Also sample specs that break the degree condition (lemma4 only).
    pub negative_controls: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 0,
            trials: 1000,
            max_poly_degree: 4,
            max_k: 3,
            max_exponent: 4,
            coefficient_height: 5,
            jobs: 1,
            negative_controls: false,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0
            || self.max_poly_degree == 0
            || self.max_k == 0
            || self.max_exponent == 0
            || self.coefficient_height < 1
        {
            return Err(Error::Usage("campaign bounds must all be at least 1".into()));
        }
        Ok(())
    }

    pub fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ trial as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecMode {
    Meromorphic,
    Holomorphic,
}

fn gaussian_int<R: Rng>(rng: &mut R, height: i64) -> GaussianRational {
    GaussianRational::from_ints(rng.random_range(-height..=height), rng.random_range(-height..=height))
}

/// Random polynomial whose degree is drawn uniformly from `degrees`.
fn random_poly<R: Rng>(rng: &mut R, degrees: std::ops::RangeInclusive<usize>, height: i64) -> Polynomial {
    let degree = rng.random_range(degrees);
    let mut coeffs: Vec<GaussianRational> = (0..=degree).map(|_| gaussian_int(rng, height)).collect();
    while coeffs[degree].is_zero() {
        coeffs[degree] = gaussian_int(rng, height);
    }
    Polynomial::new(coeffs)
}

/// Nonzero `a/b + (c/d) i` with `|a|, |c| <= height` and `1 <= b, d <= height`.
pub fn gen_nonzero_constant<R: Rng>(rng: &mut R, height: i64) -> GaussianRational {
    loop {
        let mut part = || {
            Rational::new(rng.random_range(-height..=height).into(), rng.random_range(1..=height).into())
        };
        let c = GaussianRational::new(part(), part());
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random non-constant rational function. With probability 1/4 the
/// denominator is 1; otherwise it has degree between 1 and the bound.
pub fn gen_ratfunc<R: Rng>(rng: &mut R, config: &CampaignConfig) -> Result<RationalFunction> {
    let h = config.coefficient_height;
    let dmax = config.max_poly_degree;
    for _ in 0..MAX_ATTEMPTS {
        let f = if rng.random_range(0..4) == 0 {
            RationalFunction::from_polynomial(random_poly(rng, 1..=dmax, h))
        } else {
            let num = random_poly(rng, 0..=dmax, h);
            let den = random_poly(rng, 1..=dmax, h);
            RationalFunction::normalize(num, den)?
        };
        if !f.is_constant() {
            return Ok(f);
        }
    }
    Err(Error::ResamplingExhausted(MAX_ATTEMPTS))
}

pub fn gen_ratfunc_with_pole<R: Rng>(rng: &mut R, config: &CampaignConfig) -> Result<RationalFunction> {
    for _ in 0..MAX_ATTEMPTS {
        let f = gen_ratfunc(rng, config)?;
        if !f.den().is_constant() {
            return Ok(f);
        }
    }
    Err(Error::ResamplingExhausted(MAX_ATTEMPTS))
}

fn raw_spec<R: Rng>(rng: &mut R, config: &CampaignConfig) -> MonomialSpec {
    let k = rng.random_range(1..=config.max_k);
    let exponents: Vec<u32> = (0..k).map(|_| rng.random_range(1..=config.max_exponent)).collect();
    let orders = exponents.iter().map(|&nj| rng.random_range(1..=nj)).collect();
    let n = rng.random_range(0..=config.max_exponent);
    MonomialSpec::new(n, exponents, orders).expect("positive by construction")
}

/// Random spec with `t_j <= n_j`, rejection-sampled until the mode's
/// degree bound holds.
pub fn gen_spec<R: Rng>(rng: &mut R, config: &CampaignConfig, mode: SpecMode) -> Result<MonomialSpec> {
    for _ in 0..MAX_ATTEMPTS {
        let s = raw_spec(rng, config);
        let ok = match mode {
            SpecMode::Meromorphic => s.admissible_meromorphic(),
            SpecMode::Holomorphic => s.admissible_holomorphic(),
        };
        if ok {
            return Ok(s);
        }
    }
    Err(Error::ResamplingExhausted(MAX_ATTEMPTS))
}

/// Spec with `t_j <= n_j` but `n + sum n_j < 3 + sum t_j`.
pub fn gen_spec_violating_degree<R: Rng>(rng: &mut R, config: &CampaignConfig) -> Result<MonomialSpec> {
    for _ in 0..MAX_ATTEMPTS {
        let s = raw_spec(rng, config);
        if !s.admissible_meromorphic() {
            return Ok(s);
        }
    }
    Err(Error::ResamplingExhausted(MAX_ATTEMPTS))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CampaignName {
    Lemma4,
    DegreeDrop,
    DegreeEquality,
    ExpIdentity,
    ShareReflexive,
}

impl CampaignName {
    pub const ALL: [CampaignName; 5] = [
        CampaignName::Lemma4,
        CampaignName::DegreeDrop,
        CampaignName::DegreeEquality,
        CampaignName::ExpIdentity,
        CampaignName::ShareReflexive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CampaignName::Lemma4 => "lemma4",
            CampaignName::DegreeDrop => "degree-drop",
            CampaignName::DegreeEquality => "degree-equality",
            CampaignName::ExpIdentity => "exp-identity",
            CampaignName::ShareReflexive => "share-reflexive",
        }
    }
}

impl fmt::Display for CampaignName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CampaignName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CampaignName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown campaign {s:?}")))
    }
}

/// Everything needed to replay a failing trial through the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationRecord {
    pub trial: usize,
    pub expression: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression_g: Option<String>,
    pub spec: String,
    pub target: String,
    pub observed: String,
    pub rerun: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub campaign_name: String,
    pub config: CampaignConfig,
    pub trials_run: usize,
    pub violations: Vec<ViolationRecord>,
    pub elapsed_ms: u64,
    pub verdict: &'static str,
    pub details: Value,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// JSON with `elapsed_ms` zeroed, for byte comparisons across runs.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        crate::report::to_json(&r)
    }
}

/// What one trial contributes to the report.
#[derive(Clone, Debug, Default)]
struct TrialOutcome {
    violation: Option<ViolationRecord>,
    /// lemma4: distinct count.
    count: Option<usize>,
    /// lemma4 negative control: `Some(Some(count))`, or `Some(None)` when
    /// the monomial equals p identically.
    control: Option<Option<usize>>,
    /// exp-identity: worst relative error.
    rel_error: Option<f64>,
}

fn quote(s: &str) -> String {
    format!("\"{s}\"")
}

// Rerun commands recorded with each violation. Arguments are double-quoted
// so the line can be pasted into a POSIX shell.

pub fn rerun_ppoints(f: &RationalFunction, spec: &MonomialSpec, p: &GaussianRational) -> String {
    format!("monoshare ppoints {} --spec {spec} --p={} --verdict", quote(&f.to_string()), quote(&p.to_string()))
}

pub fn rerun_deg_inf(f: &RationalFunction, k: usize) -> String {
    format!("monoshare deg-inf {} --k {k}", quote(&f.to_string()))
}

pub fn rerun_exp_identity(spec: &MonomialSpec, c: &GaussianRational, d: &GaussianRational) -> String {
    format!("monoshare exp-identity --spec {spec} --c={} --d={}", quote(&c.to_string()), quote(&d.to_string()))
}

pub fn rerun_share(f: &RationalFunction, g: &RationalFunction, spec: &MonomialSpec, target: &Polynomial) -> String {
    format!(
        "monoshare share {} {} --spec {spec} --target={}",
        quote(&f.to_string()),
        quote(&g.to_string()),
        quote(&target.to_string())
    )
}

/// Observation recorded for a two-p-point instance; `ppoints --verdict`
/// prints the same text.
pub fn lemma4_observation(report: &ZeroReport) -> String {
    format!("distinct_count = {}", report.distinct_count)
}

/// Degrees at infinity of `f` and of its `k`-th derivative.
pub fn degree_observation(f: &RationalFunction, k: usize) -> Result<String> {
    Ok(format!(
        "deg_inf(f^({k})) = {}, deg_inf(f) = {}",
        f.derivative(k).deg_infinity()?,
        f.deg_infinity()?
    ))
}

/// Sharing verdicts for `(f, f)`, `(f, g)` and `(g, f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShareObservation {
    pub reflexive: bool,
    pub forward: bool,
    pub backward: bool,
}

impl ShareObservation {
    pub fn consistent(&self) -> bool {
        self.reflexive && self.forward == self.backward
    }

    pub fn text(&self) -> String {
        format!(
            "share(f,f) = {}, share(f,g) = {}, share(g,f) = {}",
            self.reflexive, self.forward, self.backward
        )
    }
}

pub fn share_observation(
    f: &RationalFunction,
    g: &RationalFunction,
    spec: &MonomialSpec,
    target: &Polynomial,
) -> Result<ShareObservation> {
    Ok(ShareObservation {
        reflexive: shares_value(f, f, spec, target)?.shared,
        forward: shares_value(f, g, spec, target)?.shared,
        backward: shares_value(g, f, spec, target)?.shared,
    })
}

/// Ten fixed sample points spiralling out to radius 0.5.
pub fn exp_identity_points() -> Vec<Complex64> {
    (0..10)
        .map(|j| Complex64::from_polar(0.05 * (j + 1) as f64, 2.399963229728653 * j as f64))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpIdentityCheck {
    pub image: ExpImage,
    /// `rate = (n + sum n_i) c` and `offset_scale = n + sum n_i`, exactly.
    pub rate_exact: bool,
    pub max_relative_error: f64,
    pub tolerance: f64,
}

impl ExpIdentityCheck {
    pub fn passed(&self) -> bool {
        self.rate_exact && self.max_relative_error <= self.tolerance
    }

    pub fn observation(&self) -> String {
        format!("max relative error {:e}, rate exact: {}", self.max_relative_error, self.rate_exact)
    }
}

/// Compare the closed form of `M(exp(c z + d))` against direct evaluation of
/// the monomial tree at [`exp_identity_points`].
pub fn exp_identity_check(spec: &MonomialSpec, c: &GaussianRational, d: &GaussianRational) -> Result<ExpIdentityCheck> {
    let image = spec.exp_image(c)?;
    let big_d = spec.lower_degree();
    let rate_exact = image.rate == c * &GaussianRational::from_int(big_d as i64) && image.offset_scale == big_d;
    let max_relative_error = exp_identity_error(spec, c, d, &exp_identity_points())?;
    Ok(ExpIdentityCheck { image, rate_exact, max_relative_error, tolerance: EXP_IDENTITY_TOLERANCE })
}

fn lemma4_trial(config: &CampaignConfig, trial: usize) -> Result<TrialOutcome> {
    let mut rng = config.trial_rng(trial);
    let f = gen_ratfunc(&mut rng, config)?;
    let spec = gen_spec(&mut rng, config, SpecMode::Meromorphic)?;
    let p = gen_nonzero_constant(&mut rng, config.coefficient_height);
    let (ok, report) = lemma4_report(&f, &spec, &p)?;
    let mut out = TrialOutcome { count: Some(report.distinct_count), ..Default::default() };
    if !ok {
        out.violation = Some(ViolationRecord {
            trial,
            expression: f.to_string(),
            expression_g: None,
            spec: spec.to_string(),
            target: p.to_string(),
            observed: lemma4_observation(&report),
            rerun: rerun_ppoints(&f, &spec, &p),
        });
    }
    if config.negative_controls {
        let g = gen_ratfunc(&mut rng, config)?;
        let bad = gen_spec_violating_degree(&mut rng, config)?;
        let q = gen_nonzero_constant(&mut rng, config.coefficient_height);
        out.control = Some(match distinct_ppoints(&g, &bad, &Polynomial::constant(q)) {
            Ok(r) => Some(r.distinct_count),
            Err(Error::InfinitelyManyPoints) => None,
            Err(e) => return Err(e),
        });
    }
    Ok(out)
}

fn degree_violation(trial: usize, f: &RationalFunction, k: usize) -> Result<ViolationRecord> {
    Ok(ViolationRecord {
        trial,
        expression: f.to_string(),
        expression_g: None,
        spec: String::new(),
        target: format!("k = {k}"),
        observed: degree_observation(f, k)?,
        rerun: rerun_deg_inf(f, k),
    })
}

fn degree_drop_trial(config: &CampaignConfig, trial: usize) -> Result<TrialOutcome> {
    let mut rng = config.trial_rng(trial);
    let f = gen_ratfunc_with_pole(&mut rng, config)?;
    let k = rng.random_range(1..=config.max_k);
    let mut out = TrialOutcome::default();
    if !degree_drop_check(&f, k)? {
        out.violation = Some(degree_violation(trial, &f, k)?);
    }
    Ok(out)
}

fn degree_equality_trial(config: &CampaignConfig, trial: usize) -> Result<TrialOutcome> {
    let mut rng = config.trial_rng(trial);
    let h = config.coefficient_height;
    let m = rng.random_range(1..=config.max_poly_degree);
    let poly_part = random_poly(&mut rng, m..=m, h);
    let b = random_poly(&mut rng, 1..=config.max_poly_degree, h);
    let b_deg = b.degree().expect("nonzero");
    let p = if rng.random_range(0..8) == 0 {
        Polynomial::zero()
    } else {
        random_poly(&mut rng, 0..=b_deg - 1, h)
    };
    let r = RationalFunction::from_polynomial(poly_part).add(&RationalFunction::normalize(p, b)?);
    let k = rng.random_range(1..=m.min(config.max_k));
    let mut out = TrialOutcome::default();
    if !degree_drop_equality_check(&r, k)? {
        out.violation = Some(degree_violation(trial, &r, k)?);
    }
    Ok(out)
}

/// Worst relative error between `M(exp(c z + d))` evaluated from its tree
/// and the closed form, over `points` sample points.
pub fn exp_identity_error(
    spec: &MonomialSpec,
    c: &GaussianRational,
    d: &GaussianRational,
    points: &[Complex64],
) -> Result<f64> {
    let image = spec.exp_image(c)?;
    let g = NumericFunction::new(Expr::exp(Expr::add(
        Expr::mul(Expr::constant(c.clone()), Expr::var()),
        Expr::constant(d.clone()),
    )));
    let dz = d.to_complex();
    let mut worst: f64 = 0.0;
    for &zeta in points {
        let numeric = numeric_monomial_eval(&g, spec, zeta)
            .map_err(|_| Error::Hypothesis("exp(c z + d) overflowed".into()))?;
        let closed = image.eval(zeta, dz);
        worst = worst.max((numeric - closed).norm() / closed.norm());
    }
    Ok(worst)
}

fn exp_identity_trial(config: &CampaignConfig, trial: usize) -> Result<TrialOutcome> {
    let mut rng = config.trial_rng(trial);
    let spec = gen_spec(&mut rng, config, SpecMode::Meromorphic)?;
    let c = gen_nonzero_constant(&mut rng, config.coefficient_height);
    let d = {
        let h = config.coefficient_height;
        let mut part = || Rational::new(rng.random_range(-h..=h).into(), rng.random_range(1..=h).into());
        GaussianRational::new(part(), part())
    };
    let check = exp_identity_check(&spec, &c, &d)?;
    let mut out = TrialOutcome { rel_error: Some(check.max_relative_error), ..Default::default() };
    if !check.passed() {
        out.violation = Some(ViolationRecord {
            trial,
            expression: format!("exp(({c})*z+({d}))"),
            expression_g: None,
            spec: spec.to_string(),
            target: String::new(),
            observed: check.observation(),
            rerun: rerun_exp_identity(&spec, &c, &d),
        });
    }
    Ok(out)
}

fn share_trial(config: &CampaignConfig, trial: usize) -> Result<TrialOutcome> {
    let mut rng = config.trial_rng(trial);
    let f = gen_ratfunc(&mut rng, config)?;
    let g = gen_ratfunc(&mut rng, config)?;
    let spec = gen_spec(&mut rng, config, SpecMode::Meromorphic)?;
    let target = Polynomial::constant(gen_nonzero_constant(&mut rng, config.coefficient_height));
    let obs = share_observation(&f, &g, &spec, &target)?;
    let mut out = TrialOutcome::default();
    if !obs.consistent() {
        out.violation = Some(ViolationRecord {
            trial,
            expression: f.to_string(),
            expression_g: Some(g.to_string()),
            spec: spec.to_string(),
            target: target.to_string(),
            observed: obs.text(),
            rerun: rerun_share(&f, &g, &spec, &target),
        });
    }
    Ok(out)
}

/// `[{distinct_count, trials}]` in increasing count order.
fn distribution(counts: &BTreeMap<usize, usize>) -> Value {
    counts
        .iter()
        .map(|(k, v)| json!({ "distinct_count": k, "trials": v }))
        .collect()
}

pub fn run_campaign(name: CampaignName, config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let start = Instant::now();
    let trial = |i: usize| -> Result<TrialOutcome> {
        match name {
            CampaignName::Lemma4 => lemma4_trial(config, i),
            CampaignName::DegreeDrop => degree_drop_trial(config, i),
            CampaignName::DegreeEquality => degree_equality_trial(config, i),
            CampaignName::ExpIdentity => exp_identity_trial(config, i),
            CampaignName::ShareReflexive => share_trial(config, i),
        }
    };
    let outcomes: Vec<TrialOutcome> = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Usage(e.to_string()))?;
        pool.install(|| (0..config.trials).into_par_iter().map(trial).collect::<Result<_>>())?
    } else {
        (0..config.trials).map(trial).collect::<Result<_>>()?
    };

    let mut violations = Vec::new();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut controls: BTreeMap<usize, usize> = BTreeMap::new();
    let mut identically_p = 0usize;
    let mut worst_error: f64 = 0.0;
    for o in &outcomes {
        if let Some(v) = &o.violation {
            violations.push(v.clone());
        }
        if let Some(c) = o.count {
            *counts.entry(c).or_default() += 1;
        }
        match o.control {
            Some(Some(n)) => *controls.entry(n).or_default() += 1,
            Some(None) => identically_p += 1,
            None => {}
        }
        if let Some(e) = o.rel_error {
            worst_error = worst_error.max(e);
        }
    }
    let details = match name {
        CampaignName::Lemma4 => {
            let mut d = json!({ "distinct_count_distribution": distribution(&counts) });
            if config.negative_controls {
                let below_two: usize = controls.range(..2).map(|(_, v)| v).sum();
                d["negative_controls"] = json!({
                    "samples": outcomes.len(),
                    "distinct_count_distribution": distribution(&controls),
                    "identically_p": identically_p,
                    "below_two": below_two,
                });
            }
            d
        }
        CampaignName::ExpIdentity => json!({
            "max_relative_error": worst_error,
            "tolerance": EXP_IDENTITY_TOLERANCE,
        }),
        _ => json!({}),
    };
    Ok(CampaignReport {
        campaign_name: name.to_string(),
        config: config.clone(),
        trials_run: outcomes.len(),
        verdict: if violations.is_empty() { "pass" } else { "fail" },
        violations,
        elapsed_ms: start.elapsed().as_millis() as u64,
        details,
    })
}
