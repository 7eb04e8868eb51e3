//! Double-precision probes: spherical derivatives, Marty-criterion grid
//! scans over a parameterized family, Zalcman rescaling, and numeric
//! evaluation of the differential monomial.

use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};
use crate::gaussian::GaussianRational;
use crate::spec::MonomialSpec;

pub const DEFAULT_RADIUS: f64 = 0.5;
pub const DEFAULT_RESOLUTION: usize = 101;
pub const DEFAULT_THRESHOLD: f64 = 10.0;

/// An expression with an optional binding for the family parameter `m`.
///
/// The first derivative and the reciprocal tree are built once up front.
#[derive(Clone, Debug)]
pub struct NumericFunction {
    expr: Arc<Expr>,
    param: Option<i64>,
    derivative: Arc<Expr>,
    recip: Arc<Expr>,
    recip_derivative: Arc<Expr>,
}

impl NumericFunction {
    pub fn new(expr: impl Into<Arc<Expr>>) -> Self {
        let expr = expr.into();
        let derivative = expr.derivative();
        let recip = expr.reciprocal();
        let recip_derivative = recip.derivative();
        NumericFunction { expr, param: None, derivative, recip, recip_derivative }
    }

    pub fn with_param(&self, m: i64) -> Self {
        NumericFunction { param: Some(m), ..self.clone() }
    }

    pub fn expr(&self) -> &Arc<Expr> {
        &self.expr
    }

    pub fn param(&self) -> Option<i64> {
        self.param
    }

    pub fn has_free_parameter(&self) -> bool {
        self.expr.has_param()
    }

    pub fn eval(&self, z: Complex64) -> std::result::Result<Complex64, EvalError> {
        self.expr.eval(z, self.param)
    }

    pub fn eval_derivative(&self, z: Complex64) -> std::result::Result<Complex64, EvalError> {
        self.derivative.eval(z, self.param)
    }
}

/// `|F'(z)| / (1 + |F(z)|^2)`, or `None` when `z` is a detected pole of
/// both `F` and `1/F`. At a pole of `F` alone the value is taken from
/// `1/F`, which has the same spherical derivative.
pub fn spherical_derivative(f: &NumericFunction, z: Complex64) -> Option<f64> {
    let direct = |e: &Expr, d: &Expr| -> std::result::Result<f64, EvalError> {
        let v = e.eval(z, f.param)?;
        let dv = d.eval(z, f.param)?;
        Ok(dv.norm() / (1.0 + v.norm_sqr()))
    };
    match direct(&f.expr, &f.derivative) {
        Ok(x) => Some(x),
        Err(EvalError::UnboundParameter) => None,
        Err(EvalError::Pole) => direct(&f.recip, &f.recip_derivative).ok(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterMax {
    pub m: i64,
    pub max: f64,
    /// `[re, im]` of the grid point attaining `max`.
    pub argmax: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MartyReport {
    pub grid_radius: f64,
    pub grid_resolution: usize,
    pub per_parameter: Vec<ParameterMax>,
    /// Last max over first max; 1 when both vanish, infinite (JSON `null`)
    /// when only the first does.
    pub growth_ratio: f64,
    pub threshold: f64,
    pub non_normal_flag: bool,
    pub excluded_points: usize,
}

/// Grid points of the square `[-r, r]^2` with `resolution` samples per
/// side, restricted to the closed disk `|z| <= r`.
pub fn disk_grid(radius: f64, resolution: usize) -> Vec<Complex64> {
    let step = 2.0 * radius / (resolution - 1) as f64;
    let mut pts = Vec::with_capacity(resolution * resolution);
    for iy in 0..resolution {
        for ix in 0..resolution {
            let z = Complex64::new(-radius + ix as f64 * step, -radius + iy as f64 * step);
            if z.norm() <= radius * (1.0 + 1e-12) {
                pts.push(z);
            }
        }
    }
    pts
}

pub fn marty_scan(
    family: &NumericFunction,
    m_range: RangeInclusive<i64>,
    radius: f64,
    resolution: usize,
    threshold: f64,
) -> Result<MartyReport> {
    if !family.has_free_parameter() {
        return Err(Error::Usage("family expression must contain the parameter m".into()));
    }
    if resolution < 3 {
        return Err(Error::Usage("resolution must be at least 3".into()));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Usage("radius must be positive".into()));
    }
    if m_range.is_empty() {
        return Err(Error::Usage("empty parameter range".into()));
    }
    let grid = disk_grid(radius, resolution);
    let scans: Vec<(ParameterMax, usize)> = m_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| {
            let f = family.with_param(m);
            let mut best = ParameterMax { m, max: 0.0, argmax: [0.0, 0.0] };
            let mut excluded = 0;
            for &z in &grid {
                match spherical_derivative(&f, z) {
                    Some(v) if v > best.max => best = ParameterMax { m, max: v, argmax: [z.re, z.im] },
                    Some(_) => {}
                    None => excluded += 1,
                }
            }
            (best, excluded)
        })
        .collect();
    let excluded_points = scans.iter().map(|(_, e)| e).sum();
    let per_parameter: Vec<ParameterMax> = scans.into_iter().map(|(p, _)| p).collect();
    let first = per_parameter.first().map_or(0.0, |p| p.max);
    let last = per_parameter.last().map_or(0.0, |p| p.max);
    let growth_ratio = match (first > 0.0, last > 0.0) {
        (true, _) => last / first,
        (false, false) => 1.0,
        (false, true) => f64::INFINITY,
    };
    Ok(MartyReport {
        grid_radius: radius,
        grid_resolution: resolution,
        per_parameter,
        growth_ratio,
        threshold,
        non_normal_flag: growth_ratio > threshold,
        excluded_points,
    })
}

/// Text heatmap of the spherical derivative over the disk grid, one
/// character per point by decile of the maximum. `?` marks excluded
/// points; blanks lie outside the disk.
pub fn heatmap(f: &NumericFunction, radius: f64, resolution: usize) -> String {
    const RAMP: &[u8; 10] = b" .:-=+*#%@";
    let step = 2.0 * radius / (resolution - 1) as f64;
    let mut rows = Vec::with_capacity(resolution);
    let mut max: f64 = 0.0;
    for iy in (0..resolution).rev() {
        let mut row = Vec::with_capacity(resolution);
        for ix in 0..resolution {
            let z = Complex64::new(-radius + ix as f64 * step, -radius + iy as f64 * step);
            let v = if z.norm() <= radius * (1.0 + 1e-12) {
                Some(spherical_derivative(f, z))
            } else {
                None
            };
            if let Some(Some(x)) = v {
                max = max.max(x);
            }
            row.push(v);
        }
        rows.push(row);
    }
    let mut out = String::new();
    for row in rows {
        for v in row {
            out.push(match v {
                None => ' ',
                Some(None) => '?',
                Some(Some(x)) if max > 0.0 => RAMP[((x / max * 10.0) as usize).min(9)] as char,
                Some(Some(_)) => RAMP[0] as char,
            });
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RescaleSpec {
    pub center: Complex64,
    pub scale: f64,
    pub exponent: f64,
}

/// `zeta -> rho^alpha * F(z0 + rho * zeta)` as a new tree. Constants enter
/// the tree as the exact dyadic rationals of their double values.
pub fn zalcman_rescale(f: &NumericFunction, spec: &RescaleSpec) -> Result<NumericFunction> {
    if !(spec.scale > 0.0 && spec.scale.is_finite()) {
        return Err(Error::Usage("rescale factor rho must be positive".into()));
    }
    let exact = |z: Complex64, what: &str| {
        GaussianRational::from_complex(z).ok_or_else(|| Error::Usage(format!("{what} must be finite")))
    };
    let prefactor = exact(Complex64::new(spec.scale.powf(spec.exponent), 0.0), "rho^alpha")?;
    let z0 = exact(spec.center, "center")?;
    let rho = exact(Complex64::new(spec.scale, 0.0), "rho")?;
    let arg = Expr::add(Expr::constant(z0), Expr::mul(Expr::constant(rho), Expr::var()));
    let body = f.expr.substitute(Some(&arg), None);
    let mut out = NumericFunction::new(Expr::mul(Expr::constant(prefactor), body));
    out.param = f.param;
    Ok(out)
}

/// Tree for `F^n * prod (F^{n_i})^{(t_i)}`.
pub fn monomial_expr(f: &Arc<Expr>, spec: &MonomialSpec) -> Arc<Expr> {
    spec.exponents().iter().zip(spec.orders()).fold(
        Expr::pow(f.clone(), spec.n() as i64),
        |acc, (&ni, &ti)| Expr::mul(acc, Expr::pow(f.clone(), ni as i64).nth_derivative(ti as usize)),
    )
}

pub fn numeric_monomial_eval(
    f: &NumericFunction,
    spec: &MonomialSpec,
    z: Complex64,
) -> std::result::Result<Complex64, EvalError> {
    monomial_expr(&f.expr, spec).eval(z, f.param)
}
