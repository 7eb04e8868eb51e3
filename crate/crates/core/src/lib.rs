//! Exact algebra for the differential monomial
//! `M(f) = f^n (f^{n_1})^{(t_1)} ... (f^{n_k})^{(t_k)}` of a rational
//! function `f`, distinct p-point counting, IM value sharing, and numeric
//! probes (spherical derivatives, Marty scans, Zalcman rescaling).

pub mod campaign;
pub mod error;
pub mod expr;
pub mod gaussian;
mod modular;
pub mod numeric;
pub mod poly;
pub mod ppoint;
pub mod ratfunc;
pub mod report;
pub mod spec;

pub use campaign::{run_campaign, CampaignConfig, CampaignName, CampaignReport};
pub use error::{Error, Result};
pub use expr::{parse, print_expr, Expr, Mode, ParseError};
pub use gaussian::{GaussianRational, Rational};
pub use numeric::{
    marty_scan, numeric_monomial_eval, spherical_derivative, zalcman_rescale, MartyReport,
    NumericFunction, RescaleSpec,
};
pub use poly::Polynomial;
pub use ppoint::{
    degree_drop_check, degree_drop_equality_check, distinct_ppoints, factor_profile,
    lemma4_verdict, shares_value, FactorProfile, ShareVerdict, ZeroReport,
};
pub use ratfunc::{build_monomial, RationalFunction};
pub use spec::{ExpImage, MonomialSpec, SpecProfile};
