//! `monoshare`: exact p-point counts, sharing checks, degree checks,
//! normality probes and seeded verification campaigns.
//!
//! Every subcommand prints one JSON document to stdout (`--text` for a
//! human layout). Exit status: 0 success, 1 a check or campaign found a
//! violation, 2 usage or parse error.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use monoshare_core::campaign::{
    degree_observation, exp_identity_check, lemma4_observation, share_observation,
};
use monoshare_core::numeric::{heatmap, DEFAULT_RADIUS, DEFAULT_RESOLUTION, DEFAULT_THRESHOLD};
use monoshare_core::ppoint::{degree_drop_check, degree_drop_equality_check, lemma4_report};
use monoshare_core::{
    build_monomial, distinct_ppoints, marty_scan, parse, print_expr, run_campaign, shares_value,
    spherical_derivative, zalcman_rescale, CampaignConfig, CampaignName, Error, Expr,
    GaussianRational, Mode, MonomialSpec, NumericFunction, Polynomial, RationalFunction,
    RescaleSpec,
};

const SPEC_HELP: &str = "Monomial spec n:n1,..,nk:t1,..,tk for f^n (f^n1)^(t1)...(f^nk)^(tk)";

#[derive(Parser)]
#[command(name = "monoshare", version, about = "Exact and numeric checks for differential monomials")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the distinct solutions of M(f) = p.
    Ppoints {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, help = SPEC_HELP)]
        spec: MonomialSpec,
        /// Constant target p.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Check the two-p-point property: requires p != 0 and a meromorphic-admissible spec.
        #[arg(long)]
        verdict: bool,
    },
    /// Decide whether M(f) and M(g) take the target at the same points.
    Share {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(long, help = SPEC_HELP)]
        spec: MonomialSpec,
        /// Polynomial target, usually a constant.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Build M(f) exactly.
    Monomial {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, help = SPEC_HELP)]
        spec: MonomialSpec,
    },
    /// Degree at infinity of f and of its k-th derivative.
    DegInf {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Run a seeded verification campaign.
    Campaign(CampaignArgs),
    /// Marty-criterion scan of a family in the parameter m.
    Marty {
        #[arg(allow_hyphen_values = true)]
        family: String,
        /// Inclusive parameter range A:B.
        #[arg(long, value_parser = parse_range)]
        m_range: (i64, i64),
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Also draw the spherical derivative for this value of m.
        #[arg(long, allow_hyphen_values = true)]
        heatmap: Option<i64>,
    },
    /// Rescale a function: zeta -> rho^alpha F(z0 + rho zeta).
    Rescale {
        #[arg(allow_hyphen_values = true)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        z0: String,
        #[arg(long)]
        rho: f64,
        /// Exponent, decimal or fraction such as -1/4.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Value of the family parameter, required when the expression uses m.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
    },
    /// Check the closed form of M(exp(c z + d)).
    ExpIdentity {
        #[arg(long, help = SPEC_HELP)]
        spec: MonomialSpec,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
}

#[derive(Args)]
struct CampaignArgs {
    /// lemma4, degree-drop, degree-equality, exp-identity or share-reflexive.
    name: CampaignName,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, env = "MN_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// lemma4 only: also sample specs that break the degree condition.
    #[arg(long)]
    negative_controls: bool,
    #[arg(long, default_value_t = 4)]
    max_poly_degree: usize,
    #[arg(long, default_value_t = 3)]
    max_k: usize,
    #[arg(long, default_value_t = 4)]
    max_exponent: u32,
    #[arg(long, default_value_t = 5)]
    coefficient_height: i64,
}

/// What a subcommand produced: a JSON document and whether a check failed.
struct Outcome {
    doc: Value,
    violation: bool,
    /// Preformatted block appended in text mode.
    extra_text: Option<String>,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, violation: false, extra_text: None }
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected A:B")?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

fn exact(text: &str) -> Result<RationalFunction, Error> {
    parse(text, Mode::Exact)?.to_rational_function()
}

fn constant(text: &str) -> Result<GaussianRational, Error> {
    let f = exact(text)?;
    if !f.is_polynomial() || !f.num().is_constant() {
        return Err(Error::Usage(format!("{text:?} is not a constant")));
    }
    Ok(f.num().coeff(0))
}

fn polynomial(text: &str) -> Result<Polynomial, Error> {
    let f = exact(text)?;
    if !f.is_polynomial() {
        return Err(Error::Usage(format!("{text:?} is not a polynomial")));
    }
    Ok(f.num().clone())
}

/// A real number given as a decimal or as an exact constant like `-1/4`.
fn real(text: &str) -> Result<f64, Error> {
    if let Ok(x) = text.trim().parse::<f64>() {
        return Ok(x);
    }
    let c = constant(text)?;
    if !c.is_real() {
        return Err(Error::Usage(format!("{text:?} is not real")));
    }
    Ok(c.to_complex().re)
}

fn ser<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Ppoints { expr, spec, p, verdict } => {
            let f = exact(expr)?;
            let p = constant(p)?;
            if *verdict {
                let (ok, report) = lemma4_report(&f, spec, &p)?;
                return Ok(Outcome {
                    doc: json!({
                        "expression": f.to_string(),
                        "spec": spec,
                        "p": p.to_string(),
                        "verdict": ok,
                        "observed": lemma4_observation(&report),
                        "report": report,
                    }),
                    violation: !ok,
                    extra_text: None,
                });
            }
            let report = distinct_ppoints(&f, spec, &Polynomial::constant(p.clone()))?;
            Ok(Outcome::ok(json!({
                "expression": f.to_string(),
                "spec": spec,
                "p": p.to_string(),
                "distinct_count": report.distinct_count,
                "report": report,
            })))
        }
        Command::Share { f, g, spec, target } => {
            let (f, g) = (exact(f)?, exact(g)?);
            let target = polynomial(target)?;
            let verdict = shares_value(&f, &g, spec, &target)?;
            let obs = share_observation(&f, &g, spec, &target)?;
            Ok(Outcome {
                doc: json!({
                    "f": f.to_string(),
                    "g": g.to_string(),
                    "spec": spec,
                    "target": target.to_string(),
                    "shared": verdict.shared,
                    "zero_set_left": verdict.zero_set_left.to_string(),
                    "zero_set_right": verdict.zero_set_right.to_string(),
                    "observed": obs.text(),
                }),
                violation: !obs.consistent(),
                extra_text: None,
            })
        }
        Command::Monomial { expr, spec } => {
            let f = exact(expr)?;
            let m = build_monomial(&f, spec)?;
            Ok(Outcome::ok(json!({
                "expression": f.to_string(),
                "spec": spec,
                "profile": spec.profile(),
                "monomial": m.to_string(),
                "numerator_degree": m.num().degree(),
                "denominator_degree": m.den().degree(),
                "deg_infinity": m.deg_infinity().ok(),
            })))
        }
        Command::DegInf { expr, k } => {
            let f = exact(expr)?;
            let dk = f.derivative(*k);
            // Each check reports null when its hypotheses do not hold.
            let drop = degree_drop_check(&f, *k).ok();
            let equality = degree_drop_equality_check(&f, *k).ok();
            Ok(Outcome {
                doc: json!({
                    "expression": f.to_string(),
                    "k": k,
                    "deg_infinity": f.deg_infinity().ok(),
                    "derivative": dk.to_string(),
                    "derivative_deg_infinity": dk.deg_infinity().ok(),
                    "drop_holds": drop,
                    "equality_holds": equality,
                    "observed": degree_observation(&f, *k).ok(),
                }),
                violation: drop == Some(false) || equality == Some(false),
                extra_text: None,
            })
        }
        Command::Campaign(a) => {
            let config = CampaignConfig {
                seed: a.seed,
                trials: a.trials,
                max_poly_degree: a.max_poly_degree,
                max_k: a.max_k,
                max_exponent: a.max_exponent,
                coefficient_height: a.coefficient_height,
                jobs: a.jobs,
                negative_controls: a.negative_controls,
            };
            let report = run_campaign(a.name, &config)?;
            Ok(Outcome { violation: !report.passed(), doc: ser(&report), extra_text: None })
        }
        Command::Marty { family, m_range, radius, resolution, threshold, heatmap: map_m } => {
            let fam = NumericFunction::new(parse(family, Mode::Numeric)?);
            let report = marty_scan(&fam, m_range.0..=m_range.1, *radius, *resolution, *threshold)?;
            let mut doc = ser(&report);
            doc["family"] = json!(family);
            let extra_text = map_m.map(|m| heatmap(&fam.with_param(m), *radius, *resolution));
            if let (Some(m), Some(map)) = (map_m, &extra_text) {
                doc["heatmap"] = json!({ "m": m, "rows": map.lines().collect::<Vec<_>>() });
            }
            Ok(Outcome { doc, violation: false, extra_text })
        }
        Command::Rescale { family, z0, rho, alpha, m } => {
            let expr = std::sync::Arc::new(parse(family, Mode::Numeric)?);
            let expr = match (m, expr.has_param()) {
                (Some(m), _) => expr.substitute(None, Some(&Expr::int(*m))),
                (None, false) => expr,
                (None, true) => return Err(Error::Usage("the expression uses m; pass --m".into())),
            };
            let base = NumericFunction::new(expr);
            let spec = RescaleSpec { center: constant(z0)?.to_complex(), scale: *rho, exponent: real(alpha)? };
            let g = zalcman_rescale(&base, &spec)?;
            let samples: Vec<Value> = [0.0, 0.5, -0.5]
                .iter()
                .flat_map(|&x| [Complex64::new(x, 0.0), Complex64::new(0.0, x)])
                .skip(1)
                .map(|zeta| {
                    json!({
                        "zeta": complex_json(zeta),
                        "value": g.eval(zeta).ok().map(complex_json),
                        "spherical_derivative": spherical_derivative(&g, zeta),
                    })
                })
                .collect();
            Ok(Outcome::ok(json!({
                "family": family,
                "m": m,
                "z0": complex_json(spec.center),
                "rho": rho,
                "alpha": spec.exponent,
                "rescaled": print_expr(g.expr()),
                "samples": samples,
            })))
        }
        Command::ExpIdentity { spec, c, d } => {
            let (c, d) = (constant(c)?, constant(d)?);
            let check = exp_identity_check(spec, &c, &d)?;
            let mut doc = ser(&check);
            doc["spec"] = json!(spec);
            doc["c"] = json!(c.to_string());
            doc["d"] = json!(d.to_string());
            doc["expression"] = json!(print_expr(&Expr::exp(Expr::add(
                Expr::mul(Expr::constant(c.clone()), Expr::var()),
                Expr::constant(d.clone()),
            ))));
            doc["observed"] = json!(check.observation());
            Ok(Outcome { violation: !check.passed(), doc, extra_text: None })
        }
    }
}

fn print_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        print_text(val, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for item in items {
                            out.push_str(&format!("{pad}  -\n"));
                            print_text(item, indent + 2, out);
                        }
                    }
                    Value::String(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    other => out.push_str(&format!("{pad}{k}: {other}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut out = String::new();
            if cli.text {
                let mut doc = outcome.doc;
                if outcome.extra_text.is_some() {
                    if let Value::Object(map) = &mut doc {
                        map.remove("heatmap");
                    }
                }
                print_text(&doc, 0, &mut out);
                out.push_str(outcome.extra_text.as_deref().unwrap_or(""));
            } else {
                out = serde_json::to_string_pretty(&outcome.doc).expect("json");
                out.push('\n');
            }
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if outcome.violation { ExitCode::from(1) } else { ExitCode::SUCCESS }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
