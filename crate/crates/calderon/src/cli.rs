//! Command-line interface.
//!
//! Reports are deterministic byte for byte: a fixed command line (and input
//! file) always produces identical output. Floats are rounded to 9
//! significant digits before printing; non-finite values become JSON null
//! (empty fields in CSV). Exit codes: 0 success, 1 a verified inequality
//! failed, 2 usage or input errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::read_step_function;
use crate::norms::BilateralChecker;
use crate::random::{random_step_function, seeded_rng};
use crate::sharpness::{k_kappa, theta_upper_bound, KappaReport, SharpnessOptions};
use crate::weights::{gamma, GammaOptions, Weight, WeightFamily};

/// Pieces per random function in `verify`.
const VERIFY_MAX_PIECES: usize = 50;

#[derive(Parser, Debug)]
#[command(
    name = "calderon",
    version,
    about = "Decreasing rearrangements, weighted weak/Marcinkiewicz norms, and the constants relating them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Estimate gamma(w) = sup_t (w(t)/t) * integral_0^t du/w(u)
    Gamma {
        #[command(flatten)]
        weight: WeightArg,
        /// Relative stop tolerance of the inner quadrature
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Weak and Marcinkiewicz norms of a step function, with the bilateral verdict
    Norms {
        #[command(flatten)]
        weight: WeightArg,
        /// CSV (`value,mass` rows, optional header) or JSON array of {value, mass}
        #[arg(long)]
        input: PathBuf,
        /// Rescale masses to total 1 before computing
        #[arg(long)]
        normalize: bool,
        /// Relative stop tolerance of the gamma quadrature
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArg,
    },
    /// G, H and the ratio K of the extremal profile 1 - t^kappa
    Sharpness {
        #[command(flatten)]
        weight: WeightArg,
        /// Decay exponent of the extremal profile (must be positive)
        #[arg(long)]
        kappa: f64,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Sweep kappa geometrically and report the minimal ratio as an upper bound
    Theta {
        #[command(flatten)]
        weight: WeightArg,
        /// Smallest kappa in the sweep
        #[arg(long, default_value_t = 0.01)]
        kappa_min: f64,
        /// Largest kappa in the sweep
        #[arg(long, default_value_t = 1000.0)]
        kappa_max: f64,
        /// Number of geometric grid points
        #[arg(long, default_value_t = 200)]
        kappa_steps: usize,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Seeded random stress test of the bilateral inequality; exits 1 on any violation
    Verify {
        #[command(flatten)]
        weight: WeightArg,
        /// Number of random step functions to test
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// RNG seed; identical seeds reproduce identical output
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArg,
    },
}

#[derive(Args, Debug, Clone)]
pub struct WeightArg {
    /// Weight spec `family:key=value,...`: power (p), powerlog (p,q), powerloglog (p,q,r)
    #[arg(long, value_parser = weight_value_parser)]
    pub weight: Weight,
}

fn weight_value_parser(spec: &str) -> std::result::Result<Weight, String> {
    parse_weight_spec(spec).map_err(|e| e.to_string())
}

/// Parse the weight grammar, e.g. `power:p=2` or `powerloglog:p=2,q=1,r=1`.
pub fn parse_weight_spec(spec: &str) -> Result<Weight> {
    let (family, rest) = spec.split_once(':').ok_or_else(|| {
        Error::Parse(format!(
            "weight spec must look like family:key=value,... got {spec:?}"
        ))
    })?;
    let mut kv = std::collections::BTreeMap::new();
    for part in rest.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| {
            Error::Parse(format!("weight parameter {part:?} is not key=value"))
        })?;
        let num: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("weight parameter {k}: {v:?} is not a number")))?;
        if kv.insert(k.trim().to_string(), num).is_some() {
            return Err(Error::Parse(format!("duplicate weight parameter {k:?}")));
        }
    }
    let mut take = |k: &str| {
        kv.remove(k)
            .ok_or_else(|| Error::Parse(format!("{family} weights need {k}=<number>")))
    };
    let weight = match family.trim() {
        "power" => Weight::power(take("p")?),
        "powerlog" => Weight::power_log(take("p")?, take("q")?),
        "powerloglog" => Weight::power_log_log(take("p")?, take("q")?, take("r")?),
        other => {
            return Err(Error::Parse(format!(
                "unknown weight family {other:?}; expected power, powerlog or powerloglog"
            )))
        }
    }?;
    if !kv.is_empty() {
        let extra: Vec<_> = kv.keys().cloned().collect();
        return Err(Error::Parse(format!(
            "unknown weight parameters: {}",
            extra.join(", ")
        )));
    }
    Ok(weight)
}

#[derive(Args, Debug, Clone, Copy)]
pub struct OutputArg {
    /// Report format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Serialize)]
struct WeightDesc {
    family: WeightFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    monotone: bool,
}

impl WeightDesc {
    fn of(w: &Weight) -> Self {
        let (p, q, r) = w.params();
        WeightDesc {
            family: w.family(),
            p,
            q,
            r,
            monotone: w.is_monotone(),
        }
    }
}

/// Run a parsed command, writing the report to `out`. Returns the exit
/// code: 0, or 1 when a verified inequality failed. Hard errors come back
/// as `Err` and belong on stderr with exit code 2.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<i32> {
    match cli.command {
        Command::Gamma { weight, tol, output } => {
            let opts = GammaOptions {
                quad_tol: tol,
                ..GammaOptions::default()
            };
            let est = gamma(&weight.weight, opts)?;
            match output.output {
                OutputFormat::Json => emit_json(
                    out,
                    json!({ "weight": WeightDesc::of(&weight.weight), "gamma": est }),
                )?,
                OutputFormat::Csv => {
                    writeln!(out, "value,argmax_t,grid_size,diverged")?;
                    writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_csv(est.value),
                        fmt_csv(est.argmax_t),
                        est.grid_size,
                        est.diverged
                    )?;
                }
            }
            Ok(0)
        }
        Command::Norms {
            weight,
            input,
            normalize,
            tol,
            output,
        } => {
            let mut f = read_step_function(&input)?;
            if normalize {
                f = f.normalized();
            }
            let opts = GammaOptions {
                quad_tol: tol,
                ..GammaOptions::default()
            };
            let checker = BilateralChecker::with_options(weight.weight.clone(), opts)?;
            let report = checker.check(&f);
            match output.output {
                OutputFormat::Json => emit_json(
                    out,
                    json!({
                        "weight": WeightDesc::of(&weight.weight),
                        "input": input.display().to_string(),
                        "normalized": normalize,
                        "pieces": f.len(),
                        "report": report,
                    }),
                )?,
                OutputFormat::Csv => {
                    writeln!(
                        out,
                        "weak_norm,marcinkiewicz_norm,gamma_value,ratio,lower_ok,upper_ok,argmax_t_weak,argmax_t_marc"
                    )?;
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        fmt_csv(report.weak_norm),
                        fmt_csv(report.marcinkiewicz_norm),
                        fmt_csv(report.gamma_value),
                        fmt_csv(report.ratio),
                        report.lower_ok,
                        report.upper_ok,
                        fmt_csv(report.argmax_t_weak),
                        fmt_csv(report.argmax_t_marc)
                    )?;
                }
            }
            Ok(if report.lower_ok && report.upper_ok { 0 } else { 1 })
        }
        Command::Sharpness { weight, kappa, output } => {
            let report = k_kappa(&weight.weight, kappa, SharpnessOptions::default())?;
            match output.output {
                OutputFormat::Json => emit_json(
                    out,
                    json!({ "weight": WeightDesc::of(&weight.weight), "report": report }),
                )?,
                OutputFormat::Csv => {
                    writeln!(out, "{}", KAPPA_CSV_HEADER)?;
                    writeln!(out, "{}", kappa_csv_row(&report))?;
                }
            }
            Ok(0)
        }
        Command::Theta {
            weight,
            kappa_min,
            kappa_max,
            kappa_steps,
            output,
        } => {
            let sweep = theta_upper_bound(
                &weight.weight,
                kappa_min,
                kappa_max,
                kappa_steps,
                SharpnessOptions::default(),
            )?;
            match output.output {
                OutputFormat::Json => emit_json(
                    out,
                    json!({
                        "weight": WeightDesc::of(&weight.weight),
                        "kappa_min": kappa_min,
                        "kappa_max": kappa_max,
                        "kappa_steps": kappa_steps,
                        "theta_upper": sweep.theta_upper,
                        "argmin_kappa": sweep.argmin_kappa,
                        "boundary": sweep.boundary,
                        "rows": sweep.rows,
                    }),
                )?,
                OutputFormat::Csv => {
                    writeln!(out, "{}", KAPPA_CSV_HEADER)?;
                    for row in &sweep.rows {
                        writeln!(out, "{}", kappa_csv_row(row))?;
                    }
                }
            }
            Ok(0)
        }
        Command::Verify {
            weight,
            trials,
            seed,
            output,
        } => {
            if trials == 0 {
                return Err(Error::InvalidArgument("verify needs at least one trial".into()));
            }
            let checker = BilateralChecker::new(weight.weight.clone())?;
            let mut rng = seeded_rng(seed);
            let mut violations = 0u64;
            let mut min_ratio = f64::INFINITY;
            let mut max_ratio = f64::NEG_INFINITY;
            if output.output == OutputFormat::Csv {
                writeln!(
                    out,
                    "trial,weak_norm,marcinkiewicz_norm,gamma_value,ratio,lower_ok,upper_ok"
                )?;
            }
            for trial in 0..trials {
                let f = random_step_function(&mut rng, VERIFY_MAX_PIECES);
                let report = checker.check(&f);
                if !(report.lower_ok && report.upper_ok) {
                    violations += 1;
                }
                min_ratio = min_ratio.min(report.ratio);
                max_ratio = max_ratio.max(report.ratio);
                match output.output {
                    OutputFormat::Json => {
                        let mut line = serde_json::to_value(report)
                            .expect("reports are plain structs");
                        line["trial"] = json!(trial);
                        writeln!(out, "{}", compact_json(line))?;
                    }
                    OutputFormat::Csv => {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            trial,
                            fmt_csv(report.weak_norm),
                            fmt_csv(report.marcinkiewicz_norm),
                            fmt_csv(report.gamma_value),
                            fmt_csv(report.ratio),
                            report.lower_ok,
                            report.upper_ok
                        )?;
                    }
                }
            }
            if output.output == OutputFormat::Json {
                let summary = json!({ "summary": {
                    "weight": WeightDesc::of(&weight.weight),
                    "trials": trials,
                    "violations": violations,
                    "gamma_value": checker.gamma().value,
                    "min_ratio": min_ratio,
                    "max_ratio": max_ratio,
                }});
                writeln!(out, "{}", compact_json(summary))?;
            }
            if violations == 0 {
                writeln!(out, "PASS: {trials} trials, 0 violations")?;
                Ok(0)
            } else {
                writeln!(out, "FAIL: {violations} of {trials} trials violated the bilateral inequality")?;
                Ok(1)
            }
        }
    }
}

const KAPPA_CSV_HEADER: &str = "kappa,G,H,K,closed_form_K,argmax_t_G,argmax_t_H";

fn kappa_csv_row(row: &KappaReport) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        fmt_csv(row.kappa),
        fmt_csv(row.g),
        fmt_csv(row.h),
        fmt_csv(row.k),
        row.closed_form_k.map(fmt_csv).unwrap_or_default(),
        fmt_csv(row.argmax_t_g),
        fmt_csv(row.argmax_t_h)
    )
}

/// Round to 9 significant digits; the shortest round-trip decimal of the
/// rounded value is what gets printed, which keeps reports byte-stable.
fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    // Scale by a non-negative power of ten in whichever direction applies:
    // those are exactly representable (up to 1e22), unlike their inverses.
    let k = 8 - x.abs().log10().floor() as i32;
    if k >= 0 {
        let scale = 10f64.powi(k);
        if !scale.is_finite() {
            return x;
        }
        (x * scale).round() / scale
    } else {
        let scale = 10f64.powi(-k);
        (x / scale).round() * scale
    }
}

fn fmt_csv(x: f64) -> String {
    if x.is_finite() {
        format!("{}", round_sig(x))
    } else {
        String::new()
    }
}

fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("checked is_f64");
                Value::from(round_sig(x))
            } else {
                Value::Number(n)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_numbers).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_numbers(v))).collect())
        }
        other => other,
    }
}

fn compact_json(v: Value) -> String {
    serde_json::to_string(&round_numbers(v)).expect("value trees always serialize")
}

fn emit_json<W: Write>(out: &mut W, v: Value) -> Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&round_numbers(v)).expect("value trees always serialize")
    )?;
    Ok(())
}
