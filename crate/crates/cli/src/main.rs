use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opcalc::expr::{self, EvalError, Expr};
use opcalc::freemodule::{Operator, Vector};
use opcalc::normalform::{
    family_check, first_difference, normalize, star, umbral, FamilyPattern, FamilyVerdict,
    GradedFamily, NormalSeries,
};
use opcalc::ring::{PowerSeries1, Ring, RingError};
use opcalc::sheffer::{sheffer_sequence, ShefferError, ShefferPair};

/// Exact operator calculus on the free module with basis e_0, e_1, ...
#[derive(Parser)]
#[command(name = "opcalc", version)]
struct Cli {
    /// Coefficient ring: Q, Z or Zmod:m
    #[arg(long, global = true, default_value = "Q")]
    ring: Ring,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form coefficients P_0..P_N of an operator expression
    Nf {
        expr: String,
        #[arg(long)]
        order: usize,
    },
    /// Apply an operator expression to a vector such as "2*e0 + e3"
    Apply {
        expr: String,
        /// Vector text, vector JSON, or a path to a vector JSON file
        vector: String,
    },
    /// Compare two expressions on normal-form coefficients 0..N
    Eq {
        left: String,
        right: String,
        #[arg(long)]
        order: usize,
    },
    /// Check that a word family such as "x^{n} y^{n}" is graded
    Summable {
        pattern: String,
        #[arg(long)]
        upto: usize,
    },
    /// Sheffer sequence p_0..p_N of a pair (mu, sigma) given as polynomials in y
    Sheffer {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        order: usize,
    },
    /// Composition product of two series JSON files
    Star {
        s: String,
        t: String,
        #[arg(long)]
        order: usize,
    },
    /// Umbral product of two series JSON files
    Umbral {
        s: String,
        t: String,
        #[arg(long)]
        order: usize,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Failure {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        let code = match e {
            EvalError::Capability { .. } => 3,
            EvalError::NotSummable { .. } => 1,
            EvalError::Ring(ref r) => ring_code(r),
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<RingError> for Failure {
    fn from(e: RingError) -> Failure {
        Failure {
            code: ring_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<ShefferError> for Failure {
    fn from(e: ShefferError) -> Failure {
        match e {
            ShefferError::Ring(r) => r.into(),
            ShefferError::Rejected(_) => Failure::usage(format!("invalid pair: {e}")),
        }
    }
}

fn ring_code(e: &RingError) -> u8 {
    match e {
        RingError::NeedsRationals { .. } | RingError::NotIntegral { .. } => 3,
        _ => 2,
    }
}

/// Standard output plus exit code.
struct Output {
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr, Failure> {
    expr::parse(text).map_err(|e| Failure::usage(format!("in `{text}` at {e}")))
}

fn operator(text: &str, ring: Ring, horizon: usize) -> Result<Operator, Failure> {
    Ok(expr::eval_within(&parse_expr(text)?, ring, horizon)?)
}

fn read_json(arg: &str) -> Result<serde_json::Value, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| Failure::usage(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{arg}: {e}")))
}

fn ok(text: String) -> Result<Output, Failure> {
    Ok(Output { text, code: 0 })
}

fn coefficient_list(series: &NormalSeries, order: usize, name: char) -> String {
    series
        .coeffs_to(order)
        .iter()
        .enumerate()
        .map(|(n, p)| format!("{name}{n} = {p}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn series_output(series: &NormalSeries, order: usize, json: bool) -> Result<Output, Failure> {
    if json {
        ok(series.to_json(order).to_string())
    } else {
        ok(coefficient_list(series, order, 'P'))
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let ring = cli.ring;
    match &cli.command {
        Command::Nf { expr, order } => {
            let s = normalize(&operator(expr, ring, *order)?);
            series_output(&s, *order, cli.json)
        }
        Command::Apply { expr, vector } => {
            let v = if vector.trim_start().starts_with('{') || Path::new(vector).is_file() {
                Vector::from_json(ring, &read_json(vector)?)?
            } else {
                Vector::parse(ring, vector)?
            };
            let out = operator(expr, ring, v.degree().unwrap_or(0))?.apply(&v);
            ok(if cli.json {
                out.to_json().to_string()
            } else {
                out.to_string()
            })
        }
        Command::Eq { left, right, order } => {
            let s = normalize(&operator(left, ring, *order)?);
            let t = normalize(&operator(right, ring, *order)?);
            let diff = first_difference(&s, &t, *order);
            let text = match (diff, cli.json) {
                (None, true) => serde_json::json!({ "equal": true, "order": order }).to_string(),
                (None, false) => format!("equal up to order {order}"),
                (Some(n), true) => serde_json::json!({
                    "equal": false,
                    "index": n,
                    "left": s.coeff(n).to_json(),
                    "right": t.coeff(n).to_json(),
                })
                .to_string(),
                (Some(n), false) => format!("differ at P{n}: {} vs {}", s.coeff(n), t.coeff(n)),
            };
            Ok(Output {
                text,
                code: u8::from(diff.is_some()),
            })
        }
        Command::Summable { pattern, upto } => {
            let p = FamilyPattern::parse(pattern)?;
            let verdict = family_check(&GradedFamily::from_pattern(ring, &p), *upto);
            let text = match (verdict, cli.json) {
                (FamilyVerdict::Accepted { up_to }, true) => {
                    serde_json::json!({ "accepted": true, "upto": up_to }).to_string()
                }
                (FamilyVerdict::Accepted { up_to }, false) => format!("accepted up to n = {up_to}"),
                (FamilyVerdict::Rejected { index, ydeg }, true) => {
                    serde_json::json!({ "accepted": false, "index": index, "ydeg": ydeg })
                        .to_string()
                }
                (FamilyVerdict::Rejected { index, ydeg }, false) => format!(
                    "rejected at n = {index}: {} has normal form with y-degree {ydeg}",
                    p.word(index)
                ),
            };
            let code = u8::from(matches!(verdict, FamilyVerdict::Rejected { .. }));
            Ok(Output { text, code })
        }
        Command::Sheffer { mu, sigma, order } => {
            ring.require_rationals("sheffer")?;
            let pair = ShefferPair::new(
                PowerSeries1::parse(ring, mu, *order)?,
                PowerSeries1::parse(ring, sigma, *order)?,
            )?;
            let seq = sheffer_sequence(&pair, *order)?;
            if cli.json {
                ok(seq.to_json().to_string())
            } else {
                let parts: Vec<_> = seq
                    .polys()
                    .iter()
                    .enumerate()
                    .map(|(n, p)| format!("p{n} = {p}"))
                    .collect();
                ok(parts.join(", "))
            }
        }
        Command::Star { s, t, order } | Command::Umbral { s, t, order } => {
            let s = NormalSeries::from_json(ring, &read_json(s)?)?;
            let t = NormalSeries::from_json(ring, &read_json(t)?)?;
            let product = match cli.command {
                Command::Star { .. } => star(&s, &t)?,
                _ => umbral(&s, &t)?,
            };
            ok(product.to_json(*order).to_string())
        }
    }
}
