//! `tlbq` — enumerate marked diagrams, print multiplication tables and Gram
//! matrices, and emit JSON certificates for the duality and semisimplicity
//! checks.
//!
//! Exit status: 0 when every emitted certificate passes, 1 when some
//! certificate fails, 2 on invalid input.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tlbq::cellular::{gram, gram_at};
use tlbq::certificate::{timed, Certificate};
use tlbq::diagrams::{enumerate, LoopRules};
use tlbq::duality::{
    algebra_image_dimension, semisimplicity_experiment, verify_affine_relations, verify_category_relations,
    FunctorContext,
};
use tlbq::linalg::Mat;
use tlbq::qfield::RatFunc;
use tlbq::repro::{repro_all, strip_timing, summary};
use tlbq::tlb::structure_constants;

/// Environment variable fixing the worker thread count (`RAYON_NUM_THREADS`
/// is honoured too).
const THREADS_ENV: &str = "TLBQ_THREADS";

#[derive(Parser, Debug)]
#[command(name = "tlbq", version, about = "Type-B Temperley-Lieb categories and U_q(sl2) duality, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock times in certificates (otherwise zero, so reruns are byte-identical).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every marked diagram r → s, one per line.
    Enumerate { r: usize, s: usize },
    /// Structure constants of TLB_n as CSV.
    MultTable {
        n: usize,
        /// Specialise Q to this expression, e.g. `i*s^-4`.
        #[arg(long = "Q", allow_hyphen_values = true)]
        big_q: Option<String>,
    },
    /// Gram matrix and determinant of the cell module W_t(n).
    Gram {
        n: usize,
        #[arg(allow_hyphen_values = true)]
        t: i32,
        #[arg(long = "Q", allow_hyphen_values = true)]
        big_q: Option<String>,
    },
    /// Semisimplicity verdicts against the rule r ≤ ℓ + 1.
    Scan {
        /// A value, a list `0,2` or an inclusive range `-1..3`.
        #[arg(long, allow_hyphen_values = true, default_value = "-1..3")]
        ell: String,
        #[arg(long, default_value_t = 4)]
        rmax: usize,
    },
    /// Dimension of the algebra generated by the generator images.
    VerifyDuality(FunctorArgs),
    /// Category and affine relations for the functor images.
    CheckRelations(FunctorArgs),
    /// Every reproduction target at desk scale, as one JSON report.
    ReproAll,
}

#[derive(Args, Debug)]
struct FunctorArgs {
    #[arg(long, allow_hyphen_values = true)]
    ell: String,
    #[arg(long)]
    r: usize,
    /// Verma truncation depth, at least r + 1 (default r + 2).
    #[arg(long)]
    depth: Option<usize>,
}

enum Outcome {
    /// Plain output with no pass/fail meaning.
    Plain(String),
    Certificates(Vec<Certificate>),
    Report(serde_json::Value, bool),
}

fn parse_ells(text: &str) -> Result<Vec<i32>, String> {
    let bad = |_| format!("cannot parse ell list '{text}'");
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (i32, i32) = (a.parse().map_err(bad)?, b.trim_start_matches('=').parse().map_err(bad)?);
            if a > b {
                return Err(format!("empty range '{part}'"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(bad)?);
        }
    }
    if let Some(&l) = out.iter().find(|&&l| l < -1) {
        return Err(format!("ell must be at least -1, got {l}"));
    }
    Ok(out)
}

fn parse_q(text: &Option<String>) -> Result<Option<RatFunc>, String> {
    text.as_ref().map(|t| t.parse::<RatFunc>().map_err(|e| format!("cannot parse Q '{t}': {e}"))).transpose()
}

fn matrix_rows(m: &Mat<RatFunc>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

fn run(cmd: &Command, format: Option<Format>, timing: bool) -> Result<Outcome, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let cert = |f: &dyn Fn() -> Result<Certificate, tlbq::duality::DualityError>| -> Result<Certificate, String> {
        if timing {
            timed(f).map_err(|e| e.to_string())
        } else {
            f().map_err(|e| e.to_string())
        }
    };
    Ok(match cmd {
        Command::Enumerate { r, s } => {
            let list = enumerate(*r, *s).map_err(|e| err(&e))?;
            let lines: Vec<String> = list.iter().map(|d| d.to_string()).collect();
            match format {
                Some(Format::Json) => Outcome::Plain(
                    serde_json::to_string_pretty(&json!({"r": r, "s": s, "count": lines.len(), "diagrams": lines}))
                        .expect("serialisable")
                        + "\n",
                ),
                _ => Outcome::Plain(lines.iter().map(|l| format!("{l}\n")).collect()),
            }
        }
        Command::MultTable { n, big_q } => {
            let rules = match parse_q(big_q)? {
                Some(q) => LoopRules::with_q(&q).map_err(|e| err(&e))?,
                None => LoopRules::generic(),
            };
            Outcome::Plain(structure_constants(*n, &rules).to_csv())
        }
        Command::Gram { n, t, big_q } => {
            let q = parse_q(big_q)?;
            let g = match &q {
                Some(q) => gram_at(*n, *t, q),
                None => gram(*n, *t),
            }
            .map_err(|e| err(&e))?;
            let det = g.det_bareiss().to_string();
            let rows = matrix_rows(&g);
            match format {
                Some(Format::Json) => {
                    let q_text = q.map_or("Q".to_string(), |q| q.to_string());
                    let v = json!({"n": n, "t": t, "Q": q_text, "matrix": rows, "det": det});
                    Outcome::Plain(serde_json::to_string_pretty(&v).expect("serialisable") + "\n")
                }
                _ => {
                    let mut text: String = rows.iter().map(|r| format!("[{}]\n", r.join(", "))).collect();
                    text.push_str(&format!("det = {det}\n"));
                    Outcome::Plain(text)
                }
            }
        }
        Command::Scan { ell, rmax } => {
            let ells = parse_ells(ell)?;
            Outcome::Certificates(vec![cert(&|| semisimplicity_experiment(&ells, *rmax))?])
        }
        Command::VerifyDuality(a) | Command::CheckRelations(a) => {
            let ells = parse_ells(&a.ell)?;
            let mut out = Vec::new();
            for l in ells {
                let ctx = FunctorContext::new(l, a.r, a.depth.unwrap_or(a.r + 2)).map_err(|e| err(&e))?;
                if matches!(cmd, Command::VerifyDuality(_)) {
                    out.push(cert(&|| algebra_image_dimension(&ctx))?);
                } else {
                    out.push(cert(&|| verify_category_relations(&ctx))?);
                    if a.r >= 2 {
                        out.push(cert(&|| verify_affine_relations(&ctx))?);
                    }
                }
            }
            Outcome::Certificates(out)
        }
        Command::ReproAll => {
            let mut certs = repro_all().map_err(|e| err(&e))?;
            if !timing {
                strip_timing(&mut certs);
            }
            let passed = certs.iter().all(|c| c.passed());
            let table: serde_json::Map<String, serde_json::Value> =
                summary(&certs).into_iter().map(|(k, (p, t))| (k, json!({"passed": p, "total": t}))).collect();
            let report = json!({
                "status": if passed { "pass" } else { "fail" },
                "summary": table,
                "certificates": certs,
            });
            Outcome::Report(report, passed)
        }
    })
}

fn render_certificates(certs: &[Certificate], format: Option<Format>) -> String {
    match format {
        Some(Format::Text) => certs
            .iter()
            .map(|c| {
                let p = &c.params;
                let ell = p.ell.map_or("-".to_string(), |l| l.to_string());
                let d = p.depth.map_or("-".to_string(), |d| d.to_string());
                let status = if c.passed() { "pass" } else { "FAIL" };
                format!("{status}  {:<20} ell={ell} r={} D={d} Q={}\n", c.check, p.r, p.q)
            })
            .collect(),
        _ => {
            let text = if certs.len() == 1 {
                serde_json::to_string_pretty(&certs[0])
            } else {
                serde_json::to_string_pretty(certs)
            };
            text.expect("serialisable") + "\n"
        }
    }
}

fn configure_threads() -> Result<(), String> {
    if let Ok(text) = std::env::var(THREADS_ENV) {
        let n: usize = text.parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got '{text}'"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let outcome = match run(&cli.command, cli.output.format, cli.output.timing) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (text, passed) = match outcome {
        Outcome::Plain(t) => (t, true),
        Outcome::Certificates(c) => (render_certificates(&c, cli.output.format), c.iter().all(|c| c.passed())),
        Outcome::Report(v, p) => (serde_json::to_string_pretty(&v).expect("serialisable") + "\n", p),
    };
    let written = match &cli.output.out {
        Some(path) => fs::write(path, text.as_bytes()),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::parse_ells;

    #[test]
    fn ell_lists() {
        assert_eq!(parse_ells("-1..3").unwrap(), vec![-1, 0, 1, 2, 3]);
        assert_eq!(parse_ells("0,2").unwrap(), vec![0, 2]);
        assert_eq!(parse_ells("1..=2").unwrap(), vec![1, 2]);
        assert!(parse_ells("3..1").is_err());
        assert!(parse_ells("-2").is_err());
        assert!(parse_ells("x").is_err());
    }
}
