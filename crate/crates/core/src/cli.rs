//! Subcommands of the `braidfix` binary.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::braid::parse_braid;
use crate::error::{Error, Result};
use crate::fixpoint::SolverConfig;
use crate::markov::{random_markov_walk, MarkovAudit};
use crate::pillowcase::curve_samples_csv;
use crate::report::{build_report, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_AUDIT_FAILED: i32 = 3;

const CSV_SAMPLES: usize = 720;

#[derive(Debug, Parser)]
#[command(name = "braidfix", version, about = "Traceless SU(2) fixed points of braids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the fixed classes of a knot braid and compare with the classical invariants.
    Analyze(CommonArgs),
    /// Run a random walk of Markov moves and audit every step.
    Markov {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of moves.
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
    /// Exact two-strand geometry.
    Pillowcase(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Braid word, e.g. "1 -2 1 -2".
    #[arg(allow_hyphen_values = true)]
    pub word: String,
    /// Strand count; defaults to one more than the largest generator.
    #[arg(long)]
    pub strands: Option<usize>,
    /// Number of random solver starts.
    #[arg(long, default_value_t = SolverConfig::default().seeds)]
    pub seeds: usize,
    /// Residual tolerance of the solver.
    #[arg(long, default_value_t = SolverConfig::default().residual_tol)]
    pub tol: f64,
    /// Seed of the random starts and of the Markov walk.
    #[arg(long = "rng-seed", default_value_t = 0)]
    pub rng_seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Also write a CSV table here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl CommonArgs {
    pub fn new(word: &str) -> Self {
        Self {
            word: word.to_string(),
            strands: None,
            seeds: SolverConfig::default().seeds,
            tol: SolverConfig::default().residual_tol,
            rng_seed: 0,
            json: None,
            csv: None,
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            seeds: self.seeds,
            residual_tol: self.tol,
            rng_seed: self.rng_seed,
            ..SolverConfig::default()
        }
    }
}

/// Result of one subcommand: the report (if one was produced), the exit
/// code and a one-line message for standard error.
#[derive(Debug)]
pub struct Outcome {
    pub report: Option<Report>,
    pub exit_code: i32,
    pub message: Option<String>,
    pub csv: Option<String>,
}

impl Outcome {
    fn failure(e: Error) -> Self {
        Self {
            report: None,
            exit_code: EXIT_USAGE,
            message: Some(e.to_string()),
            csv: None,
        }
    }
}

fn csv_text<R: serde::Serialize>(header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<String> {
    let io = |e: csv::Error| Error::Report(e.to_string());
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
}

fn classes_csv(report: &Report) -> Result<String> {
    csv_text(
        &["class", "index", "residual", "fingerprint"],
        report.classes.iter().enumerate().map(|(k, c)| {
            let fp: Vec<String> = c.fingerprint.0.iter().map(|x| x.to_string()).collect();
            let index = c.index.value().map_or("degenerate".to_string(), |v| format!("{v:+}"));
            (k, index, c.residual, fp.join(" "))
        }),
    )
}

fn audits_csv(audits: &[MarkovAudit]) -> Result<String> {
    let opt = |v: Option<i64>| v.map_or("undefined".to_string(), |x| x.to_string());
    csv_text(
        &[
            "step",
            "move",
            "passed",
            "lambda_before",
            "lambda_after",
            "classes_before",
            "classes_after",
            "max_transport_distance",
            "braid_after",
        ],
        audits.iter().enumerate().map(|(k, a)| {
            (
                k,
                serde_json::to_string(&a.movement).unwrap_or_default(),
                a.passed,
                opt(a.lambda_before),
                opt(a.lambda_after),
                a.classes_before,
                a.classes_after,
                a.max_transport_distance.map_or("none".to_string(), |d| d.to_string()),
                a.braid_after.clone(),
            )
        }),
    )
}

pub fn cmd_analyze(args: &CommonArgs) -> Outcome {
    let run = || -> Result<Outcome> {
        let b = parse_braid(&args.word, args.strands)?;
        let report = build_report("analyze", &b, &args.solver_config())?;
        let degenerate = report.lambda.value().is_none();
        Ok(Outcome {
            csv: Some(classes_csv(&report)?),
            exit_code: if degenerate { EXIT_DEGENERATE } else { EXIT_OK },
            message: degenerate.then(|| format!("degenerate class in {}; lambda undefined", report.braid)),
            report: Some(report),
        })
    };
    run().unwrap_or_else(Outcome::failure)
}

pub fn cmd_markov(args: &CommonArgs, steps: usize) -> Outcome {
    let run = || -> Result<Outcome> {
        let b = parse_braid(&args.word, args.strands)?;
        let cfg = args.solver_config();
        let mut report = build_report("markov", &b, &cfg)?;
        let audits = random_markov_walk(&b, steps, cfg.rng_seed, &cfg)?;
        let degenerate = audits.iter().find(|a| a.reason.as_deref() == Some("degenerate"));
        let failed = audits.iter().find(|a| !a.passed);
        let (exit_code, message) = match (degenerate, failed) {
            (Some(a), _) => (EXIT_DEGENERATE, Some(format!("degenerate braid {}", a.braid_after))),
            (None, Some(a)) => (
                EXIT_AUDIT_FAILED,
                Some(format!("audit failed at {}: {}", a.braid_after, a.reason.clone().unwrap_or_default())),
            ),
            (None, None) => (EXIT_OK, None),
        };
        let csv = audits_csv(&audits)?;
        report.markov_audits = Some(audits);
        Ok(Outcome {
            report: Some(report),
            exit_code,
            message,
            csv: Some(csv),
        })
    };
    run().unwrap_or_else(Outcome::failure)
}

pub fn cmd_pillowcase(args: &CommonArgs) -> Outcome {
    let run = || -> Result<Outcome> {
        let b = parse_braid(&args.word, args.strands)?;
        if b.strands() != 2 {
            return Err(Error::StrandMismatch {
                expected: 2,
                found: b.strands(),
            });
        }
        let report = build_report("pillowcase", &b, &args.solver_config())?;
        let degenerate = report.lambda.value().is_none();
        Ok(Outcome {
            csv: Some(curve_samples_csv(&b, CSV_SAMPLES)?),
            exit_code: if degenerate { EXIT_DEGENERATE } else { EXIT_OK },
            message: None,
            report: Some(report),
        })
    };
    run().unwrap_or_else(Outcome::failure)
}

/// Runs a parsed command line, writes the requested files and returns the
/// process exit code.
pub fn run(cli: Cli) -> i32 {
    let (outcome, args) = match &cli.command {
        Command::Analyze(a) => (cmd_analyze(a), a),
        Command::Markov { common, steps } => (cmd_markov(common, *steps), common),
        Command::Pillowcase(a) => (cmd_pillowcase(a), a),
    };
    if let Some(m) = &outcome.message {
        eprintln!("braidfix: {m}");
    }
    if let Err(e) = emit(&outcome, args) {
        eprintln!("braidfix: {e}");
        return EXIT_USAGE;
    }
    outcome.exit_code
}

fn emit(outcome: &Outcome, args: &CommonArgs) -> Result<()> {
    let Some(report) = &outcome.report else {
        return Ok(());
    };
    let json = report.to_json()?;
    match &args.json {
        Some(path) => fs::write(path, json + "\n").map_err(|e| Error::Report(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{json}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(Error::Report(e.to_string()));
                }
            }
        }
    }
    if let (Some(path), Some(csv)) = (&args.csv, &outcome.csv) {
        fs::write(path, csv).map_err(|e| Error::Report(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
