//! `redei` — 4-rank experiments for hyperelliptic curves over odd prime
//! fields.  Reports are JSON on stdout (or `--output`); runtimes go to
//! stderr only, so identical (config, seed) gives identical report bytes.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use redei_cli::experiments::{
    self, DegreeStatsConfig, ExperimentError, LocalConfig, MonicConfig,
};

#[derive(Parser)]
#[command(
    name = "redei",
    about = "4-rank of Pic⁰ of hyperelliptic curves y² = f(x) over F_q via Rédei matrices",
    version
)]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// 2-/4-rank of a single curve y² = f(x).
    FourRank {
        #[arg(long)]
        q: u64,
        /// Ascending comma-separated coefficients of monic squarefree f.
        #[arg(long)]
        f: String,
        /// Compute the non-square quadratic twist y² = c·f instead.
        #[arg(long, default_value_t = false)]
        twist: bool,
    },
    /// Empirical 4-rank distribution: uniform monic squarefree f of degree
    /// d, or (with any of --ramified/--split/--inert) uniform branch sets
    /// of total degree d subject to local conditions.
    Dist {
        #[arg(long)]
        q: u64,
        /// Polynomial degree (monic mode) or total branch degree 2g + 2
        /// (branch-set mode; must be even there).
        #[arg(long)]
        d: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Point forced into the branch locus ("inf" or coefficients,
        /// e.g. "0,1" for x); repeatable.
        #[arg(long)]
        ramified: Vec<String>,
        /// Point required to split; repeatable.
        #[arg(long)]
        split: Vec<String>,
        /// Point required to be inert; repeatable.
        #[arg(long)]
        inert: Vec<String>,
    },
    /// Exhaustive Rédei-vs-Jacobian check over all monic squarefree f of
    /// odd degree up to dmax.
    OracleSweep {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        dmax: usize,
    },
    /// Re-run the matrix-statistics invariant suite as a report.
    MatstatValidate,
    /// Degree statistics of uniform weight-d branch selections.
    DegreeStats {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
}

fn emit<T: Serialize>(report: &T, output: Option<&PathBuf>) -> Result<(), String> {
    let json = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    match output {
        Some(path) => fs::write(path, json + "\n").map_err(|e| e.to_string()),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn parse_points(q: u64, specs: &[String]) -> Result<Vec<redei_core::redei::BranchPoint>, ExperimentError> {
    specs.iter().map(|s| experiments::parse_point(q, s)).collect()
}

fn run(cli: &Cli) -> Result<bool, String> {
    let assertions_pass = match &cli.cmd {
        Cmd::FourRank { q, f, twist } => {
            let report = experiments::run_four_rank(*q, f, *twist).map_err(|e| e.to_string())?;
            emit(&report, cli.output.as_ref())?;
            true
        }
        Cmd::Dist { q, d, trials, seed, ramified, split, inert } => {
            if ramified.is_empty() && split.is_empty() && inert.is_empty() {
                let cfg = MonicConfig { q: *q, d: *d, trials: *trials, seed: *seed };
                let report =
                    experiments::run_monic_experiment(&cfg).map_err(|e| e.to_string())?;
                emit(&report, cli.output.as_ref())?;
            } else {
                if *d % 2 != 0 || *d < 2 {
                    return Err(format!(
                        "branch-set mode needs even total degree 2g + 2, got {d}"
                    ));
                }
                let cfg = LocalConfig {
                    q: *q,
                    genus: (*d - 2) / 2,
                    ramified: parse_points(*q, ramified).map_err(|e| e.to_string())?,
                    split: parse_points(*q, split).map_err(|e| e.to_string())?,
                    inert: parse_points(*q, inert).map_err(|e| e.to_string())?,
                    trials: *trials,
                    seed: *seed,
                };
                let report =
                    experiments::run_local_experiment(&cfg).map_err(|e| e.to_string())?;
                emit(&report, cli.output.as_ref())?;
            }
            true
        }
        Cmd::OracleSweep { q, dmax } => {
            let report = experiments::run_oracle_sweep(*q, *dmax).map_err(|e| e.to_string())?;
            emit(&report, cli.output.as_ref())?;
            true
        }
        Cmd::MatstatValidate => {
            let report = experiments::run_matstat_validation().map_err(|e| e.to_string())?;
            let pass = report.all_pass;
            emit(&report, cli.output.as_ref())?;
            pass
        }
        Cmd::DegreeStats { q, d, trials, seed } => {
            let cfg = DegreeStatsConfig {
                q: *q,
                d: *d,
                trials: *trials,
                seed: *seed,
                gamma: 0.5,
                eps: 0.25,
            };
            let report = experiments::run_degree_stats(&cfg).map_err(|e| e.to_string())?;
            emit(&report, cli.output.as_ref())?;
            true
        }
    };
    Ok(assertions_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    eprintln!("runtime: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: validation checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
