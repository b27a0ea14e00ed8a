//! `verify`: run the numeric verification suites and emit a JSON report.
//!
//! Exit codes: 0 all checks pass, 1 any check fails (or a suite errors out),
//! 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use mahler_verify::report::{CheckResult, Report, Status, SuiteConfig};
use mahler_verify::suites;

#[derive(Parser)]
#[command(name = "verify", about = "Verification suites for the Mahler-measure / L-value identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one or more suites
    Run {
        /// Suite name (repeatable); see `verify list`
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Run every registered suite
        #[arg(long)]
        all: bool,
        /// Decimal digits of certified agreement
        #[arg(long, default_value_t = 30)]
        digits: u32,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plain-text coefficient cache (`n a_n` lines), created if missing
        #[arg(long = "coeff-cache")]
        coeff_cache: Option<PathBuf>,
        /// Override the Theorem 2 k-grid (comma-separated)
        #[arg(long = "grid-k", value_delimiter = ',')]
        grid_k: Option<Vec<f64>>,
    },
    /// List the registered suites
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::List => {
            for (name, what) in suites::SUITES {
                println!("{:18} {}", name, what);
            }
            ExitCode::SUCCESS
        }
        Cmd::Run {
            suites: selected,
            all,
            digits,
            out,
            coeff_cache,
            grid_k,
        } => run(selected, all, digits, out, coeff_cache, grid_k),
    }
}

fn run(
    selected: Vec<String>,
    all: bool,
    digits: u32,
    out: Option<PathBuf>,
    coeff_cache: Option<PathBuf>,
    grid_k: Option<Vec<f64>>,
) -> ExitCode {
    if digits < 10 {
        eprintln!("error: --digits must be at least 10");
        return ExitCode::from(2);
    }
    let names = if all {
        suites::suite_names()
    } else if selected.is_empty() {
        eprintln!("error: pass --suite <name> (repeatable) or --all");
        return ExitCode::from(2);
    } else {
        selected
    };
    let registry = suites::suite_names();
    for name in &names {
        if !registry.contains(name) {
            eprintln!("error: unknown suite: {}", name);
            return ExitCode::from(2);
        }
    }

    let mut config = SuiteConfig::new(digits, names.clone());
    config.coeff_cache = coeff_cache.map(|p| p.display().to_string());
    if let Some(k) = grid_k {
        config.k_grid = k;
    }

    // run suites in parallel, then emit in registry order with checks sorted
    let mut gathered: Vec<(String, anyhow::Result<Vec<CheckResult>>)> = names
        .par_iter()
        .map(|name| (name.clone(), suites::run_suite(name, &config)))
        .collect();
    gathered.sort_by_key(|(name, _)| registry.iter().position(|n| n == name));

    let mut results = Vec::new();
    let mut errored = false;
    for (name, outcome) in gathered {
        match outcome {
            Ok(mut checks) => {
                checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
                for c in checks {
                    let tag = match c.status {
                        Status::Pass => "pass",
                        Status::Fail => "FAIL",
                        Status::Skipped => "skip",
                    };
                    println!(
                        "[{}] {:4} {:40} |lhs-rhs| = {} (tol {})",
                        name, tag, c.check_id, c.abs_diff, c.tolerance
                    );
                    results.push(c);
                }
            }
            Err(e) => {
                eprintln!("[{}] error: {:#}", name, e);
                errored = true;
            }
        }
    }

    let failed = results.iter().filter(|c| c.status == Status::Fail).count();
    let passed = results.iter().filter(|c| c.status == Status::Pass).count();
    println!("{} passed, {} failed, {} total", passed, failed, results.len());

    if let Some(path) = out {
        let report = Report {
            config,
            results,
        };
        match serde_json::to_string_pretty(&report) {
            Ok(json) => {
                if let Err(e) = std::fs::write(&path, json + "\n") {
                    eprintln!("error writing report {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            Err(e) => {
                eprintln!("error serializing report: {}", e);
                return ExitCode::from(2);
            }
        }
    }

    if failed > 0 || errored {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
