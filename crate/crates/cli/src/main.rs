//! `annulus-bvp`: reduce, certify, solve and verify radial problems on
//! annuli from JSON problem files.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 non-convergence or a
//! failed check, 3 internal error.

mod commands;
mod output;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Bad flags, unreadable files, invalid expressions.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// The computation ran but did not produce an acceptable answer.
#[derive(Debug)]
pub struct Failed(pub String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

#[derive(Debug, Parser)]
#[command(name = "annulus-bvp", version, about = "Positive radial solutions of semilinear problems on annuli")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Show the interval form of an annulus problem: map constants and q(t).
    Reduce {
        #[arg(long)]
        file: PathBuf,
        /// Number of table rows.
        #[arg(long, default_value_t = 11)]
        points: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compute a lambda window and sample its hypotheses.
    Certify {
        #[arg(long)]
        file: PathBuf,
        /// Overrides the file's `window`.
        #[arg(long)]
        window: Option<String>,
    },
    /// First eigenvalue of -u'' = lambda q b u.
    Eigen {
        #[arg(long)]
        file: PathBuf,
        /// Overrides the file's `b` (default 1).
        #[arg(long)]
        b: Option<String>,
        #[arg(long, value_parser = ["shoot", "fd"], default_value = "shoot")]
        method: String,
        /// Interior nodes for the finite-difference method.
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Solve at one lambda and verify every solution found.
    Solve {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_parser = ["picard", "shoot"])]
        method: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Solve over a list or range of lambdas.
    Sweep {
        #[arg(long)]
        file: PathBuf,
        /// Comma-separated values; otherwise the file's `lambdas` or a range.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        #[arg(long, requires_all = ["to", "steps"])]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_parser = ["picard", "shoot"])]
        method: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// List the built-in worked examples, or run one and compare with its
    /// closed form.
    Examples {
        id: Option<String>,
    },
    /// Check a solution stored as CSV (`t,u` columns) against a problem.
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        lambda: Option<f64>,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<InputError>() || cause.is::<std::io::Error>() {
            return 1;
        }
        if cause.is::<Failed>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<annulus_bvp::Error>() {
            use annulus_bvp::Error::*;
            return match e {
                NoConvergence { .. } | BracketExhausted { .. } | NonFinite { .. } | Overflow(_) => 2,
                _ => 1,
            };
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = std::panic::catch_unwind(|| commands::run(cli.command));
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
        Err(_) => ExitCode::from(3),
    }
}
