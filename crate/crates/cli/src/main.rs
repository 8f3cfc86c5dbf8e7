//! `heun`: identities, reductions and case studies for the general Heun
//! equation, with numerical verification of every claimed equality.
//!
//! Exit codes: 0 success, 1 verification failed or no reduction found,
//! 2 invalid input, 3 identity not applicable.

mod cases;
mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use heun_core::IdentityId;

#[derive(Parser, Debug)]
#[command(name = "heun", version, about = "Heun equation identities, hypergeometric reductions and case studies")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Config {
    /// Relative tolerance for every verification
    #[arg(long, global = true, env = "HEUN_TOL", default_value_t = 1e-8, value_parser = parse_tol)]
    pub tol: f64,
    /// Number of Frobenius series terms (at least 8)
    #[arg(long, global = true, default_value_t = 128, value_parser = parse_order)]
    pub order: usize,
    /// Points on the default verification grid
    #[arg(long, global = true, default_value_t = 21, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    pub grid_points: u32,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(format!("tolerance must be positive and finite, got {s}"))
    }
}

fn parse_order(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n >= 8 {
        Ok(n)
    } else {
        Err(format!("series order must be at least 8, got {n}"))
    }
}

fn parse_identity(s: &str) -> Result<IdentityId, String> {
    s.parse::<IdentityId>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply an identity and print the transformed parameters
    Transform {
        /// Parameter set as JSON (inline, @file or - for stdin)
        #[arg(long)]
        params: String,
        /// line5, line9 or line17
        #[arg(long, value_parser = parse_identity)]
        identity: IdentityId,
    },
    /// List every reduction to the Gauss function that applies
    Reduce {
        /// Parameter set as JSON (inline, @file or - for stdin)
        #[arg(long)]
        params: String,
    },
    /// Run one of the physical case studies
    Case {
        #[command(subcommand)]
        case: cases::CaseCommand,
    },
    /// Check a form, an identity or the series itself on a grid
    Verify {
        /// Parameter set as JSON (inline, @file or - for stdin)
        #[arg(long)]
        params: String,
        /// Hypergeometric form as JSON, compared with the Heun series
        #[arg(long, conflicts_with = "identity")]
        form: Option<String>,
        /// Identity whose two sides are compared
        #[arg(long, value_parser = parse_identity)]
        identity: Option<IdentityId>,
        /// Grid as JSON, e.g. {"segment": {"from": -0.5, "to": "0.5+0.1i", "points": 21}}
        #[arg(long)]
        grid: Option<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Inapplicable(String),
}

impl From<heun_core::Error> for CliError {
    fn from(e: heun_core::Error) -> Self {
        match e {
            heun_core::Error::InapplicableIdentity { .. } => CliError::Inapplicable(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

/// What a command decided, independent of how it is printed.
pub enum Verdict {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Transform { params, identity } => commands::transform(&cli.config, params, *identity),
        Command::Reduce { params } => commands::reduce(&cli.config, params),
        Command::Case { case } => cases::run(&cli.config, case),
        Command::Verify { params, form, identity, grid } => {
            commands::verify(&cli.config, params, form.as_deref(), *identity, grid.as_deref())
        }
    };
    match outcome {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Inapplicable(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
