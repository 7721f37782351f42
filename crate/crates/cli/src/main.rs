//! Command-line surface of the exact orbifold invariant calculator.
//!
//! Exit status: 0 when the run succeeds and every requested agreement
//! check passes, 1 when a computation completes but a check fails, 2 on
//! errors (bad usage, unreadable or invalid target files, invalid
//! lifts); errors are reported as JSON on stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use orbigw_cli::{emit, runner};
use orbigw_cli::runner::{Invocation, RunOutput};
use orbigw_cli::schema::CliError;
use orbigw_core::group::DEFAULT_ORDER_CAP;

#[derive(Parser)]
#[command(
    name = "orbigw",
    version,
    about = "Exact calculator for genus-one degree-zero orbifold Gromov-Witten invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugacy, bi-conjugacy, and bicyclic-subgroup structure of the
    /// target's groups
    GroupInfo(TargetArgs),
    /// The dilaton invariant by every route the model supports
    Dilaton(TargetArgs),
    /// The divisor invariant, with the torus-independence check on the
    /// lift
    Divisor(TargetArgs),
    /// The twisted identity at index k: localized left-hand side
    /// against both right-hand-side forms
    Twisted(TwistedArgs),
    /// Every applicable identity and route comparison; several targets
    /// are also compared against each other
    Check(CheckArgs),
}

#[derive(Args)]
struct TargetArgs {
    /// Target description file (JSON)
    target: PathBuf,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include the per-component breakdown in the report
    #[arg(long)]
    breakdown: bool,
}

#[derive(Args)]
struct TwistedArgs {
    /// Target description file (JSON, localization model)
    target: PathBuf,
    /// Index of the twisted integral
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Override the file's twist order (highest twist parameter index)
    #[arg(long)]
    jmax: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include the per-component breakdown in the report
    #[arg(long)]
    breakdown: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// One or more target description files; invariant values are
    /// compared across all of them
    #[arg(required = true)]
    targets: Vec<PathBuf>,
    /// Worker threads for the independent checks (the report is
    /// byte-identical for any value)
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn order_cap_from_env() -> Result<usize, CliError> {
    match std::env::var("ORBIGW_ORDER_CAP") {
        Ok(text) => text.trim().parse::<usize>().map_err(|_| CliError::Usage {
            message: format!("ORBIGW_ORDER_CAP must be a positive integer, got \"{text}\""),
        }),
        Err(_) => Ok(DEFAULT_ORDER_CAP),
    }
}

fn dispatch(cli: Cli) -> Result<(RunOutput, Option<PathBuf>), CliError> {
    let order_cap = order_cap_from_env()?;
    let base = |targets: Vec<PathBuf>| Invocation {
        targets,
        k: 0,
        jmax: None,
        breakdown: false,
        threads: 1,
        order_cap,
    };
    match cli.command {
        Cmd::GroupInfo(args) => {
            let inv = Invocation {
                breakdown: args.breakdown,
                ..base(vec![args.target])
            };
            Ok((runner::run_group_info(&inv)?, args.out))
        }
        Cmd::Dilaton(args) => {
            let inv = Invocation {
                breakdown: args.breakdown,
                ..base(vec![args.target])
            };
            Ok((runner::run_dilaton(&inv)?, args.out))
        }
        Cmd::Divisor(args) => {
            let inv = Invocation {
                breakdown: args.breakdown,
                ..base(vec![args.target])
            };
            Ok((runner::run_divisor(&inv)?, args.out))
        }
        Cmd::Twisted(args) => {
            let inv = Invocation {
                k: args.k,
                jmax: args.jmax,
                breakdown: args.breakdown,
                ..base(vec![args.target])
            };
            Ok((runner::run_twisted(&inv)?, args.out))
        }
        Cmd::Check(args) => {
            let inv = Invocation {
                threads: args.threads.max(1),
                ..base(args.targets)
            };
            Ok((runner::run_check(&inv)?, args.out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((output, out)) => {
            if let Err(e) = runner::write_report(&output.report, out.as_deref()) {
                eprintln!("{}", emit::render(&e.to_json()).trim_end());
                return ExitCode::from(2);
            }
            if output.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", emit::render(&e.to_json()).trim_end());
            ExitCode::from(2)
        }
    }
}
