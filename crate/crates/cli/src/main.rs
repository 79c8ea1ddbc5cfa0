//! `torsionkit`: batch front end over the torsionkit library.
//!
//! Every run prints a short summary on stdout and can write a JSON report.
//! Exit codes: 0 complete, 1 failed check or infeasible verdict, 2 unreadable
//! input, 3 some results left undetermined by the budget.

mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{CrossRatioArgs, Failure, HeightArgs, IdealArgs, NetworkArgs, ReproduceArgs, TorusScanArgs};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use torsionkit::groebner::Budget;
use torsionkit::report::{Report, Status};

#[derive(Parser)]
#[command(name = "torsionkit", version, about = "Exact torus-coset scans, heights, cross-ratios and flat networks")]
struct Cli {
    /// Worker threads; all cores when omitted.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Gröbner resource profile.
    #[arg(long, global = true, value_enum, default_value_t = Profile::Default)]
    budget: Profile,
    /// Wall-clock limit in milliseconds for each Gröbner computation.
    #[arg(long, global = true)]
    time_limit: Option<u64>,
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Leave timings out of the report so it is byte-identical across runs.
    #[arg(long, global = true)]
    no_timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Default,
    Extended,
    Stretch,
}

impl Profile {
    fn name(self) -> &'static str {
        match self {
            Profile::Default => "default",
            Profile::Extended => "extended",
            Profile::Stretch => "stretch",
        }
    }

    fn budget(self, millis: Option<u64>) -> Budget {
        let b = match self {
            Profile::Default => Budget::default(),
            Profile::Extended => Budget::extended(),
            Profile::Stretch => Budget::stretch(),
        };
        match millis {
            Some(ms) => b.with_millis(ms),
            None => b,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Search a subvariety of the torus for translates of subtori.
    TorusScan(TorusScanArgs),
    /// Gröbner bases, membership, elimination and saturation.
    Ideal(IdealArgs),
    /// Weil heights of points and algebraic numbers.
    Height(HeightArgs),
    /// Checks on stable-form configurations.
    CrossRatio(CrossRatioArgs),
    /// Kirchhoff currents and cylinder moduli on a dual graph.
    Network(NetworkArgs),
    /// Rerun a computation of the paper against its golden file.
    Reproduce(ReproduceArgs),
}

fn exit_code(rep: &Report) -> u8 {
    if rep.any(Status::Fail) {
        1
    } else if rep.any(Status::Undetermined) {
        3
    } else {
        0
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let budget = cli.budget.budget(cli.time_limit);
    let ctx = commands::Context { budget, budget_name: cli.budget.name() };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::TorusScan(a) => commands::torus_scan(a, &ctx),
        Command::Ideal(a) => commands::ideal(a, &ctx),
        Command::Height(a) => commands::height(a, &ctx),
        Command::CrossRatio(a) => commands::cross_ratio(a, &ctx),
        Command::Network(a) => commands::network(a, &ctx),
        Command::Reproduce(a) => commands::reproduce(a, &ctx),
    };
    let (mut rep, lines) = match outcome {
        Ok(x) => x,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("undetermined: {msg}");
            return ExitCode::from(3);
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    rep.total_millis = Some(start.elapsed().as_millis() as u64);
    if cli.no_timings {
        rep = rep.without_timings();
    }
    for l in &lines {
        println!("{l}");
    }
    for v in &rep.verdicts {
        let status = serde_json::to_value(v.status).ok().and_then(|s| s.as_str().map(String::from)).unwrap_or_default();
        let grade = serde_json::to_value(v.grade).ok().and_then(|s| s.as_str().map(String::from)).unwrap_or_default();
        println!("{}: {status} [{grade}] {}", v.name, v.detail);
    }
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, rep.to_json() + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(exit_code(&rep))
}
