use clap::{Parser, Subcommand};
use redord_cli::{cmd_selftest, run, Command, ExitStatus, Options};
use redord_core::arith::CyclotomicTable;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "redord", version, about = "Censuses of multiplicative orders of algebraic numbers modulo primes")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Sub {
    /// Orders of degree-d reductions against f(p)/h.
    OrderCensus(RunArgs),
    /// Rough divisors of quadratic polynomial values.
    Rough(RunArgs),
    /// Primes with smooth p^d − 1.
    Smooth(RunArgs),
    /// Periods and residue deviations of a linear recurrence.
    Linrec(RunArgs),
    /// Joint order thresholds p^{g(k)+ε}.
    Threshold(RunArgs),
    /// Embedded oracle checks.
    Selftest,
}

fn main() {
    let cli = Cli::parse();
    let (cmd, args) = match cli.command {
        Sub::OrderCensus(a) => (Command::OrderCensus, a),
        Sub::Rough(a) => (Command::Rough, a),
        Sub::Smooth(a) => (Command::Smooth, a),
        Sub::Linrec(a) => (Command::Linrec, a),
        Sub::Threshold(a) => (Command::Threshold, a),
        Sub::Selftest => std::process::exit(cmd_selftest(&CyclotomicTable::standard()).code()),
    };
    let opts = Options { out: args.out, workers: args.workers, seed: args.seed };
    let status = run(cmd, &args.config, &opts);
    match &status {
        ExitStatus::Config(msg) | ExitStatus::Budget(msg) => eprintln!("error: {msg}"),
        _ => {}
    }
    std::process::exit(status.code());
}
