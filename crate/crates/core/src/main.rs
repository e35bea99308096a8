use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, ValueEnum};

use qpencil::report::{run, RunConfig, Subcommand};

const EXIT_CONFIG: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "qpencil", version, about = "Checks for the quantum cohomology of intersections of two quadrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Euler characteristic and primitive rank.
    Euler(Opts),
    /// Middle-dimensional lattice: Gram determinant, index, signature.
    Cohomology(Opts),
    /// Special fiber cohomology and the restriction map.
    Fiber(Opts),
    /// Lagrange weights and the plane inside X.
    Geombasis(Opts),
    /// Finite-field smoothness scans of the degeneration.
    Smoothness(Opts),
    /// Screen the degeneration formula for the main correlator.
    Degeneration(Opts),
    /// Every section above.
    Full(Opts),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Opts {
    /// Dimension of X; even and at least 2.
    #[arg(long)]
    m: u32,
    /// Comma-separated distinct rationals, m+3 of them (default 0,1,...,m+2).
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<String>>,
    /// Comma-separated odd primes for the scans (default 5,7,11; infeasible defaults are skipped).
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random polynomials for the plane check.
    #[arg(long, default_value_t = 100)]
    trials: u32,
    /// Largest number of points a single scan may visit.
    #[arg(long)]
    budget: Option<u64>,
    /// Fail when two lambdas agree modulo a scanned prime.
    #[arg(long)]
    strict_lambda: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Command {
    fn split(self) -> (Subcommand, Opts) {
        match self {
            Command::Euler(o) => (Subcommand::Euler, o),
            Command::Cohomology(o) => (Subcommand::Cohomology, o),
            Command::Fiber(o) => (Subcommand::Fiber, o),
            Command::Geombasis(o) => (Subcommand::Geombasis, o),
            Command::Smoothness(o) => (Subcommand::Smoothness, o),
            Command::Degeneration(o) => (Subcommand::Degeneration, o),
            Command::Full(o) => (Subcommand::Full, o),
        }
    }
}

fn config(o: &Opts) -> RunConfig {
    let mut cfg = RunConfig::new(o.m);
    if let Some(l) = &o.lambda {
        cfg.lambda = l.iter().map(|s| s.trim().to_string()).collect();
    }
    if let Some(p) = &o.primes {
        cfg.primes = p.clone();
        cfg.primes_explicit = true;
    }
    if let Some(b) = o.budget {
        cfg.budget = b;
    }
    cfg.seed = o.seed;
    cfg.trials = o.trials;
    cfg.strict_lambda = o.strict_lambda;
    cfg
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (cmd, opts) = cli.command.split();
    let report = match run(cmd, &config(&opts)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            if let qpencil::Error::BudgetExceeded { .. } = e {
                eprintln!("hint: pass a smaller prime with --primes or raise --budget");
            }
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let body = match opts.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    match &opts.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
