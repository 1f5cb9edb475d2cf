use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use al_lattice::boundary::Branch;
use al_lattice::cli::{exit_code, run, Format, Mode, Overrides, RunConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Verb {
    Simulate,
    Soliton,
    Verify,
    Sweep,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Integrable Ablowitz-Ladik lattices with boundaries.
///
/// Exit status: 0 when every check passed, 2 on invalid input, 3 on a
/// numerical failure or a residual above tolerance.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    verb: Verb,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file (stdout when absent, except for sweeps).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sign of the square root in the boundary closure.
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
    /// Which root of the asymptotic constraint to use for the soliton.
    #[arg(long = "f1inf-index")]
    f1inf_index: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let overrides = Overrides {
        mode: Some(match cli.verb {
            Verb::Simulate => Mode::Simulate,
            Verb::Soliton => Mode::Soliton,
            Verb::Verify => Mode::Verify,
            Verb::Sweep => Mode::Sweep,
        }),
        out: cli.out,
        format: cli.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
        seed: cli.seed,
        branch: cli.branch.map(|b| match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }),
        f1inf_index: cli.f1inf_index,
    };
    let result = RunConfig::load(&cli.config).and_then(|mut cfg| {
        cfg.apply(&overrides);
        run(&cfg)
    });
    match &result {
        Ok(o) => eprintln!("{}: {}", if o.passed { "pass" } else { "FAIL" }, o.message),
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
