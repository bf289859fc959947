use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use l1lab::cli::{write_report, Command, ExperimentConfig};

#[derive(Parser)]
#[command(name = "l1lab", version, about = "Finite-dimensional L_1 embedding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Evaluate a sequence norm on listed vectors.
    Norm(Common),
    /// Estimate a convexity or concavity constant.
    Estimate(Common),
    /// Change-of-density search on a realized span.
    Density(Common),
    /// Tensor embedding of E(F) with chain verification and distortion.
    Embed(Common),
    /// Distortion of the natural construction for r > p.
    Remark2(Common),
    /// Convexify, tensor and concavify an Orlicz space.
    Sketch(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: config `out`, else the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config sample budget.
    #[arg(long)]
    budget: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Norm(a) => (Command::Norm, a),
        Sub::Estimate(a) => (Command::Estimate, a),
        Sub::Density(a) => (Command::Density, a),
        Sub::Embed(a) => (Command::Embed, a),
        Sub::Remark2(a) => (Command::Remark2, a),
        Sub::Sketch(a) => (Command::Sketch, a),
    };
    match run(command, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, args: Common) -> l1lab::Result<bool> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(seed) = args.seed {
        cfg.seed = Some(seed);
    }
    if let Some(budget) = args.budget {
        cfg.budget = budget;
    }
    let out = args.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    let report = command.run(&cfg)?;
    write_report(&report, &out)?;
    print!("{}", report.summary);
    Ok(report.passed)
}
