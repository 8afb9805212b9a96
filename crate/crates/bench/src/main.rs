use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use sparsketch_bench::acceptance::AcceptanceConfig;
use sparsketch_bench::{emit_report, run_experiment, ExperimentConfig, ExperimentId, Format};

#[derive(Parser)]
#[command(name = "sparsketch", version, about = "Run sparse-sketching experiments and write reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gaussian sketch, l2 loss
    EmbedL2(Flags),
    /// p-stable sketch with the median estimator
    EmbedLp(Flags),
    /// ReLU estimator on a mu-certified instance
    EmbedRelu(Flags),
    /// Hinge-like (logistic) estimator on a mu-certified instance
    EmbedHinge(Flags),
    /// Two-stage CountSketch sparse recovery
    Recover(Flags),
    /// Sketch-and-solve LASSO
    Lasso(Flags),
    /// Row sampling on the sampling-failure instance
    SamplingFail(Flags),
    /// Planted-support recovery rate over a grid of sketch sizes
    SupportSweep(Flags),
    /// Monte-Carlo median of calibrated stable variables
    CalibrateStable(Flags),
    /// Sketched k-sparse l2 minimization against brute force
    SketchedMin(Flags),
}

#[derive(Args)]
struct Flags {
    /// Experiment config (JSON); defaults to the built-in acceptance preset
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: the config's output, else the current directory)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trial count override
    #[arg(long)]
    trials: Option<usize>,
    /// Report format
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: Format,
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        "svg" => Ok(Format::Svg),
        _ => Err(format!("unknown format '{s}' (expected csv, json or svg)")),
    }
}

impl Command {
    fn split(self) -> (ExperimentId, Flags) {
        use ExperimentId as E;
        match self {
            Command::EmbedL2(f) => (E::EmbedL2, f),
            Command::EmbedLp(f) => (E::EmbedLp, f),
            Command::EmbedRelu(f) => (E::EmbedRelu, f),
            Command::EmbedHinge(f) => (E::EmbedHinge, f),
            Command::Recover(f) => (E::Recover, f),
            Command::Lasso(f) => (E::Lasso, f),
            Command::SamplingFail(f) => (E::SamplingFail, f),
            Command::SupportSweep(f) => (E::SupportSweep, f),
            Command::CalibrateStable(f) => (E::CalibrateStable, f),
            Command::SketchedMin(f) => (E::SketchedMin, f),
        }
    }
}

fn run(id: ExperimentId, flags: Flags) -> anyhow::Result<bool> {
    let mut cfg = match &flags.config {
        Some(path) => ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => AcceptanceConfig::builtin().preset(id).clone(),
    };
    if cfg.experiment != id {
        bail!("config is for {} but the subcommand is {id}", cfg.experiment);
    }
    if let Some(seed) = flags.seed {
        cfg.master_seed = seed;
    }
    if let Some(trials) = flags.trials {
        cfg.trials = trials;
    }
    let dir = flags.out.or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("."));
    let report = run_experiment(&cfg)?;
    let path = emit_report(&report, flags.format, &dir)?;
    let s = &report.summary;
    println!(
        "{id}: success rate {:.3} over {} trials, max value {:.4}, thresholds {}",
        s.success_rate,
        report.records.len(),
        s.max_value,
        if s.thresholds_met { "met" } else { "missed" }
    );
    println!("report written to {}", path.display());
    Ok(s.thresholds_met)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    let (id, flags) = cli.command.split();
    match run(id, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
