use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use nemo::harness::{aggregate, run_experiment, write_csv, ExperimentConfig, Kind};

/// Run seeded NEMO experiments and write their results as CSV.
#[derive(Parser)]
#[command(name = "nemo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simple sequence memorisation, recall against presentations.
    SimpleSeq(RunArgs),
    /// Scaffolded sequence memorisation.
    ScaffoldSeq(RunArgs),
    /// Recall against sequence length.
    SeqCapacity(RunArgs),
    /// Sequence recall over a parameter grid.
    SeqSweep(RunArgs),
    /// FSM transition recall and accuracy against presentations.
    FsmTrain(RunArgs),
    /// Train an FSM network and run it on the configured inputs.
    FsmRun(RunArgs),
    /// FSM recall and accuracy over a parameter grid.
    FsmSweep(RunArgs),
    /// FSM accuracy against input length.
    FsmStrlen(RunArgs),
    /// Simulate a Turing machine on the configured inputs.
    TmRun(RunArgs),
    /// Run any config, whatever its kind.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Output CSV; stdout if omitted. Relative paths are resolved against
    /// NEMO_OUT_DIR when it is set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Don't print the summary table.
    #[arg(long)]
    quiet: bool,
    #[arg(long, env = "NEMO_OUT_DIR", hide = true)]
    out_dir: Option<PathBuf>,
}

impl Command {
    fn split(self) -> (Option<Kind>, RunArgs) {
        match self {
            Command::SimpleSeq(a) => (Some(Kind::SimpleSeq), a),
            Command::ScaffoldSeq(a) => (Some(Kind::ScaffoldSeq), a),
            Command::SeqCapacity(a) => (Some(Kind::SeqCapacity), a),
            Command::SeqSweep(a) => (Some(Kind::SeqSweep), a),
            Command::FsmTrain(a) => (Some(Kind::FsmTrain), a),
            Command::FsmRun(a) => (Some(Kind::FsmRun), a),
            Command::FsmSweep(a) => (Some(Kind::FsmSweep), a),
            Command::FsmStrlen(a) => (Some(Kind::FsmStrlen), a),
            Command::TmRun(a) => (Some(Kind::TmRun), a),
            Command::Run(a) => (None, a),
        }
    }
}

fn run(kind: Option<Kind>, args: RunArgs) -> Result<(), String> {
    let mut cfg = ExperimentConfig::from_file(&args.config).map_err(|e| e.to_string())?;
    if let Some(kind) = kind {
        if cfg.kind != kind {
            return Err(format!(
                "{} is a `{}` config, not `{}`",
                args.config.display(),
                cfg.kind.name(),
                kind.name()
            ));
        }
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    cfg.validate().map_err(|e| e.to_string())?;

    info!("running {} ({} trials, seed {})", cfg.id(), cfg.trials, cfg.seed);
    let rows = run_experiment(&cfg).map_err(|e| e.to_string())?;

    match args.out {
        Some(path) => {
            let path = match args.out_dir {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path,
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| format!("{}: {e}", parent.display()))?;
            }
            let file = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            write_csv(&rows, BufWriter::new(file)).map_err(|e| e.to_string())?;
            info!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => write_csv(&rows, io::stdout().lock()).map_err(|e| e.to_string())?,
    }

    if !args.quiet {
        let mut err = io::stderr().lock();
        let _ = writeln!(err, "{:<8} {:<8} {:<28} {:>9} {:>9} {:>9}", "param", "value", "metric", "mean", "min", "max");
        for s in aggregate(&rows) {
            let _ = writeln!(
                err,
                "{:<8} {:<8} {:<28} {:>9.4} {:>9.4} {:>9.4}",
                s.param, s.value, s.metric, s.mean, s.min, s.max
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    match run(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
