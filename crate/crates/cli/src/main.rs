use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rclt::experiment::{inspect_state, run_audio, run_synthetic, Approach, RunOutcome};
use rclt::metrics::{active_overlap_percent, density};
use rclt::{Rule, RunConfig64};

#[derive(Parser)]
#[command(name = "rclt", version, about = "Reduced cortical learning circuit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the circuit over a generated frame sequence.
    RunSynthetic(RunArgs),
    /// Run the circuit over framed 16-bit PCM mono WAV audio.
    RunAudio(RunArgs),
    /// Summarize a saved state archive.
    Inspect { archive: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` config file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: $RCLT_OUT, then ./rclt_out).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = ["fl", "fos"])]
    rule: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    perturb_step: Option<usize>,
    #[arg(long)]
    perturb_fraction: Option<f64>,
    /// 16-bit PCM mono input for run-audio (default: the bundled clip).
    #[arg(long)]
    wav: Option<PathBuf>,
    /// Print per-step metrics.
    #[arg(long)]
    verbose: bool,
}

impl RunArgs {
    fn resolve(&self, approach: Approach) -> rclt::Result<RunConfig64> {
        let mut cfg = RunConfig64::new(approach);
        if let Some(path) = &self.config {
            cfg.apply_config_file(path)?;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.circuit.seed = seed;
        }
        if let Some(rule) = &self.rule {
            cfg.circuit.encoder.rule = rule.parse::<Rule>()?;
        }
        if let Some(steps) = self.steps {
            cfg.steps = steps;
        }
        if let Some(p) = self.perturb_step {
            cfg.perturb_step = Some(p);
        }
        if let Some(f) = self.perturb_fraction {
            cfg.perturb_fraction = f;
        }
        if let Some(wav) = &self.wav {
            cfg.wav = Some(wav.clone());
        }
        cfg.verbose |= self.verbose;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report(outcome: &RunOutcome<f64>, cfg: &RunConfig64) -> rclt::Result<()> {
    println!("t,accuracy_percent");
    for r in &outcome.records {
        println!("{},{:.1}", r.t, r.accuracy_percent);
    }
    if cfg.verbose {
        println!("t\tpositional%\tactive_overlap%\tinput_density\twinners\tstored\tunion_density");
        for r in &outcome.reports {
            let active: f64 = active_overlap_percent(&r.input_sdr, &r.matched_sdr)?;
            let union = outcome.circuit.union(r.t);
            println!(
                "{}\t{:.2}\t{:.2}\t{:.3}\t{:?}\t{}\t{:.3}",
                r.t,
                r.accuracy_percent,
                active,
                density::<f64>(&r.input_sdr),
                r.winners.indices,
                r.stored,
                density::<f64>(&union),
            );
        }
    }
    println!("outputs written to {}", outcome.out_dir.display());
    Ok(())
}

fn run(cli: Cli) -> rclt::Result<()> {
    match cli.command {
        Command::RunSynthetic(args) => {
            let cfg = args.resolve(Approach::Synthetic)?;
            init_logging(cfg.verbose);
            let outcome = run_synthetic(&cfg)?;
            report(&outcome, &cfg)
        }
        Command::RunAudio(args) => {
            let cfg = args.resolve(Approach::Audio)?;
            init_logging(cfg.verbose);
            let outcome = run_audio(&cfg, None)?;
            report(&outcome, &cfg)
        }
        Command::Inspect { archive } => {
            print!("{}", inspect_state::<f64>(&archive)?);
            Ok(())
        }
    }
}

fn init_logging(verbose: bool) {
    let level = if verbose { "debug" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
