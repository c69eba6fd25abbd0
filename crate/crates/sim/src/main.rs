use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hst_ofdm::csv_out;
use hst_ofdm::experiments::{run, run_design_pilots, Experiment};
use hst_ofdm::ExperimentConfig;

#[derive(Parser)]
#[command(name = "hst-ofdm", version, about = "Multi-cell high-speed-train OFDM channel estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Channel MSE against SNR at a fixed track position.
    MseSnr(Common),
    /// Channel MSE across track positions.
    MsePosition(Common),
    /// Channel MSE across train speeds.
    MseVelocity(Common),
    /// Bit error rate against SNR.
    BerSnr(Common),
    /// Search for a low-coherence pilot pattern and write it as JSON.
    DesignPilots(Common),
    /// Pilot-row interference before and after elimination.
    DiagnoseElimination(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config; omitted keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Append to `--out` instead of overwriting; rows must share the config hash.
    #[arg(long, requires = "out")]
    append: bool,
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let (experiment, common) = match cli.command {
        Command::MseSnr(c) => (Some(Experiment::MseSnr), c),
        Command::MsePosition(c) => (Some(Experiment::MsePosition), c),
        Command::MseVelocity(c) => (Some(Experiment::MseVelocity), c),
        Command::BerSnr(c) => (Some(Experiment::BerSnr), c),
        Command::DiagnoseElimination(c) => (Some(Experiment::DiagnoseElimination), c),
        Command::DesignPilots(c) => (None, c),
    };
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.threads {
        anyhow::ensure!(n >= 1, "--threads must be at least 1");
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("building thread pool")?;

    let output = match experiment {
        Some(exp) => {
            let rows = pool.install(|| run(exp, &cfg))?;
            if common.append {
                let path = common.out.as_ref().expect("clap enforces --out");
                csv_out::append_file(path, &rows)?;
                return Ok(());
            }
            csv_out::to_string(&rows)?
        }
        None => {
            let report = run_design_pilots(&cfg)?;
            eprintln!(
                "coherence {:.6} (equidistant {:.6})",
                report.coherence, report.equidistant_coherence
            );
            serde_json::to_string_pretty(&report)? + "\n"
        }
    };
    match &common.out {
        Some(path) => std::fs::write(path, output).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(output.as_bytes())?,
    }
    Ok(())
}
