use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use umac_core::presets::PRESET_NAMES;
use umac_core::receiver::RxDiagnostics;
use umac_core::trial::run_trial;
use umac_sim::config::SimConfig;
use umac_sim::experiment::{capacity, sweep};
use umac_sim::export::{capacity_rows, sweep_rows, write_csv, write_outputs, Sidecar};
use umac_sim::grid::{parse_f64_list, parse_usize_list};
use umac_sim::runner::Runner;
use umac_sim::search::{SearchOptions, TrialBudget};

/// Monte Carlo link-level simulator for 5G NR two-step random access and
/// SB-IDMA over Gaussian and Rayleigh block-fading multiple-access channels.
#[derive(Parser)]
#[command(name = "umac-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Preset name or path to a JSON configuration.
    #[arg(long, default_value = "table1_gaussian")]
    config: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Overrides the number of receive antennas.
    #[arg(long)]
    rx_antennas: Option<usize>,
    /// Give the receiver the list of transmitted preambles instead of running OMP.
    #[arg(long)]
    ideal_preamble_detection: bool,
    /// Single-pass TIN receiver.
    #[arg(long)]
    no_sic: bool,
    /// Worker threads (0 = one per core). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl Common {
    fn resolve(&self) -> Result<SimConfig> {
        let mut cfg = SimConfig::load(&self.config)?;
        if let Some(n) = self.rx_antennas {
            cfg.rx_antennas = n;
        }
        cfg.ideal_detection |= self.ideal_preamble_detection;
        cfg.sic &= !self.no_sic;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// PUPE versus Eb/N0 at a fixed number of active users.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ka: usize,
        /// Eb/N0 values in dB: `a,b,c` or `start:step:stop`.
        #[arg(long)]
        ebn0: String,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// CSV output (a JSON sidecar is written next to it); stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum Eb/N0 reaching the target PUPE for each number of active users.
    Capacity {
        #[command(flatten)]
        common: Common,
        /// Active-user counts: `a,b,c` or `start:step:stop`.
        #[arg(long)]
        ka: String,
        #[arg(long, default_value_t = 0.05)]
        target_pupe: f64,
        /// Minimum trials per point.
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 10_000)]
        max_trials: u64,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 30.0)]
        hi: f64,
        #[arg(long, default_value_t = 0.25)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One seeded trial with full receiver diagnostics (JSON on stdout).
    Trial {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ka: usize,
        #[arg(long)]
        ebn0: f64,
    },
    /// Frame arithmetic, power, noiseless-recovery and determinism checks.
    Check {
        /// Noiseless single-user trials per preset.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
    },
    /// Lists the presets, or prints one as an editable JSON configuration.
    Presets { name: Option<String> },
}

#[derive(Serialize)]
struct TrialReport<'a> {
    config: &'a str,
    k_a: usize,
    ebn0_db: f64,
    seed: u64,
    misses: usize,
    decoded: usize,
    false_alarms: usize,
    misdetections: usize,
    hits: &'a [bool],
    diagnostics: &'a RxDiagnostics,
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep { common, ka, ebn0, trials, out } => {
            let cfg = common.resolve()?;
            let grid = parse_f64_list(&ebn0)?;
            let runner = Runner::new(common.workers)?;
            let start = Instant::now();
            let points = sweep(&runner, &cfg.trial_config()?, ka, &grid, common.seed, trials)?;
            let rows = sweep_rows(&cfg.name, &points, common.seed);
            emit(out, &rows, &cfg, &common, &runner, start, &points)?;
        }
        Command::Capacity { common, ka, target_pupe, trials, max_trials, lo, hi, tolerance, out } => {
            let cfg = common.resolve()?;
            let ks = parse_usize_list(&ka)?;
            if trials > max_trials {
                bail!("--trials must not exceed --max-trials");
            }
            let budget = TrialBudget { min_trials: trials, max_trials, batch: trials.max(1), sigmas: 3.0 };
            let opts = SearchOptions { lo_db: lo, hi_db: hi, tolerance_db: tolerance, budget };
            let runner = Runner::new(common.workers)?;
            let start = Instant::now();
            let points = capacity(&runner, &cfg.trial_config()?, &ks, target_pupe, common.seed, &opts)?;
            let rows = capacity_rows(&cfg.name, &points, common.seed);
            emit(out, &rows, &cfg, &common, &runner, start, &points)?;
        }
        Command::Trial { common, ka, ebn0 } => {
            let cfg = common.resolve()?;
            let o = run_trial(&cfg.trial_config()?, ka, ebn0, common.seed)?;
            let report = TrialReport {
                config: &cfg.name,
                k_a: ka,
                ebn0_db: ebn0,
                seed: common.seed,
                misses: o.misses(),
                decoded: o.decoded,
                false_alarms: o.false_alarms,
                misdetections: o.misdetections,
                hits: &o.hits,
                diagnostics: &o.diagnostics,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Check { seeds } => {
            let results = umac_sim::check::run_checks(seeds)?;
            let failed = results.iter().filter(|r| !r.passed).count();
            for r in &results {
                println!("{} {} ({})", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            if failed > 0 {
                bail!("{failed} of {} checks failed", results.len());
            }
        }
        Command::Presets { name: None } => {
            for n in PRESET_NAMES {
                println!("{n}");
            }
        }
        Command::Presets { name: Some(n) } => println!("{}", SimConfig::from_preset(&n)?.to_json()),
    }
    Ok(())
}

fn emit<P: Serialize>(
    out: Option<PathBuf>,
    rows: &[umac_sim::export::Row],
    cfg: &SimConfig,
    common: &Common,
    runner: &Runner,
    start: Instant,
    points: &P,
) -> Result<()> {
    match out {
        Some(path) => {
            let command = command_line();
            let side = Sidecar {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                command: &command,
                config: cfg,
                seed: common.seed,
                workers: runner.workers(),
                wall_clock_s: start.elapsed().as_secs_f64(),
                points,
            };
            write_outputs(&path, rows, &side).with_context(|| format!("writing {}", path.display()))?;
            log::info!("wrote {}", path.display());
        }
        None => write_csv(std::io::stdout().lock(), rows)?,
    }
    Ok(())
}
