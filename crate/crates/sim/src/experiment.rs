//! PUPE sweeps and supported-users (capacity) curves.

use serde::Serialize;
use umac_core::trial::TrialConfig;

use crate::error::{Result, SimError};
use crate::runner::{PointStats, Runner};
use crate::search::{min_snr_search, SearchOptions, SearchResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub k_a: usize,
    pub ebn0_db: f64,
    pub stats: PointStats,
}

/// PUPE at fixed `K_a` over a list of Eb/N0 values. Every point reuses the
/// same per-trial seeds, so neighbouring points see the same messages,
/// channels and noise shapes.
pub fn sweep(
    runner: &Runner,
    cfg: &TrialConfig,
    k_a: usize,
    ebn0_db: &[f64],
    seed: u64,
    trials: u64,
) -> Result<Vec<SweepPoint>> {
    ebn0_db
        .iter()
        .map(|&snr| {
            let stats = runner.run_point(cfg, k_a, snr, seed, trials)?;
            let est = stats.estimate();
            log::info!("K_a={k_a} Eb/N0={snr} dB: PUPE {:.4} ± {:.4}", est.pupe(), est.ci95());
            Ok(SweepPoint { k_a, ebn0_db: snr, stats })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityPoint {
    pub k_a: usize,
    /// `None` when the target is not met anywhere in the bracket.
    pub search: Option<SearchResult>,
}

/// Minimum Eb/N0 for each `K_a`. The grid is walked in increasing order and
/// stops at the first saturated value, since the requirement only grows with
/// the load.
pub fn capacity(
    runner: &Runner,
    cfg: &TrialConfig,
    k_values: &[usize],
    target: f64,
    seed: u64,
    opts: &SearchOptions,
) -> Result<Vec<CapacityPoint>> {
    let mut ks = k_values.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let mut out = Vec::new();
    for k_a in ks {
        match min_snr_search(runner, cfg, k_a, target, seed, opts) {
            Ok(r) => out.push(CapacityPoint { k_a, search: Some(r) }),
            Err(SimError::Saturated { .. }) => {
                log::warn!("K_a={k_a}: target {target} not reached below {} dB, stopping", opts.hi_db);
                out.push(CapacityPoint { k_a, search: None });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
