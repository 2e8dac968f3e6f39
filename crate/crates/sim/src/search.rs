//! Minimum-SNR search: bisection over Eb/N0 with sequential trial counts.

use serde::Serialize;
use umac_core::trial::TrialConfig;

use crate::error::{Result, SimError};
use crate::runner::{PointStats, Runner};

/// How many trials a point may use. A point starts with `min_trials` and
/// grows by `batch` until its PUPE is `sigmas` standard errors away from the
/// target or `max_trials` is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialBudget {
    pub min_trials: u64,
    pub max_trials: u64,
    pub batch: u64,
    pub sigmas: f64,
}

impl Default for TrialBudget {
    fn default() -> Self {
        TrialBudget { min_trials: 200, max_trials: 10_000, batch: 200, sigmas: 3.0 }
    }
}

impl TrialBudget {
    pub fn fixed(trials: u64) -> Self {
        TrialBudget { min_trials: trials, max_trials: trials, batch: trials.max(1), sigmas: 3.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    pub lo_db: f64,
    pub hi_db: f64,
    pub tolerance_db: f64,
    pub budget: TrialBudget,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { lo_db: 0.0, hi_db: 30.0, tolerance_db: 0.25, budget: TrialBudget::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub ebn0_db: f64,
    pub stats: PointStats,
    pub meets_target: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    /// Midpoint of the final bracket, or the lower edge if that already meets
    /// the target.
    pub ebn0_db: f64,
    pub at_lower_edge: bool,
    /// Every point evaluated, in order.
    pub evaluations: Vec<Evaluation>,
}

impl SearchResult {
    /// The lowest evaluated SNR that met the target.
    pub fn best_passing(&self) -> Option<&Evaluation> {
        self.evaluations.iter().filter(|e| e.meets_target).min_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db))
    }
}

/// Runs one point with the sequential stopping rule of `budget`.
pub fn evaluate_adaptive(
    runner: &Runner,
    cfg: &TrialConfig,
    k_a: usize,
    ebn0_db: f64,
    seed: u64,
    target: f64,
    budget: &TrialBudget,
) -> Result<Evaluation> {
    if k_a == 0 {
        return Err(SimError::Config("PUPE is undefined without active users".into()));
    }
    let mut stats = runner.run_batch(cfg, k_a, ebn0_db, seed, 0, budget.min_trials.max(1))?;
    loop {
        let est = stats.estimate();
        let separated = (est.pupe() - target).abs() > budget.sigmas * est.std_err();
        if separated || stats.trials >= budget.max_trials {
            break;
        }
        let more = budget.batch.max(1).min(budget.max_trials - stats.trials);
        stats = stats.merge(runner.run_batch(cfg, k_a, ebn0_db, seed, stats.trials, more)?);
    }
    let meets_target = stats.estimate().pupe() <= target;
    Ok(Evaluation { ebn0_db, stats, meets_target })
}

/// Bisection on a monotone pass/fail oracle.
pub fn bisect<F>(opts: &SearchOptions, target: f64, mut eval: F) -> Result<SearchResult>
where
    F: FnMut(f64) -> Result<Evaluation>,
{
    if !(target > 0.0 && target < 1.0) {
        return Err(SimError::Config("target PUPE must lie in (0, 1)".into()));
    }
    if !(opts.lo_db < opts.hi_db) || !(opts.tolerance_db > 0.0) {
        return Err(SimError::Config("search bracket must satisfy lo < hi and tolerance > 0".into()));
    }
    let mut evaluations = Vec::new();
    let lo_eval = eval(opts.lo_db)?;
    evaluations.push(lo_eval);
    if lo_eval.meets_target {
        return Ok(SearchResult { ebn0_db: opts.lo_db, at_lower_edge: true, evaluations });
    }
    let hi_eval = eval(opts.hi_db)?;
    evaluations.push(hi_eval);
    if !hi_eval.meets_target {
        return Err(SimError::Saturated { target, ebn0_db: opts.hi_db, pupe: hi_eval.stats.estimate().pupe() });
    }
    let (mut lo, mut hi) = (opts.lo_db, opts.hi_db);
    while hi - lo > opts.tolerance_db {
        let mid = 0.5 * (lo + hi);
        let e = eval(mid)?;
        evaluations.push(e);
        if e.meets_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SearchResult { ebn0_db: 0.5 * (lo + hi), at_lower_edge: false, evaluations })
}

/// Smallest Eb/N0 (to within `opts.tolerance_db`) at which the PUPE of
/// `k_a` users does not exceed `target`.
pub fn min_snr_search(
    runner: &Runner,
    cfg: &TrialConfig,
    k_a: usize,
    target: f64,
    seed: u64,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    bisect(opts, target, |snr| {
        let e = evaluate_adaptive(runner, cfg, k_a, snr, seed, target, &opts.budget)?;
        let est = e.stats.estimate();
        log::info!(
            "K_a={k_a} Eb/N0={snr:.3} dB: PUPE {:.4} ± {:.4} over {} trials",
            est.pupe(),
            est.ci95(),
            est.trials
        );
        Ok(e)
    })
}
