//! Parallel execution of independent trials.
//!
//! Trial `i` of a point always uses the seed `mix_seed(master, i)`, and
//! per-trial counts are merged with integer sums, so a point's statistics do
//! not depend on the number of workers or on scheduling order.

use rayon::prelude::*;
use serde::Serialize;
use umac_core::rng::mix_seed;
use umac_core::trial::{run_trial, PupeEstimate, TrialConfig, TrialOutcome};

use crate::error::Result;

pub fn trial_seed(master: u64, index: u64) -> u64 {
    mix_seed(master, index)
}

/// Counts accumulated over the trials of one `(K_a, Eb/N0)` point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PointStats {
    pub misses: u64,
    pub users: u64,
    pub trials: u64,
    pub false_alarms: u64,
    pub misdetections: u64,
    pub decode_attempts: u64,
    /// Trials whose receiver stopped at the iteration cap.
    pub cap_hits: u64,
}

impl PointStats {
    pub fn from_outcome(o: &TrialOutcome) -> Self {
        PointStats {
            misses: o.misses() as u64,
            users: o.k_a as u64,
            trials: 1,
            false_alarms: o.false_alarms as u64,
            misdetections: o.misdetections as u64,
            decode_attempts: o.diagnostics.decode_attempts as u64,
            cap_hits: o.diagnostics.cap_hit as u64,
        }
    }

    pub fn merge(mut self, o: PointStats) -> Self {
        self.misses += o.misses;
        self.users += o.users;
        self.trials += o.trials;
        self.false_alarms += o.false_alarms;
        self.misdetections += o.misdetections;
        self.decode_attempts += o.decode_attempts;
        self.cap_hits += o.cap_hits;
        self
    }

    pub fn estimate(&self) -> PupeEstimate {
        PupeEstimate { misses: self.misses, users: self.users, trials: self.trials }
    }
}

pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    /// `workers = 0` lets rayon pick one thread per core.
    pub fn new(workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
        Ok(Runner { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs trials `first .. first + count` of one point.
    pub fn run_batch(
        &self,
        cfg: &TrialConfig,
        k_a: usize,
        ebn0_db: f64,
        master_seed: u64,
        first: u64,
        count: u64,
    ) -> Result<PointStats> {
        self.pool.install(|| {
            (first..first + count)
                .into_par_iter()
                .map(|i| {
                    let o = run_trial(cfg, k_a, ebn0_db, trial_seed(master_seed, i))?;
                    Ok(PointStats::from_outcome(&o))
                })
                .try_reduce(PointStats::default, |a, b| Ok(a.merge(b)))
        })
    }

    pub fn run_point(&self, cfg: &TrialConfig, k_a: usize, ebn0_db: f64, master_seed: u64, trials: u64) -> Result<PointStats> {
        self.run_batch(cfg, k_a, ebn0_db, master_seed, 0, trials)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SimConfig;

    #[test]
    fn worker_count_does_not_change_results() {
        let cfg = SimConfig::from_preset("table1_gaussian").unwrap().trial_config().unwrap();
        let a = Runner::new(1).unwrap().run_point(&cfg, 6, 12.0, 9, 6).unwrap();
        let b = Runner::new(3).unwrap().run_point(&cfg, 6, 12.0, 9, 6).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials, 6);
        assert_eq!(a.users, 36);
    }

    #[test]
    fn batches_compose() {
        let cfg = SimConfig::from_preset("table1_fading").unwrap().trial_config().unwrap();
        let r = Runner::new(2).unwrap();
        let whole = r.run_point(&cfg, 3, 15.0, 4, 6).unwrap();
        let parts = r.run_batch(&cfg, 3, 15.0, 4, 0, 2).unwrap().merge(r.run_batch(&cfg, 3, 15.0, 4, 2, 4).unwrap());
        assert_eq!(whole, parts);
    }
}
