//! One seeded Monte Carlo trial and PUPE bookkeeping.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;

use crate::channel::{apply_mac_sparse, draw_channels, FadingModel};
use crate::error::{invalid, Error, Result};
use crate::frame::ebn0_to_sigma2;
use crate::math;
use crate::receiver::{tin_sic, OracleUser, ReceiverConfig, RxDiagnostics};
use crate::rng::rng_from_seed;
use crate::txproto::{Scheme, UNIT_POWER};

/// Everything fixed across the trials of one sweep.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub scheme: Arc<Scheme>,
    pub fading: FadingModel,
    pub n_rx: usize,
    pub receiver: ReceiverConfig,
    /// Hand the receiver the true preamble list instead of running OMP.
    pub ideal_detection: bool,
}

impl TrialConfig {
    pub fn new(scheme: Arc<Scheme>, fading: FadingModel) -> Self {
        let receiver = ReceiverConfig::new(true, fading == FadingModel::Gaussian);
        TrialConfig { scheme, fading, n_rx: 1, receiver, ideal_detection: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub k_a: usize,
    pub messages: Vec<Vec<u8>>,
    /// `hits[i]` iff message `i` is in the decoded list.
    pub hits: Vec<bool>,
    pub decoded: usize,
    /// Decoded messages that nobody sent.
    pub false_alarms: usize,
    /// Users whose preamble was missing from the first detection list of
    /// their block.
    pub misdetections: usize,
    pub diagnostics: RxDiagnostics,
}

impl TrialOutcome {
    pub fn misses(&self) -> usize {
        self.hits.iter().filter(|&&h| !h).count()
    }
}

/// Samples `k_a` distinct uniform messages, transmits, passes them through
/// the MAC at the given `Eb/N0` and runs the receiver. Deterministic in
/// `(cfg, k_a, ebn0_db, seed)`; everything except the noise scale is drawn
/// before the noise, so different SNRs reuse the same users, channels and
/// noise shape.
pub fn run_trial(cfg: &TrialConfig, k_a: usize, ebn0_db: f64, seed: u64) -> Result<TrialOutcome> {
    let pc = cfg.scheme.config();
    let sigma2 = ebn0_to_sigma2(ebn0_db, cfg.scheme.frame_len(), pc.k, UNIT_POWER)?;
    run_trial_sigma2(cfg, k_a, sigma2, seed)
}

/// [`run_trial`] with the noise variance given directly; `sigma2 = 0` gives a
/// noiseless trial.
pub fn run_trial_sigma2(cfg: &TrialConfig, k_a: usize, sigma2: f64, seed: u64) -> Result<TrialOutcome> {
    let scheme = &*cfg.scheme;
    let pc = scheme.config();
    if pc.k < 64 && (k_a as u128) > (1u128 << pc.k) {
        return Err(invalid("more users than distinct messages"));
    }
    let n = scheme.frame_len();
    let mut rng = rng_from_seed(seed);

    let mut seen = BTreeSet::new();
    let mut messages = Vec::with_capacity(k_a);
    while messages.len() < k_a {
        let m: Vec<u8> = (0..pc.k).map(|_| rng.random_range(0..2u8)).collect();
        if seen.insert(m.clone()) {
            messages.push(m);
        }
    }
    let channels = draw_channels(k_a, cfg.n_rx, cfg.fading, &mut rng)?;
    let placements = messages.iter().map(|m| scheme.transmit(m, &mut rng)).collect::<Result<Vec<_>>>()?;
    let budget = n as f64 * UNIT_POWER * (1.0 + 1e-9);
    if let Some(p) = placements.iter().find(|p| p.signal.energy() > budget) {
        return Err(Error::PowerConstraint { energy: p.signal.energy(), budget: n as f64 * UNIT_POWER });
    }
    let signals: Vec<_> = placements.iter().map(|p| &p.signal).collect();
    let obs = apply_mac_sparse(&signals, &channels, sigma2, n, &mut rng)?;

    let oracle: Option<Vec<OracleUser>> = cfg.ideal_detection.then(|| {
        placements
            .iter()
            .enumerate()
            .map(|(i, p)| OracleUser {
                bundle: p.bundle,
                phi: p.phi,
                coeffs: channels.user(i).iter().map(|h| h * scheme.preamble_amplitude()).collect(),
                message: p.message.clone(),
            })
            .collect()
    });
    let out = tin_sic(obs, scheme, &cfg.receiver, k_a, oracle.as_deref())?;

    let decoded: BTreeSet<&[u8]> = out.decoded.iter().map(|d| d.message.as_slice()).collect();
    let hits: Vec<bool> = messages.iter().map(|m| decoded.contains(m.as_slice())).collect();
    let sent: BTreeSet<&[u8]> = messages.iter().map(|m| m.as_slice()).collect();
    let false_alarms = decoded.iter().filter(|m| !sent.contains(*m)).count();
    let first = &out.diagnostics.first_detections;
    let misdetections = placements
        .iter()
        .filter(|p| first.get(p.bundle).is_none_or(|l| !l.contains(&p.phi)))
        .count();
    Ok(TrialOutcome {
        k_a,
        messages,
        hits,
        decoded: out.decoded.len(),
        false_alarms,
        misdetections,
        diagnostics: out.diagnostics,
    })
}

/// Aggregated per-user error counts with a normal-approximation 95%
/// half-width.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PupeEstimate {
    pub misses: u64,
    pub users: u64,
    pub trials: u64,
}

impl PupeEstimate {
    pub fn add(&mut self, o: &TrialOutcome) {
        self.misses += o.misses() as u64;
        self.users += o.k_a as u64;
        self.trials += 1;
    }

    pub fn merge(&mut self, other: &PupeEstimate) {
        self.misses += other.misses;
        self.users += other.users;
        self.trials += other.trials;
    }

    pub fn pupe(&self) -> f64 {
        if self.users == 0 {
            return f64::NAN;
        }
        self.misses as f64 / self.users as f64
    }

    /// Standard error of the PUPE estimate.
    pub fn std_err(&self) -> f64 {
        if self.users == 0 {
            return f64::NAN;
        }
        let p = self.pupe();
        math::sqrt(p * (1.0 - p) / self.users as f64)
    }

    pub fn ci95(&self) -> f64 {
        1.96 * self.std_err()
    }
}

/// `Σ misses / Σ users`.
pub fn estimate_pupe(outcomes: &[TrialOutcome]) -> Result<f64> {
    let mut e = PupeEstimate::default();
    for o in outcomes {
        e.add(o);
    }
    if e.users == 0 {
        return Err(invalid("PUPE needs at least one active user"));
    }
    Ok(e.pupe())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    fn cfg(name: &str) -> TrialConfig {
        let p = preset(name).unwrap();
        let mut c = TrialConfig::new(Arc::new(Scheme::new(p.protocol).unwrap()), p.fading);
        c.ideal_detection = p.ideal_detection;
        c
    }

    fn outcome(k_a: usize, misses: usize) -> TrialOutcome {
        TrialOutcome {
            k_a,
            messages: Vec::new(),
            hits: (0..k_a).map(|i| i >= misses).collect(),
            decoded: k_a - misses,
            false_alarms: 0,
            misdetections: 0,
            diagnostics: RxDiagnostics::default(),
        }
    }

    #[test]
    fn same_seed_same_outcome() {
        let c = cfg("table1_fading");
        let a = run_trial(&c, 8, 10.0, 42).unwrap();
        let b = run_trial(&c, 8, 10.0, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.messages.len(), 8);
        let distinct: BTreeSet<_> = a.messages.iter().collect();
        assert_eq!(distinct.len(), 8);
        assert_ne!(a.messages, run_trial(&c, 8, 10.0, 43).unwrap().messages);
    }

    #[test]
    fn users_do_not_depend_on_snr() {
        let c = cfg("table4_ldpc");
        assert_eq!(run_trial(&c, 3, 5.0, 7).unwrap().messages, run_trial(&c, 3, 15.0, 7).unwrap().messages);
    }

    #[test]
    fn empty_trial() {
        let o = run_trial(&cfg("table1_gaussian"), 0, 10.0, 1).unwrap();
        assert_eq!((o.k_a, o.misses(), o.hits.len()), (0, 0, 0));
        assert!(estimate_pupe(&[o]).is_err());
    }

    #[test]
    fn pupe_arithmetic() {
        let mut v: Vec<_> = (0..10).map(|_| outcome(10, 0)).collect();
        assert_eq!(estimate_pupe(&v).unwrap(), 0.0);
        v[3] = outcome(10, 1);
        assert!((estimate_pupe(&v).unwrap() - 0.01).abs() < 1e-15);
        assert!(estimate_pupe(&[]).is_err());
    }

    #[test]
    fn pupe_binomial_check() {
        let mut rng = rng_from_seed(5);
        let v: Vec<_> = (0..1000)
            .map(|_| {
                let misses = (0..10).filter(|_| rng.random_bool(0.05)).count();
                outcome(10, misses)
            })
            .collect();
        assert!((estimate_pupe(&v).unwrap() - 0.05).abs() < 0.007);
    }

    #[test]
    fn single_user_high_snr_sbidma() {
        let c = cfg("table3_ldpc");
        let hits = (0..100).filter(|&s| run_trial(&c, 1, 30.0, s).unwrap().hits[0]).count();
        assert!(hits >= 99, "{hits}");
    }
}
