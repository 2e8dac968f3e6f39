//! Quick invariant suite behind the `check` subcommand.

use std::time::Instant;

use rand::Rng;
use umac_core::bounds::preamble_overhead_db;
use umac_core::channel::{apply_mac_sparse, draw_channels};
use umac_core::presets::all_presets;
use umac_core::receiver::{sic_cancel, tin_pass, Candidate, ReceiverConfig, RxState};
use umac_core::rng::rng_from_seed;
use umac_core::trial::{run_trial, run_trial_sigma2};
use umac_core::txproto::{Scheme, UNIT_POWER};

use crate::config::SimConfig;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

/// Reference frame lengths, written as their defining sums.
fn expected_frame_len(name: &str) -> Option<(usize, &'static str)> {
    Some(match name {
        "table1_gaussian" => (278 + 64 * 250, "278+64*250 = 16278"),
        "table2_mto" => (35 * (278 + 300), "35*(278+300) = 20230"),
        "table3_ldpc" | "table3_polar" => (275 + 589 * 25, "275+589*25 = 15000"),
        "long_preamble_polar" => (1668 + 59 * 300, "1668+59*300 = 19368"),
        "table1_fading" | "table4_ldpc" | "table4_polar" | "extended_1024" | "extended_8192" | "extended_16384" => {
            (278 + 64 * 300, "278+64*300 = 19478")
        }
        _ => return None,
    })
}

/// Every preset validates and has the reference frame length.
pub fn frame_checks() -> Vec<CheckResult> {
    all_presets()
        .into_iter()
        .map(|p| {
            let name = format!("frame/{}", p.name);
            let Some((want, formula)) = expected_frame_len(p.name) else {
                return CheckResult::new(name, false, "no reference length");
            };
            if let Err(e) = p.protocol.validate() {
                return CheckResult::new(name, false, e.to_string());
            }
            let got = p.protocol.frame_len();
            CheckResult::new(name, got == want, format!("n = {got}, expected {formula}"))
        })
        .collect()
}

pub fn overhead_check() -> CheckResult {
    let v = preamble_overhead_db(278, 300);
    CheckResult::new("overhead/278_300", (v - 2.85).abs() <= 0.01, format!("{v:.4} dB"))
}

/// Every transmitted frame spends exactly `nP`.
pub fn power_checks() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for p in all_presets() {
        let scheme = Scheme::new(p.protocol.clone())?;
        let mut rng = rng_from_seed(3);
        let msg: Vec<u8> = (0..p.protocol.k).map(|_| rng.random_range(0..2u8)).collect();
        let tx = scheme.transmit(&msg, &mut rng)?;
        let budget = scheme.frame_len() as f64 * UNIT_POWER;
        let e = tx.signal.energy();
        out.push(CheckResult::new(format!("power/{}", p.name), (e - budget).abs() <= 1e-9 * budget, format!("energy {e:.6}, nP {budget}")));
    }
    Ok(out)
}

/// A lone user on a noiseless channel is always recovered.
pub fn noiseless_checks(seeds: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for p in all_presets() {
        let cfg = SimConfig::from_preset(p.name)?.trial_config()?;
        let mut misses = 0;
        for s in 0..seeds {
            misses += run_trial_sigma2(&cfg, 1, 0.0, s)?.misses();
        }
        out.push(CheckResult::new(format!("noiseless/{}", p.name), misses == 0, format!("{misses} misses over {seeds} seeds")));
    }
    Ok(out)
}

/// Decoding and cancelling a lone noiseless user leaves (numerically)
/// nothing behind, preamble included, on 1 and 2 receive antennas.
pub fn sic_residual_checks(seeds: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for p in all_presets() {
        let scheme = Scheme::new(p.protocol.clone())?;
        let rx = ReceiverConfig::new(true, p.fading == umac_core::channel::FadingModel::Gaussian);
        let mut worst = 0.0f64;
        for s in 0..seeds {
            let mut rng = rng_from_seed(s);
            let msg: Vec<u8> = (0..p.protocol.k).map(|_| rng.random_range(0..2u8)).collect();
            let tx = scheme.transmit(&msg, &mut rng)?;
            let n_rx = 1 + (s % 2) as usize;
            let ch = draw_channels(1, n_rx, p.fading, &mut rng)?;
            let obs = apply_mac_sparse(&[&tx.signal], &ch, 0.0, scheme.frame_len(), &mut rng)?;
            let before: f64 = obs.antennas.iter().map(|a| a.energy()).sum();
            let mut state = RxState::new(obs, &scheme)?;
            state.iteration = 1;
            let cand = [Candidate { bundle: tx.bundle, phi: tx.phi, preamble_coeffs: None }];
            let accepted = tin_pass(&mut state, &scheme, &rx, &cand)?;
            if accepted.len() != 1 {
                worst = f64::INFINITY;
                continue;
            }
            sic_cancel(&mut state, &scheme, &rx, &accepted[0])?;
            let after: f64 = state.residual.antennas.iter().map(|a| a.energy()).sum();
            worst = worst.max(after / before);
        }
        out.push(CheckResult::new(format!("sic_residual/{}", p.name), worst < 1e-12, format!("worst relative residual {worst:.2e}")));
    }
    Ok(out)
}

pub fn determinism_check() -> Result<CheckResult> {
    let cfg = SimConfig::from_preset("table1_fading")?.trial_config()?;
    let a = run_trial(&cfg, 5, 10.0, 77)?;
    let b = run_trial(&cfg, 5, 10.0, 77)?;
    Ok(CheckResult::new("determinism/run_trial", a == b, "same seed twice"))
}

/// The whole suite; `seeds` noiseless trials per preset.
pub fn run_checks(seeds: u64) -> Result<Vec<CheckResult>> {
    let start = Instant::now();
    let mut out = frame_checks();
    out.push(overhead_check());
    out.extend(power_checks()?);
    out.extend(noiseless_checks(seeds)?);
    out.extend(sic_residual_checks(seeds)?);
    out.push(determinism_check()?);
    log::info!("check suite finished in {:.2?}", start.elapsed());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_and_overhead_checks_pass() {
        assert!(frame_checks().iter().all(|c| c.passed));
        assert_eq!(frame_checks().len(), 11);
        assert!(overhead_check().passed);
    }

    #[test]
    fn sic_residual_checks_pass() {
        for c in sic_residual_checks(4).unwrap() {
            assert!(c.passed, "{} {}", c.name, c.detail);
        }
    }

    #[test]
    fn power_checks_pass() {
        assert!(power_checks().unwrap().iter().all(|c| c.passed));
    }
}
