//! TIN and TIN-SIC receivers.
//!
//! Each pass detects preambles on the PRACH residual (OMP, or a genie list),
//! then, for every detected index, estimates channel and interference power
//! per PO, sums the LLRs of all repetitions and antennas, decodes and
//! validates. Accepted packets are rebuilt and subtracted (data-aided channel
//! re-estimation per PO and antenna) before the next pass. The preamble is
//! removed with either the data-aided gain or the OMP coefficient; the latter
//! is biased by undetected users when the load is high.
//!
//! Decoding is a deterministic function of the residual in the candidate's
//! POs, so a candidate that failed is only retried once one of its POs has
//! been touched by a cancellation. Preambles that already yielded a packet
//! stay on the candidate list, which lets SIC separate users that picked the
//! same preamble.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::channel::RxObservation;
use crate::codec::DecodeResult;
use crate::error::{check_len, invalid, Result};
use crate::math;
use crate::modulation::llr_pair;
use crate::preamble::{default_list_size, hash_message, omp_detect, Detection};
use crate::signal::{energy, inner, Complex};
use crate::txproto::{Protocol, Scheme};

/// Default cap on TIN-SIC passes.
pub const MAX_SIC_ITERATIONS: usize = 20;

/// Least-squares scalar channel `⟨y, x⟩ / ‖x‖²`.
pub fn estimate_channel(y: &[Complex], x: &[Complex]) -> Result<Complex> {
    check_len(x.len(), y.len())?;
    let e = energy(x);
    if !(e > 0.0) {
        return Err(invalid("pilot has zero energy"));
    }
    Ok(inner(y, x) / e)
}

/// Interference-plus-noise power `‖y‖² / len`, useful signal included.
pub fn estimate_ni(y: &[Complex]) -> f64 {
    if y.is_empty() {
        return 0.0;
    }
    energy(y) / y.len() as f64
}

/// SB-IDMA accepts a decoded word only if it hashes back to the preamble it
/// was decoded under; two-step access trusts the code's own check.
pub fn validate(candidate: &DecodeResult, phi: usize, scheme: &Scheme) -> bool {
    let Some(msg) = candidate.message() else { return false };
    match scheme.config().protocol {
        Protocol::SbIdma => hash_message(msg, scheme.config().num_preambles) == phi,
        Protocol::TwoStep(_) => true,
    }
}

/// Source of the coefficient used to subtract a decoded user's preamble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum PreambleCancellation {
    /// Preamble amplitude times the data-aided channel estimate, averaged
    /// over the user's POs (exactly 1 with `known_unit_gain`).
    #[default]
    DataAided,
    /// The least-squares coefficient of the OMP pass that listed the
    /// preamble. Under collisions it is the joint coefficient of every user
    /// sharing the index.
    Omp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReceiverConfig {
    /// Cancel accepted packets and iterate; `false` gives plain TIN.
    pub sic: bool,
    pub max_iterations: usize,
    /// OMP list size; `None` uses `ceil(1.5·K_a)` spread over the blocks.
    pub list_size: Option<usize>,
    /// Use `ĥ = 1` instead of pilot-based estimates (Gaussian MAC).
    pub known_unit_gain: bool,
    pub preamble_cancellation: PreambleCancellation,
}

impl ReceiverConfig {
    pub fn new(sic: bool, known_unit_gain: bool) -> Self {
        ReceiverConfig {
            sic,
            max_iterations: MAX_SIC_ITERATIONS,
            list_size: None,
            known_unit_gain,
            preamble_cancellation: PreambleCancellation::default(),
        }
    }
}

/// Ground truth handed to the receiver in ideal-detection mode.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleUser {
    pub bundle: usize,
    pub phi: usize,
    /// True preamble coefficient per antenna (gain times preamble amplitude).
    pub coeffs: Vec<Complex>,
    pub message: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<u8>,
    pub phi: usize,
    pub bundle: usize,
    /// Pass (1-based) in which the packet was accepted.
    pub iteration: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RxDiagnostics {
    pub iterations: usize,
    /// The last allowed pass still accepted packets.
    pub cap_hit: bool,
    pub decode_attempts: usize,
    pub cached_skips: usize,
    pub code_failures: usize,
    pub hash_rejections: usize,
    pub duplicates: usize,
    pub cancellations: usize,
    pub omp_dropped: usize,
    /// Preamble indices listed by the first detection pass, per block.
    pub first_detections: Vec<Vec<usize>>,
}

/// Mutable receiver state of one frame.
#[derive(Debug, Clone)]
pub struct RxState {
    pub residual: RxObservation,
    pub decoded: Vec<Decoded>,
    pub iteration: usize,
    pub diagnostics: RxDiagnostics,
    po_version: Vec<u32>,
    failed: BTreeMap<(usize, usize), Vec<u32>>,
}

impl RxState {
    pub fn new(observation: RxObservation, scheme: &Scheme) -> Result<Self> {
        check_len(scheme.frame_len(), observation.len())?;
        let cfg = scheme.config();
        Ok(RxState {
            residual: observation,
            decoded: Vec::new(),
            iteration: 0,
            diagnostics: RxDiagnostics::default(),
            po_version: vec![0; cfg.bundles * cfg.layout.num_po],
            failed: BTreeMap::new(),
        })
    }

    fn versions(&self, scheme: &Scheme, bundle: usize, pos: &[usize]) -> Vec<u32> {
        let n = scheme.config().layout.num_po;
        pos.iter().map(|&p| self.po_version[bundle * n + p]).collect()
    }
}

/// A preamble hypothesis for one block, with the coefficient used to cancel
/// the preamble after acceptance.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub bundle: usize,
    pub phi: usize,
    pub preamble_coeffs: Option<Vec<Complex>>,
}

/// A packet accepted in a pass and not yet cancelled.
#[derive(Debug, Clone, PartialEq)]
pub struct Accepted {
    pub decoded: Decoded,
    pub preamble_coeffs: Option<Vec<Complex>>,
}

/// Summed codeword LLRs for preamble `phi` in `bundle`, computed on the
/// current residual.
pub fn candidate_llrs(state: &RxState, scheme: &Scheme, rx: &ReceiverConfig, bundle: usize, phi: usize) -> Result<Vec<f64>> {
    let cfg = scheme.config();
    let (pattern, seeds) = scheme.pattern(phi)?;
    let n_c = cfg.code_len();
    let half = n_c / 2;
    let seg = cfg.segment_len();
    let pl = cfg.pilot_len;
    let amp = 2.0 * math::sqrt(2.0 * scheme.sample_power());
    let mut llr = vec![0.0; n_c];
    for (j, (&po, seed)) in pattern.positions().iter().zip(seeds).enumerate() {
        let range = scheme.po_range(bundle, po);
        let pilot = if rx.known_unit_gain || pl == 0 { None } else { Some(scheme.pilot(seed)) };
        for ant in &state.residual.antennas {
            let y = &ant[range.clone()];
            let ni = estimate_ni(y);
            if !(ni > 0.0) {
                continue;
            }
            let h = match &pilot {
                Some(p) => estimate_channel(&y[..pl], p)?,
                None => Complex::new(1.0, 0.0),
            };
            let g = amp / ni;
            for (t, &sample) in y[pl..].iter().enumerate() {
                let cs = (j * seg + t) % half;
                let (l0, l1) = llr_pair(sample, h, g);
                llr[2 * cs] += l0;
                llr[2 * cs + 1] += l1;
            }
        }
    }
    Ok(llr)
}

/// Decodes every candidate on the frozen residual. Returns newly accepted
/// packets; messages already decoded, or decoded twice in this pass, are
/// dropped.
pub fn tin_pass(state: &mut RxState, scheme: &Scheme, rx: &ReceiverConfig, candidates: &[Candidate]) -> Result<Vec<Accepted>> {
    let mut known: BTreeSet<Vec<u8>> = state.decoded.iter().map(|d| d.message.clone()).collect();
    let mut out = Vec::new();
    for c in candidates {
        let (pattern, _) = scheme.pattern(c.phi)?;
        let versions = state.versions(scheme, c.bundle, pattern.positions());
        if state.failed.get(&(c.bundle, c.phi)) == Some(&versions) {
            state.diagnostics.cached_skips += 1;
            continue;
        }
        state.diagnostics.decode_attempts += 1;
        let llr = candidate_llrs(state, scheme, rx, c.bundle, c.phi)?;
        // No observation at all (e.g. POs cancelled to exactly zero): the
        // zero codeword would trivially pass the parity check.
        let result = if llr.iter().all(|&v| v == 0.0) {
            DecodeResult::DetectedFailure
        } else {
            scheme.code().decode(&llr)?
        };
        let ok = match &result {
            DecodeResult::DetectedFailure => {
                state.diagnostics.code_failures += 1;
                false
            }
            r if !validate(r, c.phi, scheme) => {
                state.diagnostics.hash_rejections += 1;
                false
            }
            DecodeResult::Valid(m) if known.contains(m) => {
                state.diagnostics.duplicates += 1;
                false
            }
            DecodeResult::Valid(_) => true,
        };
        if !ok {
            state.failed.insert((c.bundle, c.phi), versions);
            continue;
        }
        let DecodeResult::Valid(message) = result else { unreachable!() };
        state.failed.remove(&(c.bundle, c.phi));
        known.insert(message.clone());
        out.push(Accepted {
            decoded: Decoded { message, phi: c.phi, bundle: c.bundle, iteration: state.iteration },
            preamble_coeffs: c.preamble_coeffs.clone(),
        });
    }
    Ok(out)
}

/// Rebuilds an accepted packet and subtracts it from the residual.
pub fn sic_cancel(state: &mut RxState, scheme: &Scheme, rx: &ReceiverConfig, accepted: &Accepted) -> Result<()> {
    let d = &accepted.decoded;
    let n = scheme.config().layout.num_po;
    let mut h_sum = vec![Complex::new(0.0, 0.0); state.residual.n_rx()];
    let mut pos = 0;
    for (po, x) in scheme.po_signals(&d.message, d.phi)? {
        let range = scheme.po_range(d.bundle, po);
        for (ant, hs) in state.residual.antennas.iter_mut().zip(h_sum.iter_mut()) {
            let y = &mut ant[range.clone()];
            let h = if rx.known_unit_gain { Complex::new(1.0, 0.0) } else { estimate_channel(y, &x)? };
            crate::signal::axpy(-h, &x, y);
            *hs += h;
        }
        state.po_version[d.bundle * n + po] += 1;
        pos += 1;
    }
    let coeffs = match rx.preamble_cancellation {
        PreambleCancellation::DataAided => {
            let a = scheme.preamble_amplitude() / pos.max(1) as f64;
            Some(h_sum.iter().map(|h| h * a).collect())
        }
        PreambleCancellation::Omp => accepted.preamble_coeffs.clone(),
    };
    if let Some(coeffs) = coeffs {
        let prach = scheme.prach_range(d.bundle);
        for (ant, c) in state.residual.antennas.iter_mut().zip(&coeffs) {
            scheme.dictionary().add_column(d.phi, -*c, &mut ant[prach.clone()]);
        }
    }
    state.diagnostics.cancellations += 1;
    Ok(())
}

fn list_size(scheme: &Scheme, rx: &ReceiverConfig, k_a: usize) -> usize {
    let cfg = scheme.config();
    let m = cfg.num_preambles;
    if let Some(l) = rx.list_size {
        return l.clamp(1, m);
    }
    if cfg.bundles == 1 {
        default_list_size(k_a, m)
    } else {
        (3 * k_a).div_ceil(2 * cfg.bundles).clamp(1, m)
    }
}

fn detect(state: &mut RxState, scheme: &Scheme, l: usize, oracle: Option<&[OracleUser]>) -> Result<Vec<Candidate>> {
    let bundles = scheme.config().bundles;
    let mut out = Vec::new();
    let mut first = Vec::with_capacity(bundles);
    if let Some(users) = oracle {
        let known: BTreeSet<&[u8]> = state.decoded.iter().map(|d| d.message.as_slice()).collect();
        let mut grouped: BTreeMap<(usize, usize), Vec<Complex>> = BTreeMap::new();
        for u in users.iter().filter(|u| !known.contains(u.message.as_slice())) {
            let e = grouped.entry((u.bundle, u.phi)).or_insert_with(|| vec![Complex::new(0.0, 0.0); u.coeffs.len()]);
            for (a, c) in e.iter_mut().zip(&u.coeffs) {
                *a += c;
            }
        }
        for b in 0..bundles {
            first.push(grouped.range((b, 0)..(b + 1, 0)).map(|(k, _)| k.1).collect());
        }
        // The genie list only steers decoding; the PRACH residual is never read.
        out.extend(grouped.into_keys().map(|(bundle, phi)| Candidate { bundle, phi, preamble_coeffs: None }));
    } else {
        for b in 0..bundles {
            let r = scheme.prach_range(b);
            let ys: Vec<&[Complex]> = state.residual.antennas.iter().map(|a| &a[r.clone()]).collect();
            let list = omp_detect(&ys, scheme.dictionary(), l)?;
            state.diagnostics.omp_dropped += list.dropped.len();
            first.push(list.indices().collect());
            out.extend(list.entries.into_iter().map(|Detection { index, coeffs }| Candidate {
                bundle: b,
                phi: index,
                preamble_coeffs: Some(coeffs),
            }));
        }
    }
    if state.iteration == 1 {
        state.diagnostics.first_detections = first;
    }
    // Preambles that already produced a packet are kept on the list: another
    // user may share them, and its POs have just been cleaned. With OMP
    // coefficients the shared preamble is already gone (joint coefficient),
    // so these carry none.
    let listed: BTreeSet<(usize, usize)> = out.iter().map(|c| (c.bundle, c.phi)).collect();
    let reused: BTreeSet<(usize, usize)> = state.decoded.iter().map(|d| (d.bundle, d.phi)).collect();
    out.extend(
        reused
            .difference(&listed)
            .map(|&(bundle, phi)| Candidate { bundle, phi, preamble_coeffs: None }),
    );
    Ok(out)
}

/// Output of [`tin_sic`].
#[derive(Debug, Clone, PartialEq)]
pub struct RxOutput {
    pub decoded: Vec<Decoded>,
    pub diagnostics: RxDiagnostics,
}

/// Runs TIN (one pass) or TIN-SIC (passes until nothing new is accepted or
/// the iteration cap is reached). `k_a` sizes the OMP list.
pub fn tin_sic(
    observation: RxObservation,
    scheme: &Scheme,
    rx: &ReceiverConfig,
    k_a: usize,
    oracle: Option<&[OracleUser]>,
) -> Result<RxOutput> {
    let mut state = RxState::new(observation, scheme)?;
    let l = list_size(scheme, rx, k_a);
    let cap = rx.max_iterations.max(1);
    for it in 1..=cap {
        state.iteration = it;
        state.diagnostics.iterations = it;
        let candidates = detect(&mut state, scheme, l, oracle)?;
        let accepted = tin_pass(&mut state, scheme, rx, &candidates)?;
        if !rx.sic || accepted.is_empty() {
            state.decoded.extend(accepted.into_iter().map(|a| a.decoded));
            break;
        }
        for a in &accepted {
            sic_cancel(&mut state, scheme, rx, a)?;
        }
        state.decoded.extend(accepted.into_iter().map(|a| a.decoded));
        if it == cap {
            state.diagnostics.cap_hit = true;
        }
    }
    Ok(RxOutput { decoded: state.decoded, diagnostics: state.diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_mac_sparse, ChannelRealization, FadingModel};
    use crate::presets::preset;
    use crate::rng::{complex_normal, rng_from_seed};
    use crate::signal::ComplexVec;
    use crate::txproto::TxPlacement;
    use rand::Rng;

    fn scheme(name: &str) -> Scheme {
        Scheme::new(preset(name).unwrap().protocol).unwrap()
    }

    fn msg(seed: u64) -> Vec<u8> {
        let mut rng = rng_from_seed(seed);
        (0..100).map(|_| rng.random_range(0..2u8)).collect()
    }

    fn observe(s: &Scheme, tx: &[&TxPlacement], gains: Vec<Complex>, sigma2: f64, seed: u64) -> RxObservation {
        let model = FadingModel::RayleighBlock;
        let ch = ChannelRealization::from_gains(model, 1, gains).unwrap();
        let sigs: Vec<_> = tx.iter().map(|t| &t.signal).collect();
        apply_mac_sparse(&sigs, &ch, sigma2, s.frame_len(), &mut rng_from_seed(seed)).unwrap()
    }

    #[test]
    fn channel_estimate_exact_and_orthogonal() {
        let mut rng = rng_from_seed(1);
        let x: ComplexVec = (0..50).map(|_| complex_normal(&mut rng, 1.0)).collect();
        let y: Vec<Complex> = x.iter().map(|v| v * Complex::new(0.0, 3.0)).collect();
        let h = estimate_channel(&y, &x).unwrap();
        assert!((h - Complex::new(0.0, 3.0)).norm() < 1e-12);
        assert!(estimate_channel(&y, &[Complex::new(0.0, 0.0); 50]).is_err());
        assert!(estimate_channel(&y[..3], &x).is_err());
        // An interferer orthogonal to the pilot adds nothing.
        let a = [Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)];
        let b = [Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)];
        let y = [a[0] * 2.0 + b[0] * 5.0, a[1] * 2.0 + b[1] * 5.0];
        assert!((estimate_channel(&y, &a).unwrap() - Complex::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn channel_estimate_is_unbiased() {
        let mut rng = rng_from_seed(2);
        let x: ComplexVec = (0..50).map(|_| complex_normal(&mut rng, 1.0)).collect();
        let h = Complex::new(0.3, -0.8);
        let trials = 10_000;
        let mut mean = Complex::new(0.0, 0.0);
        for _ in 0..trials {
            let y: Vec<Complex> = x.iter().map(|v| h * v + complex_normal(&mut rng, 1.0)).collect();
            mean += estimate_channel(&y, &x).unwrap() - h;
        }
        mean /= trials as f64;
        // Error variance σ²/‖x‖² per estimate.
        let se = (1.0 / x.energy() / trials as f64).sqrt();
        assert!(mean.norm() < 3.0 * se * 2f64.sqrt(), "{mean}");
    }

    #[test]
    fn ni_estimate() {
        assert_eq!(estimate_ni(&[Complex::new(0.0, 0.0); 10]), 0.0);
        let s = qpsk(4.0);
        assert!((estimate_ni(&s) - 4.0).abs() < 1e-12);
        let mut rng = rng_from_seed(3);
        let trials = 10_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            let y: Vec<Complex> = (0..300).map(|_| complex_normal(&mut rng, 2.5)).collect();
            acc += estimate_ni(&y);
        }
        assert!((acc / trials as f64 / 2.5 - 1.0).abs() < 0.02);
    }

    fn qpsk(p: f64) -> ComplexVec {
        crate::modulation::qpsk_map(&[0, 1, 1, 0, 1, 1, 0, 0], p).unwrap()
    }

    #[test]
    fn validation_rules() {
        let s = scheme("table4_ldpc");
        let u = msg(4);
        let phi = hash_message(&u, 1024);
        assert!(validate(&DecodeResult::Valid(u.clone()), phi, &s));
        assert!(!validate(&DecodeResult::Valid(u.clone()), (phi + 1) % 1024, &s));
        assert!(!validate(&DecodeResult::DetectedFailure, phi, &s));
        let t = scheme("table1_fading");
        assert!(validate(&DecodeResult::Valid(u), 3, &t));
    }

    #[test]
    fn noiseless_single_user_two_step_first_pass() {
        let s = scheme("table1_gaussian");
        let tx = s.place(&msg(5), 9, 0).unwrap();
        let obs = observe(&s, &[&tx], vec![Complex::new(1.0, 0.0)], 0.0, 0);
        let out = tin_sic(obs, &s, &ReceiverConfig::new(false, true), 1, None).unwrap();
        assert_eq!(out.decoded.len(), 1);
        assert_eq!((out.decoded[0].message.clone(), out.decoded[0].iteration), (msg(5), 1));
    }

    #[test]
    fn noiseless_cancellation_gaussian_and_fading() {
        let s = scheme("table1_gaussian");
        let tx = s.place(&msg(6), 9, 0).unwrap();
        let obs = observe(&s, &[&tx], vec![Complex::new(1.0, 0.0)], 0.0, 0);
        let rx = ReceiverConfig::new(true, true);
        let mut st = RxState::new(obs, &s).unwrap();
        st.iteration = 1;
        let c = [Candidate { bundle: 0, phi: 9, preamble_coeffs: Some(vec![Complex::new(s.preamble_amplitude(), 0.0)]) }];
        let acc = tin_pass(&mut st, &s, &rx, &c).unwrap();
        assert_eq!(acc.len(), 1);
        sic_cancel(&mut st, &s, &rx, &acc[0]).unwrap();
        assert!(st.residual.antennas[0].energy() < 1e-18 * s.frame_len() as f64);

        let f = scheme("table4_ldpc");
        let u = msg(7);
        let tx = crate::txproto::tx_sbidma(&u, &f).unwrap();
        let h = Complex::new(-0.4, 1.3);
        let obs = observe(&f, &[&tx], vec![h], 0.0, 0);
        let before: f64 = tx.pattern.positions().iter().map(|&p| energy(&obs.antennas[0][f.po_range(0, p)])).sum();
        let rx = ReceiverConfig::new(true, false);
        let mut st = RxState::new(obs, &f).unwrap();
        let c = [Candidate { bundle: 0, phi: tx.phi, preamble_coeffs: None }];
        let acc = tin_pass(&mut st, &f, &rx, &c).unwrap();
        sic_cancel(&mut st, &f, &rx, &acc[0]).unwrap();
        let after: f64 = tx.pattern.positions().iter().map(|&p| energy(&st.residual.antennas[0][f.po_range(0, p)])).sum();
        assert!(after / before < 1e-18, "{}", after / before);
    }

    #[test]
    fn cancellation_is_local() {
        let s = scheme("table1_fading");
        let a = s.place(&msg(8), 3, 0).unwrap();
        let b = s.place(&msg(9), 40, 0).unwrap();
        let obs = observe(&s, &[&a, &b], vec![Complex::new(0.9, 0.2), Complex::new(-0.5, 0.7)], 0.01, 1);
        let rx = ReceiverConfig::new(true, false);
        let mut st = RxState::new(obs.clone(), &s).unwrap();
        let c = [Candidate { bundle: 0, phi: 3, preamble_coeffs: None }];
        let acc = tin_pass(&mut st, &s, &rx, &c).unwrap();
        assert_eq!(acc.len(), 1);
        sic_cancel(&mut st, &s, &rx, &acc[0]).unwrap();
        let r = s.po_range(0, 40);
        assert_eq!(st.residual.antennas[0][r.clone()], obs.antennas[0][r]);
    }

    #[test]
    fn failed_candidates_are_cached_until_their_pos_change() {
        let s = scheme("table1_gaussian");
        let mut rng = rng_from_seed(10);
        let y: ComplexVec = (0..s.frame_len()).map(|_| complex_normal(&mut rng, 1.0)).collect();
        let obs = RxObservation::new(alloc::vec![y], 1.0).unwrap();
        let rx = ReceiverConfig::new(true, true);
        let mut st = RxState::new(obs, &s).unwrap();
        let c = [Candidate { bundle: 0, phi: 5, preamble_coeffs: None }];
        assert!(tin_pass(&mut st, &s, &rx, &c).unwrap().is_empty());
        assert!(tin_pass(&mut st, &s, &rx, &c).unwrap().is_empty());
        assert_eq!((st.diagnostics.decode_attempts, st.diagnostics.cached_skips), (1, 1));
        st.po_version[5] += 1;
        tin_pass(&mut st, &s, &rx, &c).unwrap();
        assert_eq!(st.diagnostics.decode_attempts, 2);
    }

    #[test]
    fn two_users_distinct_preambles_tin_and_sic() {
        let s = scheme("table1_gaussian");
        let a = s.place(&msg(11), 3, 0).unwrap();
        let b = s.place(&msg(12), 50, 0).unwrap();
        let one = Complex::new(1.0, 0.0);
        let sigma2 = crate::frame::ebn0_to_sigma2(20.0, s.frame_len(), 100, 1.0).unwrap();
        let obs = observe(&s, &[&a, &b], vec![one, one], sigma2, 2);
        for sic in [false, true] {
            let out = tin_sic(obs.clone(), &s, &ReceiverConfig::new(sic, true), 2, None).unwrap();
            let got: BTreeSet<Vec<u8>> = out.decoded.into_iter().map(|d| d.message).collect();
            assert_eq!(got, [msg(11), msg(12)].into_iter().collect());
        }
    }

    #[test]
    fn empty_frame() {
        let s = scheme("table1_gaussian");
        let mut rng = rng_from_seed(13);
        let y: ComplexVec = (0..s.frame_len()).map(|_| complex_normal(&mut rng, 1.0)).collect();
        let obs = RxObservation::new(alloc::vec![y], 1.0).unwrap();
        let out = tin_sic(obs, &s, &ReceiverConfig::new(true, true), 0, None).unwrap();
        assert!(out.decoded.is_empty());
        assert_eq!(out.diagnostics.iterations, 1);
        assert_eq!(out.diagnostics.first_detections[0].len(), 1);
    }

    #[test]
    fn sic_resolves_same_preamble_collision() {
        // Two users share preamble, pilot and PO. The strong one decodes
        // through the weak one; once it is cancelled the same preamble is
        // tried again (genie list) and the weak one decodes.
        let s = scheme("table1_fading");
        let a = s.place(&msg(14), 7, 0).unwrap();
        let b = s.place(&msg(15), 7, 0).unwrap();
        let gains = [Complex::new(3.0, 0.0), Complex::new(0.0, 1.0)];
        let obs = observe(&s, &[&a, &b], gains.to_vec(), 0.05, 3);
        let oracle: Vec<OracleUser> = [(&a, gains[0]), (&b, gains[1])]
            .iter()
            .map(|(t, h)| OracleUser { bundle: 0, phi: 7, coeffs: vec![h * s.preamble_amplitude()], message: t.message.clone() })
            .collect();
        let tin = tin_sic(obs.clone(), &s, &ReceiverConfig::new(false, false), 2, Some(&oracle)).unwrap();
        assert_eq!(tin.decoded.len(), 1);
        let out = tin_sic(obs, &s, &ReceiverConfig::new(true, false), 2, Some(&oracle)).unwrap();
        let got: Vec<_> = out.decoded.iter().map(|d| (d.message.clone(), d.iteration)).collect();
        assert_eq!(got, [(msg(14), 1), (msg(15), 2)]);
    }
}
