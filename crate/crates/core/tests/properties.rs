//! Property tests for invariants that must hold for every input.

use std::sync::OnceLock;

use proptest::prelude::*;
use umac_core::codec::{ChannelCode, Crc, DecodeResult};
use umac_core::frame::{ebn0_to_sigma2, sigma2_to_ebn0};
use umac_core::modulation::{qpsk_bits_from_symbols, qpsk_map};
use umac_core::preamble::{hash_message, omp_detect};
use umac_core::presets::{all_presets, preset, PRESET_NAMES};
use umac_core::rng::{complex_normal, rng_from_seed};
use umac_core::trial::{run_trial_sigma2, TrialConfig};
use umac_core::txproto::{Scheme, UNIT_POWER};
use umac_core::Complex;

fn schemes() -> &'static Vec<Scheme> {
    static S: OnceLock<Vec<Scheme>> = OnceLock::new();
    S.get_or_init(|| all_presets().into_iter().map(|p| Scheme::new(p.protocol).unwrap()).collect())
}

fn ldpc() -> &'static ChannelCode {
    static C: OnceLock<ChannelCode> = OnceLock::new();
    C.get_or_init(|| ChannelCode::default_ldpc().unwrap())
}

fn polar() -> &'static ChannelCode {
    static C: OnceLock<ChannelCode> = OnceLock::new();
    C.get_or_init(|| ChannelCode::default_polar(100, 500).unwrap())
}

fn message() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..2u8, 100)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qpsk_symbols_carry_p_and_invert(bits in prop::collection::vec(0..2u8, 0..64).prop_map(|mut v| { v.truncate(v.len() / 2 * 2); v }), p in 0.01f64..100.0) {
        let s = qpsk_map(&bits, p).unwrap();
        for x in s.iter() {
            prop_assert!((x.norm_sqr() - p).abs() < 1e-9 * p);
        }
        prop_assert_eq!(qpsk_bits_from_symbols(&s), bits);
    }

    #[test]
    fn sigma2_round_trip(ebn0 in -10.0f64..40.0, n in 100usize..30_000, k in 1usize..200) {
        let s2 = ebn0_to_sigma2(ebn0, n, k, UNIT_POWER).unwrap();
        prop_assert!(s2 > 0.0);
        prop_assert!((sigma2_to_ebn0(s2, n, k, UNIT_POWER).unwrap() - ebn0).abs() < 1e-9);
    }

    /// No frame ever exceeds the energy budget nP.
    #[test]
    fn every_frame_meets_the_power_constraint(u in message(), which in 0usize..11, seed in any::<u64>()) {
        let s = &schemes()[which];
        let tx = s.transmit(&u, &mut rng_from_seed(seed)).unwrap();
        let budget = s.frame_len() as f64 * UNIT_POWER;
        prop_assert!(tx.signal.energy() <= budget * (1.0 + 1e-9));
        prop_assert!(tx.signal.energy() >= budget * (1.0 - 1e-9));
    }

    #[test]
    fn crc_accepts_own_checksum_and_rejects_single_flips(u in message(), flip in 0usize..111) {
        let crc = Crc::nr_crc11();
        let mut w = u.clone();
        w.extend(crc.checksum(&u));
        prop_assert!(crc.check(&w));
        w[flip] ^= 1;
        prop_assert!(!crc.check(&w));
    }

    #[test]
    fn hash_is_in_range(u in message(), m in 1usize..20_000) {
        prop_assert!(hash_message(&u, m) < m);
    }

    /// Codewords decode back to their message; noisy words either fail or
    /// give a full-length message.
    #[test]
    fn codes_round_trip_and_valid_decodes_are_codewords(u in message(), seed in any::<u64>(), noise in 0.0f64..3.0) {
        for code in [ldpc(), polar()] {
            let c = code.encode(&u).unwrap();
            let clean: Vec<f64> = c.iter().map(|&b| if b == 0 { 4.0 } else { -4.0 }).collect();
            prop_assert_eq!(code.decode(&clean).unwrap(), DecodeResult::Valid(u.clone()));

            let mut rng = rng_from_seed(seed);
            let noisy: Vec<f64> = clean.iter().map(|l| l + noise * 4.0 * complex_normal(&mut rng, 2.0).re).collect();
            if let DecodeResult::Valid(m) = code.decode(&noisy).unwrap() {
                prop_assert_eq!(m.len(), 100);
            }
        }
    }

    /// OMP never increases the residual energy and never lists a column twice.
    #[test]
    fn omp_residual_is_non_increasing(seed in any::<u64>(), l in 1usize..40) {
        let s = &schemes()[PRESET_NAMES.iter().position(|&n| n == "extended_1024").unwrap()];
        let d = s.dictionary();
        let mut rng = rng_from_seed(seed);
        let y: Vec<Complex> = (0..d.n_pre()).map(|_| complex_normal(&mut rng, 1.0)).collect();
        let out = omp_detect(&[&y], d, l).unwrap();
        prop_assert!(out.residual_energy.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        let mut idx: Vec<usize> = out.indices().collect();
        idx.sort_unstable();
        idx.dedup();
        prop_assert_eq!(idx.len(), out.entries.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Without noise every decoded message was transmitted.
    #[test]
    fn noiseless_trials_never_false_alarm(seed in any::<u64>(), k_a in 1usize..6) {
        let p = preset("table4_ldpc").unwrap();
        let cfg = TrialConfig::new(std::sync::Arc::new(Scheme::new(p.protocol).unwrap()), p.fading);
        let o = run_trial_sigma2(&cfg, k_a, 0.0, seed).unwrap();
        prop_assert_eq!(o.false_alarms, 0);
        prop_assert_eq!(o.decoded, o.hits.iter().filter(|&&h| h).count());
    }
}
