//! Named reference configurations.
//!
//! | name | protocol | n_pre | N | n_po | M | code | d | n_s | pilots | channel |
//! |---|---|---|---|---|---|---|---|---|---|---|
//! | `table1_gaussian` | 2-step OTO | 278 | 64 | 250 | 64 ZC | LDPC 500 | 1 | 1 | 0 | Gaussian |
//! | `table1_fading` | 2-step OTO | 278 | 64 | 300 | 64 ZC | LDPC 500 | 1 | 1 | 50 | fading |
//! | `table2_mto` | 2-step MTO, 35 blocks | 278 | 1 | 300 | 64 ZC | LDPC 500 | 1 | 1 | 50 | fading |
//! | `table3_ldpc` | SB-IDMA | 275 | 589 | 25 | 2048 G | LDPC 500 | 8 | 80 | 0 | Gaussian |
//! | `table3_polar` | SB-IDMA | 275 | 589 | 25 | 2048 G | polar 1000 | 4 | 80 | 0 | Gaussian |
//! | `table4_ldpc` | SB-IDMA | 278 | 64 | 300 | 1024 G | LDPC 500 | 3 | 3 | 50 | fading |
//! | `table4_polar` | SB-IDMA | 278 | 64 | 300 | 1024 G | polar 500 | 3 | 3 | 50 | fading |
//! | `long_preamble_polar` | SB-IDMA, 10 dB preamble back-off | 1668 | 59 | 300 | 4096 G | polar 500 | 3 | 3 | 50 | fading |
//! | `extended_{1024,8192,16384}` | 2-step MTO | 278 | 64 | 300 | 1024/8192/16384 G | LDPC 500 | 1 | 1 | 50 | fading |
//!
//! "ZC" is a Zadoff-Chu set (139 samples repeated twice), "G" a Gaussian set.
//! The two largest extended sets are meant to run with ideal preamble
//! detection.

use alloc::vec::Vec;

use crate::channel::FadingModel;
use crate::frame::FrameLayout;
use crate::txproto::{CodeSpec, Mapping, PreambleSpec, Protocol, ProtocolConfig};

/// Seed of the Gaussian preamble sets.
pub const GAUSSIAN_PREAMBLE_SEED: u64 = 0x7072_6561_6d62;

pub const PRESET_NAMES: [&str; 11] = [
    "table1_gaussian",
    "table1_fading",
    "table2_mto",
    "table3_ldpc",
    "table3_polar",
    "table4_ldpc",
    "table4_polar",
    "long_preamble_polar",
    "extended_1024",
    "extended_8192",
    "extended_16384",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub protocol: ProtocolConfig,
    pub fading: FadingModel,
    /// Whether the receiver should be handed the true preamble list.
    pub ideal_detection: bool,
}

fn layout(n_pre: usize, num_po: usize, n_po: usize) -> FrameLayout {
    FrameLayout { n_pre, num_po, n_po, n: n_pre + num_po * n_po }
}

fn two_step(mapping: Mapping, l: FrameLayout, m: usize, pre: PreambleSpec, pilot_len: usize) -> ProtocolConfig {
    ProtocolConfig {
        protocol: Protocol::TwoStep(mapping),
        layout: l,
        bundles: 1,
        num_preambles: m,
        preamble: pre,
        code: CodeSpec::Ldpc,
        k: 100,
        repetitions: 1,
        segments: 1,
        pilot_len,
        preamble_backoff_db: 0.0,
    }
}

fn sbidma(l: FrameLayout, m: usize, code: CodeSpec, d: usize, n_s: usize, pilot_len: usize) -> ProtocolConfig {
    ProtocolConfig {
        protocol: Protocol::SbIdma,
        layout: l,
        bundles: 1,
        num_preambles: m,
        preamble: PreambleSpec::Gaussian { seed: GAUSSIAN_PREAMBLE_SEED },
        code,
        k: 100,
        repetitions: d,
        segments: n_s,
        pilot_len,
        preamble_backoff_db: 0.0,
    }
}

pub fn preset(name: &str) -> Option<Preset> {
    use FadingModel::{Gaussian, RayleighBlock};
    let zc = PreambleSpec::ZadoffChu { reps: 2 };
    let gauss = PreambleSpec::Gaussian { seed: GAUSSIAN_PREAMBLE_SEED };
    let (name, protocol, fading, ideal) = match name {
        "table1_gaussian" => ("table1_gaussian", two_step(Mapping::Oto, layout(278, 64, 250), 64, zc, 0), Gaussian, false),
        "table1_fading" => ("table1_fading", two_step(Mapping::Oto, layout(278, 64, 300), 64, zc, 50), RayleighBlock, false),
        "table2_mto" => {
            let mut c = two_step(Mapping::Mto, layout(278, 1, 300), 64, zc, 50);
            c.bundles = 35;
            ("table2_mto", c, RayleighBlock, false)
        }
        "table3_ldpc" => ("table3_ldpc", sbidma(layout(275, 589, 25), 2048, CodeSpec::Ldpc, 8, 80, 0), Gaussian, false),
        "table3_polar" => {
            ("table3_polar", sbidma(layout(275, 589, 25), 2048, CodeSpec::Polar { n_c: 1000 }, 4, 80, 0), Gaussian, false)
        }
        "table4_ldpc" => ("table4_ldpc", sbidma(layout(278, 64, 300), 1024, CodeSpec::Ldpc, 3, 3, 50), RayleighBlock, false),
        "table4_polar" => {
            ("table4_polar", sbidma(layout(278, 64, 300), 1024, CodeSpec::Polar { n_c: 500 }, 3, 3, 50), RayleighBlock, false)
        }
        "long_preamble_polar" => {
            let mut c = sbidma(layout(1668, 59, 300), 4096, CodeSpec::Polar { n_c: 500 }, 3, 3, 50);
            c.preamble_backoff_db = 10.0;
            ("long_preamble_polar", c, RayleighBlock, false)
        }
        "extended_1024" => ("extended_1024", two_step(Mapping::Mto, layout(278, 64, 300), 1024, gauss, 50), RayleighBlock, false),
        "extended_8192" => ("extended_8192", two_step(Mapping::Mto, layout(278, 64, 300), 8192, gauss, 50), RayleighBlock, true),
        "extended_16384" => {
            ("extended_16384", two_step(Mapping::Mto, layout(278, 64, 300), 16384, gauss, 50), RayleighBlock, true)
        }
        _ => return None,
    };
    Some(Preset { name, protocol, fading, ideal_detection: ideal })
}

pub fn all_presets() -> Vec<Preset> {
    PRESET_NAMES.iter().filter_map(|n| preset(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates_with_expected_frame_length() {
        let want = [16278, 19478, 20230, 15000, 15000, 19478, 19478, 19368, 19478, 19478, 19478];
        for (p, n) in all_presets().iter().zip(want) {
            p.protocol.validate().unwrap();
            assert_eq!(p.protocol.frame_len(), n, "{}", p.name);
        }
        assert_eq!(all_presets().len(), PRESET_NAMES.len());
        assert!(preset("nope").is_none());
    }
}
