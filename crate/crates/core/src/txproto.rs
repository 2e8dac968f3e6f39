//! Transmitters for two-step random access (OTO and MTO preamble-to-PO
//! mappings) and for SB-IDMA.
//!
//! Every user spends exactly `nP` energy per frame (`P = 1`): a single
//! per-sample power `P_s` is shared by pilots and data, and the preamble runs
//! `backoff` dB below it, with `P_s` chosen so that preamble plus occupied POs
//! add up to the frame budget.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::Rng;

use crate::codec::ChannelCode;
use crate::error::{invalid, Error, Result};
use crate::frame::{validate_layout, FrameLayout};
use crate::math;
use crate::modulation::qpsk_map;
use crate::preamble::{hash_message, PreambleDictionary, ZC_LENGTH};
use crate::rng::{complex_normal, mix_seed, rng_from_seed};
use crate::signal::{Complex, ComplexVec, SparseSignal};

/// Per-user transmit power `P`.
pub const UNIT_POWER: f64 = 1.0;

const PILOT_DOMAIN: u64 = 0x5049_4c4f_54; // "PILOT"
const PATTERN_DOMAIN: u64 = 0x5041_5454; // "PATT"

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Mapping {
    /// Preamble `φ` selects PO `φ` (needs `M = N`).
    Oto,
    /// Preamble `φ` selects PO `φ mod N`.
    Mto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Protocol {
    TwoStep(Mapping),
    SbIdma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum CodeSpec {
    /// The (500,100) BG2 LDPC code.
    Ldpc,
    /// CRC-11 aided polar code of length `n_c`.
    Polar { n_c: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum PreambleSpec {
    /// Length-139 Zadoff-Chu roots repeated `reps` times.
    ZadoffChu { reps: usize },
    /// Seeded i.i.d. Gaussian columns.
    Gaussian { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProtocolConfig {
    pub protocol: Protocol,
    /// Layout of one PRACH+PO block.
    pub layout: FrameLayout,
    /// Number of independent PRACH+PO blocks in the frame (MTO only).
    pub bundles: usize,
    /// Preambles per block, `M`.
    pub num_preambles: usize,
    pub preamble: PreambleSpec,
    pub code: CodeSpec,
    /// Message length in bits.
    pub k: usize,
    /// Codeword repetitions `d`.
    pub repetitions: usize,
    /// Segments per user `n_s`.
    pub segments: usize,
    /// Pilot symbols at the start of every occupied PO.
    pub pilot_len: usize,
    pub preamble_backoff_db: f64,
}

impl ProtocolConfig {
    /// Total frame length `n` over all blocks.
    pub fn frame_len(&self) -> usize {
        self.bundles * self.layout.n
    }

    pub fn code_len(&self) -> usize {
        match self.code {
            CodeSpec::Ldpc => 500,
            CodeSpec::Polar { n_c } => n_c,
        }
    }

    /// Data symbols carried by one occupied PO.
    pub fn segment_len(&self) -> usize {
        self.repetitions * self.code_len() / 2 / self.segments.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let l = &self.layout;
        if !validate_layout(l) {
            return Err(Error::InvalidConfig("inconsistent frame layout".into()));
        }
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.bundles == 0 || self.num_preambles == 0 || self.k == 0 {
            return bad("bundles, M and k must be positive");
        }
        if self.bundles > 1 && self.protocol != Protocol::TwoStep(Mapping::Mto) {
            return bad("bundled blocks are only defined for two-step MTO");
        }
        if !(self.preamble_backoff_db >= 0.0) {
            return bad("preamble back-off must be non-negative");
        }
        if self.code == CodeSpec::Ldpc && self.k != 100 {
            return bad("the shipped LDPC code has k = 100");
        }
        let n_c = self.code_len();
        if !n_c.is_multiple_of(2) {
            return bad("codeword length must be even for QPSK");
        }
        match self.preamble {
            PreambleSpec::ZadoffChu { reps } => {
                if reps == 0 || l.n_pre != ZC_LENGTH * reps {
                    return bad("Zadoff-Chu PRACH length must be 139 times the repetition count");
                }
                if self.num_preambles >= ZC_LENGTH {
                    return bad("at most 138 Zadoff-Chu roots are available");
                }
            }
            PreambleSpec::Gaussian { .. } => {}
        }
        match self.protocol {
            Protocol::TwoStep(mapping) => {
                if self.repetitions != 1 || self.segments != 1 {
                    return bad("two-step access sends one unrepeated codeword");
                }
                if mapping == Mapping::Oto && self.num_preambles != l.num_po {
                    return bad("OTO mapping needs as many preambles as POs");
                }
                if n_c / 2 + self.pilot_len != l.n_po {
                    return bad("codeword symbols plus pilots must fill the PO");
                }
            }
            Protocol::SbIdma => {
                if self.segments == 0 || self.segments > l.num_po {
                    return bad("SB-IDMA needs 1 <= n_s <= N");
                }
                if self.repetitions == 0 || !(self.repetitions * n_c / 2).is_multiple_of(self.segments) {
                    return bad("repeated codeword symbols must split evenly into segments");
                }
                if self.segment_len() + self.pilot_len != l.n_po {
                    return bad("segment plus pilots must fill the PO");
                }
            }
        }
        Ok(())
    }
}

/// Binary access pattern over the `N` POs of a block, kept as its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessPattern {
    num_po: usize,
    positions: Vec<usize>,
}

impl AccessPattern {
    pub fn new(num_po: usize, mut positions: Vec<usize>) -> Result<Self> {
        positions.sort_unstable();
        if positions.windows(2).any(|w| w[0] == w[1]) || positions.iter().any(|&p| p >= num_po) {
            return Err(invalid("access pattern positions must be distinct and below N"));
        }
        Ok(AccessPattern { num_po, positions })
    }

    /// Occupied POs in increasing order.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn weight(&self) -> usize {
        self.positions.len()
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let mut a = vec![0; self.num_po];
        for &p in &self.positions {
            a[p] = 1;
        }
        a
    }
}

/// Deterministic expansion of a hashed index into `n_s` distinct POs and one
/// pilot seed per occupied PO. Segment `j` goes to the `j`-th smallest PO.
pub fn derive_sbidma_pattern(phi: usize, n_s: usize, num_po: usize) -> Result<(AccessPattern, Vec<u64>)> {
    if n_s == 0 || n_s > num_po {
        return Err(invalid("SB-IDMA needs 1 <= n_s <= N"));
    }
    let mut rng = rng_from_seed(mix_seed(phi as u64, PATTERN_DOMAIN));
    let positions = rand::seq::index::sample(&mut rng, num_po, n_s).into_vec();
    let pattern = AccessPattern::new(num_po, positions)?;
    let seeds = (0..n_s).map(|j| pilot_seed(phi, j)).collect();
    Ok((pattern, seeds))
}

fn pilot_seed(phi: usize, slot: usize) -> u64 {
    mix_seed(mix_seed(phi as u64, PILOT_DOMAIN), slot as u64)
}

/// Everything a transmitter or receiver needs for one configuration: the
/// validated config, the built code and preamble set, and the amplitudes.
#[derive(Debug, Clone)]
pub struct Scheme {
    cfg: ProtocolConfig,
    code: ChannelCode,
    dict: Arc<PreambleDictionary>,
    sample_power: f64,
    preamble_amp: f64,
}

impl Scheme {
    pub fn new(cfg: ProtocolConfig) -> Result<Self> {
        cfg.validate()?;
        let code = match cfg.code {
            CodeSpec::Ldpc => ChannelCode::default_ldpc()?,
            CodeSpec::Polar { n_c } => ChannelCode::default_polar(cfg.k, n_c)?,
        };
        let dict = match cfg.preamble {
            PreambleSpec::ZadoffChu { reps } => PreambleDictionary::zadoff_chu(cfg.num_preambles, reps)?,
            PreambleSpec::Gaussian { seed } => {
                PreambleDictionary::gaussian(cfg.num_preambles, cfg.layout.n_pre, seed)?
            }
        };
        Self::with_parts(cfg, code, Arc::new(dict))
    }

    /// Builds a scheme around an existing code and dictionary, e.g. to share
    /// a large dictionary between configurations.
    pub fn with_parts(cfg: ProtocolConfig, code: ChannelCode, dict: Arc<PreambleDictionary>) -> Result<Self> {
        cfg.validate()?;
        if code.k() != cfg.k || code.n() != cfg.code_len() {
            return Err(Error::InvalidConfig("code dimensions do not match the config".into()));
        }
        if dict.len() != cfg.num_preambles || dict.n_pre() != cfg.layout.n_pre {
            return Err(Error::InvalidConfig("preamble set does not match the config".into()));
        }
        let g = math::db_to_linear(-cfg.preamble_backoff_db);
        let occupied = cfg.segments * cfg.layout.n_po;
        let sample_power =
            cfg.frame_len() as f64 * UNIT_POWER / (g * cfg.layout.n_pre as f64 + occupied as f64);
        Ok(Scheme { cfg, code, dict, sample_power, preamble_amp: math::sqrt(g * sample_power) })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.cfg
    }

    pub fn code(&self) -> &ChannelCode {
        &self.code
    }

    pub fn dictionary(&self) -> &PreambleDictionary {
        &self.dict
    }

    /// Per-sample power `P_s` of pilots and data.
    pub fn sample_power(&self) -> f64 {
        self.sample_power
    }

    /// Amplitude applied to the unit-power preamble columns.
    pub fn preamble_amplitude(&self) -> f64 {
        self.preamble_amp
    }

    pub fn frame_len(&self) -> usize {
        self.cfg.frame_len()
    }

    pub fn prach_range(&self, bundle: usize) -> Range<usize> {
        let r = self.cfg.layout.prach();
        let off = bundle * self.cfg.layout.n;
        r.start + off..r.end + off
    }

    pub fn po_range(&self, bundle: usize, po: usize) -> Range<usize> {
        let r = self.cfg.layout.po(po);
        let off = bundle * self.cfg.layout.n;
        r.start + off..r.end + off
    }

    /// Occupied POs and pilot seeds of preamble `phi`.
    pub fn pattern(&self, phi: usize) -> Result<(AccessPattern, Vec<u64>)> {
        if phi >= self.cfg.num_preambles {
            return Err(Error::OutOfRange { index: phi, len: self.cfg.num_preambles });
        }
        let n = self.cfg.layout.num_po;
        match self.cfg.protocol {
            Protocol::TwoStep(m) => {
                let po = match m {
                    Mapping::Oto => phi,
                    Mapping::Mto => phi % n,
                };
                Ok((AccessPattern::new(n, vec![po])?, vec![pilot_seed(phi, 0)]))
            }
            Protocol::SbIdma => derive_sbidma_pattern(phi, self.cfg.segments, n),
        }
    }

    /// Pilot field for a seed: CN(0,1) samples rescaled to energy
    /// `pilot_len · P_s`.
    pub fn pilot(&self, seed: u64) -> ComplexVec {
        let len = self.cfg.pilot_len;
        if len == 0 {
            return ComplexVec::zeros(0);
        }
        let mut rng = rng_from_seed(seed);
        let mut p: ComplexVec = (0..len).map(|_| complex_normal(&mut rng, 1.0)).collect();
        let e = p.energy();
        p.scale(math::sqrt(len as f64 * self.sample_power / e));
        p
    }

    /// Encoded, QPSK-mapped, repeated and segmented data symbols.
    pub fn data_segments(&self, message: &[u8]) -> Result<Vec<ComplexVec>> {
        let bits = self.code.encode(message)?;
        let c = qpsk_map(&bits, self.sample_power)?;
        let seg = self.cfg.segment_len();
        let v: Vec<Complex> = c.iter().copied().cycle().take(self.cfg.repetitions * c.len()).collect();
        Ok(v.chunks_exact(seg).map(|s| ComplexVec::from_vec(s.to_vec())).collect())
    }

    /// Per occupied PO: `(po index, pilot ‖ data)`.
    pub fn po_signals(&self, message: &[u8], phi: usize) -> Result<Vec<(usize, ComplexVec)>> {
        let (pattern, seeds) = self.pattern(phi)?;
        let segs = self.data_segments(message)?;
        Ok(pattern
            .positions()
            .iter()
            .zip(seeds)
            .zip(segs)
            .map(|((&po, seed), seg)| (po, self.pilot(seed).concat(&seg)))
            .collect())
    }

    /// Builds one user's frame signal for a given preamble and block.
    pub fn place(&self, message: &[u8], phi: usize, bundle: usize) -> Result<TxPlacement> {
        if bundle >= self.cfg.bundles {
            return Err(Error::OutOfRange { index: bundle, len: self.cfg.bundles });
        }
        let (pattern, pilot_seeds) = self.pattern(phi)?;
        let mut signal = SparseSignal::new();
        let mut pre = self.dict.column(phi);
        pre.scale(self.preamble_amp);
        signal.push(self.prach_range(bundle).start, pre);
        for (po, x) in self.po_signals(message, phi)? {
            signal.push(self.po_range(bundle, po).start, x);
        }
        Ok(TxPlacement { message: message.to_vec(), phi, bundle, pattern, pilot_seeds, signal })
    }

    /// Transmits with the configured protocol.
    pub fn transmit<R: Rng + ?Sized>(&self, message: &[u8], rng: &mut R) -> Result<TxPlacement> {
        match self.cfg.protocol {
            Protocol::TwoStep(_) => tx_twostep(message, self, rng),
            Protocol::SbIdma => tx_sbidma(message, self),
        }
    }
}

/// One user's transmission and its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct TxPlacement {
    pub message: Vec<u8>,
    pub phi: usize,
    pub bundle: usize,
    pub pattern: AccessPattern,
    pub pilot_seeds: Vec<u64>,
    pub signal: SparseSignal,
}

/// Two-step access: uniformly random preamble (and block, when bundled).
pub fn tx_twostep<R: Rng + ?Sized>(message: &[u8], scheme: &Scheme, rng: &mut R) -> Result<TxPlacement> {
    let cfg = scheme.config();
    if !matches!(cfg.protocol, Protocol::TwoStep(_)) {
        return Err(Error::InvalidConfig("not a two-step configuration".into()));
    }
    let bundle = if cfg.bundles > 1 { rng.random_range(0..cfg.bundles) } else { 0 };
    let phi = rng.random_range(0..cfg.num_preambles);
    scheme.place(message, phi, bundle)
}

/// SB-IDMA: the preamble is the message hash, which also fixes the pattern.
pub fn tx_sbidma(message: &[u8], scheme: &Scheme) -> Result<TxPlacement> {
    let cfg = scheme.config();
    if cfg.protocol != Protocol::SbIdma {
        return Err(Error::InvalidConfig("not an SB-IDMA configuration".into()));
    }
    scheme.place(message, hash_message(message, cfg.num_preambles), 0)
}
