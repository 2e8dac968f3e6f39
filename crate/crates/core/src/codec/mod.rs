//! Forward error correction: LDPC with belief propagation, CRC-aided polar
//! codes with adaptive SCL decoding, and repetition combining.
//!
//! Code descriptions are immutable once built and cheap to share through
//! [`ChannelCode`]; all decoder scratch memory is allocated per call.

mod alist;
mod crc;
mod ldpc;
mod polar;
mod repetition;

use alloc::sync::Arc;
use alloc::vec::Vec;

pub use alist::{parse_alist, ParityCheck};
pub use crc::Crc;
pub use ldpc::{LdpcCode, BP_ITERATIONS};
pub use polar::{parse_reliability, PolarCode, PolarDecodeStats, MAX_LIST};
pub use repetition::combine_repetitions;

use crate::error::{check_len, Result};

/// The BG2 (500,100) code shipped with the crate, in alist form.
pub const NR_BG2_Z10_ALIST: &str = include_str!("../../data/nr_bg2_z10.alist");
/// 1024-entry polar reliability order, least reliable first.
pub const NR_POLAR_RELIABILITY: &str = include_str!("../../data/nr_polar_reliability_1024.txt");

/// Outcome of one decoding attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeResult {
    /// The decoder produced a word passing its own check; holds the `k`
    /// message bits.
    Valid(Vec<u8>),
    /// Parity (LDPC) or CRC (polar) check failed.
    DetectedFailure,
}

impl DecodeResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, DecodeResult::Valid(_))
    }

    pub fn message(&self) -> Option<&[u8]> {
        match self {
            DecodeResult::Valid(m) => Some(m),
            DecodeResult::DetectedFailure => None,
        }
    }
}

/// A channel code shared across users and trials.
#[derive(Debug, Clone)]
pub enum ChannelCode {
    Ldpc(Arc<LdpcCode>),
    Polar(Arc<PolarCode>),
}

impl ChannelCode {
    /// The (500,100) BG2 LDPC code.
    pub fn default_ldpc() -> Result<Self> {
        Ok(ChannelCode::Ldpc(Arc::new(LdpcCode::from_alist(NR_BG2_Z10_ALIST)?)))
    }

    /// CRC-11 aided polar code of the given length built from the shipped
    /// reliability order.
    pub fn default_polar(k: usize, n_c: usize) -> Result<Self> {
        let order = parse_reliability(NR_POLAR_RELIABILITY)?;
        Ok(ChannelCode::Polar(Arc::new(PolarCode::new(k, n_c, &order, Crc::nr_crc11(), MAX_LIST)?)))
    }

    /// Message length.
    pub fn k(&self) -> usize {
        match self {
            ChannelCode::Ldpc(c) => c.k(),
            ChannelCode::Polar(c) => c.k(),
        }
    }

    /// Transmitted block length.
    pub fn n(&self) -> usize {
        match self {
            ChannelCode::Ldpc(c) => c.n(),
            ChannelCode::Polar(c) => c.n(),
        }
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        match self {
            ChannelCode::Ldpc(c) => c.encode(message),
            ChannelCode::Polar(c) => c.encode(message),
        }
    }

    pub fn decode(&self, llrs: &[f64]) -> Result<DecodeResult> {
        check_len(self.n(), llrs.len())?;
        Ok(match self {
            ChannelCode::Ldpc(c) => c.decode(llrs, BP_ITERATIONS)?.0,
            ChannelCode::Polar(c) => c.decode(llrs)?.0,
        })
    }
}
