//! Gaussian and quasi-static Rayleigh block-fading multiple-access channels,
//! with an uncorrelated receive array.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{check_len, invalid, Error, Result};
use crate::math;
use crate::rng::complex_normal;
use crate::signal::{axpy, Complex, ComplexVec, SparseSignal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum FadingModel {
    /// Unit gains.
    Gaussian,
    /// One CN(0,1) gain per (user, antenna), constant over the frame.
    RayleighBlock,
}

/// Complex gains of every active user towards every receive antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    model: FadingModel,
    n_rx: usize,
    gains: Vec<Complex>,
}

impl ChannelRealization {
    /// Wraps explicit gains, row-major `user × antenna`.
    pub fn from_gains(model: FadingModel, n_rx: usize, gains: Vec<Complex>) -> Result<Self> {
        if n_rx == 0 || !gains.len().is_multiple_of(n_rx) {
            return Err(invalid("gain count must be a multiple of the antenna count"));
        }
        Ok(ChannelRealization { model, n_rx, gains })
    }

    pub fn model(&self) -> FadingModel {
        self.model
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn num_users(&self) -> usize {
        self.gains.len() / self.n_rx
    }

    pub fn gain(&self, user: usize, antenna: usize) -> Complex {
        self.gains[user * self.n_rx + antenna]
    }

    /// Gains of one user across antennas.
    pub fn user(&self, user: usize) -> &[Complex] {
        &self.gains[user * self.n_rx..(user + 1) * self.n_rx]
    }
}

/// Draws `k_a × n_rx` channel gains.
pub fn draw_channels<R: Rng + ?Sized>(
    k_a: usize,
    n_rx: usize,
    model: FadingModel,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if n_rx == 0 {
        return Err(invalid("at least one receive antenna is required"));
    }
    let gains = match model {
        FadingModel::Gaussian => vec![Complex::new(1.0, 0.0); k_a * n_rx],
        FadingModel::RayleighBlock => (0..k_a * n_rx).map(|_| complex_normal(rng, 1.0)).collect(),
    };
    Ok(ChannelRealization { model, n_rx, gains })
}

/// Per-antenna channel output for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RxObservation {
    pub antennas: Vec<ComplexVec>,
    pub sigma2: f64,
}

impl RxObservation {
    pub fn new(antennas: Vec<ComplexVec>, sigma2: f64) -> Result<Self> {
        let n = antennas.first().map(|a| a.len()).ok_or_else(|| invalid("no antennas"))?;
        for a in &antennas {
            check_len(n, a.len())?;
        }
        Ok(RxObservation { antennas, sigma2 })
    }

    pub fn len(&self) -> usize {
        self.antennas[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_rx(&self) -> usize {
        self.antennas.len()
    }
}

fn noise_frame<R: Rng + ?Sized>(n: usize, n_rx: usize, sigma2: f64, rng: &mut R) -> Vec<ComplexVec> {
    (0..n_rx)
        .map(|_| (0..n).map(|_| complex_normal(rng, sigma2)).collect())
        .collect()
}

/// `y_a = Σ_i H_{i,a} x_i + z_a` with `z_a` i.i.d. CN(0, σ²).
pub fn apply_mac<R: Rng + ?Sized>(
    signals: &[ComplexVec],
    channels: &ChannelRealization,
    sigma2: f64,
    n: usize,
    rng: &mut R,
) -> Result<RxObservation> {
    check_len(channels.num_users(), signals.len())?;
    for s in signals {
        check_len(n, s.len())?;
    }
    if !(sigma2 >= 0.0) {
        return Err(invalid("noise variance must be non-negative"));
    }
    let mut antennas = noise_frame(n, channels.n_rx(), sigma2, rng);
    for (i, s) in signals.iter().enumerate() {
        for (a, y) in antennas.iter_mut().enumerate() {
            axpy(channels.gain(i, a), s, y);
        }
    }
    RxObservation::new(antennas, sigma2)
}

/// Same as [`apply_mac`] for signals stored as [`SparseSignal`]s. Consumes the
/// RNG identically, so both paths give the same output.
pub fn apply_mac_sparse<R: Rng + ?Sized>(
    signals: &[&SparseSignal],
    channels: &ChannelRealization,
    sigma2: f64,
    n: usize,
    rng: &mut R,
) -> Result<RxObservation> {
    check_len(channels.num_users(), signals.len())?;
    if !(sigma2 >= 0.0) {
        return Err(invalid("noise variance must be non-negative"));
    }
    let mut antennas = noise_frame(n, channels.n_rx(), sigma2, rng);
    for (i, s) in signals.iter().enumerate() {
        for (offset, piece) in s.pieces() {
            let end = offset + piece.len();
            if end > n {
                return Err(Error::OutOfRange { index: end, len: n });
            }
            for (a, y) in antennas.iter_mut().enumerate() {
                axpy(channels.gain(i, a), piece, &mut y[*offset..end]);
            }
        }
    }
    RxObservation::new(antennas, sigma2)
}

/// Mean of `|H|²` over all entries; used by tests and diagnostics.
pub fn mean_gain_power(ch: &ChannelRealization) -> f64 {
    if ch.gains.is_empty() {
        return 0.0;
    }
    ch.gains.iter().map(|g| g.norm_sqr()).sum::<f64>() / ch.gains.len() as f64
}

/// Root-mean-square amplitude of a set of samples.
pub fn rms(x: &[Complex]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    math::sqrt(crate::signal::energy(x) / x.len() as f64)
}
