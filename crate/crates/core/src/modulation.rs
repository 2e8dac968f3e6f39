//! Gray-mapped QPSK and its matched-filter LLRs.
//!
//! Bit pair `(b0, b1)` maps to `sqrt(P/2)·((1−2b0) + i(1−2b1))`. LLRs are
//! positive in favour of bit 0 and treat residual interference as Gaussian.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::math;
use crate::signal::{Complex, ComplexVec};

/// Maps an even number of bits to QPSK symbols of energy `p`.
pub fn qpsk_map(bits: &[u8], p: f64) -> Result<ComplexVec> {
    if !bits.len().is_multiple_of(2) {
        return Err(invalid("QPSK needs an even number of bits"));
    }
    if !(p > 0.0) {
        return Err(invalid("QPSK power must be positive"));
    }
    let a = math::sqrt(p / 2.0);
    Ok(bits
        .chunks_exact(2)
        .map(|b| Complex::new(a * sign(b[0]), a * sign(b[1])))
        .collect())
}

#[inline]
fn sign(bit: u8) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// LLRs of the two bits of one QPSK symbol observed as `y = h·s + w`, with
/// `w` of power `ni`.
pub fn qpsk_llr(y: Complex, h_hat: Complex, ni: f64, p: f64) -> Result<(f64, f64)> {
    if !(ni > 0.0) {
        return Err(invalid("noise-plus-interference power must be positive"));
    }
    Ok(llr_pair(y, h_hat, 2.0 * math::sqrt(2.0 * p) / ni))
}

#[inline(always)]
pub(crate) fn llr_pair(y: Complex, h_hat: Complex, gain: f64) -> (f64, f64) {
    let z = h_hat.conj() * y;
    (gain * z.re, gain * z.im)
}

/// Hard minimum-distance demapping of one symbol given the channel.
pub fn qpsk_hard(y: Complex, h: Complex) -> (u8, u8) {
    let z = h.conj() * y;
    ((z.re < 0.0) as u8, (z.im < 0.0) as u8)
}

/// Unit-power bits to symbols helper used by tests and the transmitter.
pub fn qpsk_bits_from_symbols(symbols: &[Complex]) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len() * 2);
    for s in symbols {
        out.push((s.re < 0.0) as u8);
        out.push((s.im < 0.0) as u8);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_normal, rng_from_seed};
    use rand::Rng;

    #[test]
    fn anchor_points() {
        let s = qpsk_map(&[0, 0, 1, 1], 1.0).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((s[0] - Complex::new(r, r)).norm() < 1e-9);
        assert!((s[1] - Complex::new(-r, -r)).norm() < 1e-9);
        assert!(qpsk_map(&[0, 1, 1], 1.0).is_err());
        assert!(qpsk_map(&[0, 1], 0.0).is_err());
    }

    #[test]
    fn every_symbol_has_energy_p() {
        let mut rng = rng_from_seed(1);
        let bits: Vec<u8> = (0..1000).map(|_| rng.random_range(0..2u8)).collect();
        let s = qpsk_map(&bits, 2.0).unwrap();
        assert_eq!(s.len(), 500);
        for x in s.iter() {
            assert!((x.norm_sqr() - 2.0).abs() < 1e-12);
        }
        assert_eq!(qpsk_bits_from_symbols(&s), bits);
    }

    #[test]
    fn llr_matches_exact_posterior() {
        // AWGN with σ² = 1: per real dimension variance 1/2, amplitude a = 1/√2.
        // LLR(b0) = ln p(y|+a)/p(y|−a) = 4·a·Re(y)/σ².
        let y = qpsk_map(&[0, 0], 1.0).unwrap()[0];
        let (l0, l1) = qpsk_llr(y, Complex::new(1.0, 0.0), 1.0, 1.0).unwrap();
        let a = core::f64::consts::FRAC_1_SQRT_2;
        let gauss = |x: f64, m: f64| libm::exp(-(x - m) * (x - m));
        let exact0 = libm::log(gauss(y.re, a) / gauss(y.re, -a));
        let exact1 = libm::log(gauss(y.im, a) / gauss(y.im, -a));
        assert!((l0 - 2.0).abs() < 1e-12 && (l1 - 2.0).abs() < 1e-12);
        assert!((l0 - exact0).abs() < 1e-9 && (l1 - exact1).abs() < 1e-9);
    }

    #[test]
    fn llr_edge_cases() {
        let y = Complex::new(0.3, -1.2);
        assert_eq!(qpsk_llr(y, Complex::new(0.0, 0.0), 1.0, 1.0).unwrap(), (0.0, 0.0));
        assert!(qpsk_llr(y, Complex::new(1.0, 0.0), 0.0, 1.0).is_err());
        let h = Complex::new(0.4, 0.9);
        let a = qpsk_llr(y, h, 0.7, 1.0).unwrap();
        let b = qpsk_llr(y * 3.0, h, 0.7 * 3.0, 1.0).unwrap();
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    }

    #[test]
    fn llr_sign_is_min_distance_decision() {
        let mut rng = rng_from_seed(9);
        for _ in 0..2000 {
            let h = complex_normal(&mut rng, 1.0);
            let bits = [rng.random_range(0..2u8), rng.random_range(0..2u8)];
            let s = qpsk_map(&bits, 1.0).unwrap()[0];
            let y = h * s + complex_normal(&mut rng, 0.5);
            let (l0, l1) = qpsk_llr(y, h, 0.5, 1.0).unwrap();
            // Minimum distance over the four hypotheses.
            let best = (0..4u8)
                .min_by(|&a, &b| {
                    let sa = qpsk_map(&[a >> 1, a & 1], 1.0).unwrap()[0];
                    let sb = qpsk_map(&[b >> 1, b & 1], 1.0).unwrap()[0];
                    (y - h * sa).norm_sqr().partial_cmp(&(y - h * sb).norm_sqr()).unwrap()
                })
                .unwrap();
            assert_eq!(((l0 < 0.0) as u8, (l1 < 0.0) as u8), (best >> 1, best & 1));
            assert_eq!(qpsk_hard(y, h), (best >> 1, best & 1));
        }
    }
}
