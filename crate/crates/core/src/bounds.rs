//! Closed-form reference numbers: preamble energy overhead and a
//! single-user finite-blocklength benchmark.

use crate::error::{invalid, Error, Result};
use crate::math;

/// Energy overhead of a preamble in dB, `10·log10((n_pre + n_po)/n_po)`.
pub fn preamble_overhead_db(n_pre: usize, n_po: usize) -> f64 {
    10.0 * math::log10((n_pre + n_po) as f64 / n_po as f64)
}

/// Gaussian tail `Q(x)`.
pub fn q_func(x: f64) -> f64 {
    0.5 * math::erfc(x / core::f64::consts::SQRT_2)
}

/// Inverse of [`q_func`] on `(0, 1)` by bisection.
pub fn q_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("Q^-1 needs 0 < p < 1"));
    }
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if q_func(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Normal approximation for `k` bits over `n` complex AWGN channel uses at
/// SNR `rho`: `n·C(ρ) − sqrt(n·V(ρ))·Q⁻¹(ε)·log2(e) + ½·log2(n)`.
pub fn normal_approx_bits(n: usize, rho: f64, epsilon: f64) -> Result<f64> {
    let n_f = n as f64;
    let c = math::log2(1.0 + rho);
    let v = rho * (rho + 2.0) / ((rho + 1.0) * (rho + 1.0));
    Ok(n_f * c - math::sqrt(n_f * v) * q_inv(epsilon)? * core::f64::consts::LOG2_E + 0.5 * math::log2(n_f))
}

/// Single-user `Eb/N0` (dB) at which the normal approximation carries `k`
/// bits in `n` channel uses with error probability `epsilon`. An
/// approximation to, not an evaluation of, finite-blocklength bounds.
pub fn fbl_reference(k: usize, n: usize, epsilon: f64) -> Result<f64> {
    if k == 0 || n == 0 {
        return Err(invalid("fbl_reference needs k, n > 0"));
    }
    q_inv(epsilon)?;
    let f = |log_rho: f64| normal_approx_bits(n, math::exp(log_rho), epsilon).map(|b| b - k as f64);
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    if f(lo)? > 0.0 || f(hi)? < 0.0 {
        return Err(Error::NoSolution);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = math::exp(0.5 * (lo + hi));
    Ok(10.0 * math::log10(n as f64 * rho / k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overhead_values() {
        assert!((preamble_overhead_db(278, 300) - 2.8485).abs() < 1e-3);
        assert_eq!(preamble_overhead_db(0, 300), 0.0);
        assert!((preamble_overhead_db(300, 300) - 3.0103).abs() < 1e-4);
    }

    #[test]
    fn q_inverse_round_trip() {
        for p in [1e-6, 0.01, 0.05, 0.5, 0.9] {
            assert!((q_func(q_inv(p).unwrap()) - p).abs() < 1e-12 * p.max(1e-3));
        }
        assert!(q_inv(0.5).unwrap().abs() < 1e-12);
        assert!(q_inv(0.0).is_err());
    }

    #[test]
    fn fbl_reference_is_monotone() {
        let a = fbl_reference(100, 500, 0.05).unwrap();
        let b = fbl_reference(100, 500, 0.01).unwrap();
        let c = fbl_reference(100, 500, 0.3).unwrap();
        assert!(b > a && a > c);
        // More channel uses per bit approach the low-rate limit from above.
        let d = fbl_reference(100, 5000, 0.05).unwrap();
        assert!(d < a && d > -1.6);
        assert!(fbl_reference(100, 500, 1.0).is_err());
    }
}
