//! Frame arithmetic and SNR bookkeeping.
//!
//! A frame of `n` complex channel uses is a PRACH of `n_pre` uses followed by
//! `num_po` PUSCH occasions (POs) of `n_po` uses each.

use core::ops::Range;

use crate::error::{invalid, Result};
use crate::math;

/// Partition of a frame into the PRACH and the PUSCH occasions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameLayout {
    pub n_pre: usize,
    pub num_po: usize,
    pub n_po: usize,
    pub n: usize,
}

impl FrameLayout {
    /// Builds a layout, deriving the total length.
    pub fn new(n_pre: usize, num_po: usize, n_po: usize) -> Result<Self> {
        let layout = FrameLayout { n_pre, num_po, n_po, n: n_pre + num_po * n_po };
        if !validate_layout(&layout) {
            return Err(invalid("frame layout fields must be strictly positive"));
        }
        Ok(layout)
    }

    pub fn prach(&self) -> Range<usize> {
        0..self.n_pre
    }

    /// Sample range of PO `index` (0-based).
    pub fn po(&self, index: usize) -> Range<usize> {
        let start = self.n_pre + index * self.n_po;
        start..start + self.n_po
    }
}

/// True iff every field is positive and `n = n_pre + num_po * n_po`.
pub fn validate_layout(layout: &FrameLayout) -> bool {
    layout.n_pre > 0
        && layout.num_po > 0
        && layout.n_po > 0
        && layout.num_po.checked_mul(layout.n_po).and_then(|x| x.checked_add(layout.n_pre))
            == Some(layout.n)
}

/// Noise variance giving the requested per-user `Eb/N0 = nP/(kσ²)`.
pub fn ebn0_to_sigma2(ebn0_db: f64, n: usize, k: usize, p: f64) -> Result<f64> {
    if n == 0 || k == 0 || !(p > 0.0) || !ebn0_db.is_finite() {
        return Err(invalid("ebn0_to_sigma2 needs n, k, P > 0 and finite Eb/N0"));
    }
    Ok(n as f64 * p / (k as f64 * math::db_to_linear(ebn0_db)))
}

/// Inverse of [`ebn0_to_sigma2`].
pub fn sigma2_to_ebn0(sigma2: f64, n: usize, k: usize, p: f64) -> Result<f64> {
    if n == 0 || k == 0 || !(p > 0.0) || !(sigma2 > 0.0) {
        return Err(invalid("sigma2_to_ebn0 needs n, k, P, sigma2 > 0"));
    }
    Ok(10.0 * math::log10(n as f64 * p / (k as f64 * sigma2)))
}

/// Per-user power budget tying `P`, `k`, `Eb/N0` and `σ²` together for one
/// frame length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBudget {
    pub p: f64,
    pub k: usize,
    pub ebn0_db: f64,
    pub sigma2: f64,
}

impl PowerBudget {
    pub fn new(n: usize, k: usize, p: f64, ebn0_db: f64) -> Result<Self> {
        let sigma2 = ebn0_to_sigma2(ebn0_db, n, k, p)?;
        Ok(PowerBudget { p, k, ebn0_db, sigma2 })
    }

    /// Frame energy budget `nP`.
    pub fn frame_energy(&self, n: usize) -> f64 {
        n as f64 * self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_layouts() {
        let cases = [
            (278, 64, 250, 16278),
            (278, 64, 300, 19478),
            (275, 589, 25, 15000),
            (278, 1, 300, 578),
        ];
        for (n_pre, num_po, n_po, n) in cases {
            assert!(validate_layout(&FrameLayout { n_pre, num_po, n_po, n }));
            assert_eq!(FrameLayout::new(n_pre, num_po, n_po).unwrap().n, n);
        }
        assert_eq!(35 * (278 + 300), 20230);
    }

    #[test]
    fn layout_rejects_mismatch_and_zero() {
        assert!(!validate_layout(&FrameLayout { n_pre: 278, num_po: 64, n_po: 250, n: 16279 }));
        assert!(!validate_layout(&FrameLayout { n_pre: 0, num_po: 1, n_po: 1, n: 1 }));
        assert!(FrameLayout::new(1, 0, 5).is_err());
    }

    #[test]
    fn po_ranges() {
        let l = FrameLayout::new(10, 3, 4).unwrap();
        assert_eq!(l.prach(), 0..10);
        assert_eq!(l.po(0), 10..14);
        assert_eq!(l.po(2), 18..22);
    }

    #[test]
    fn sigma2_examples() {
        let s = ebn0_to_sigma2(0.0, 16278, 100, 1.0).unwrap();
        assert!((s - 162.78).abs() < 1e-9);
        let s = ebn0_to_sigma2(10.0, 100, 100, 1.0).unwrap();
        assert!((s - 0.1).abs() < 1e-12);
        assert!(ebn0_to_sigma2(1.0, 0, 100, 1.0).is_err());
        assert!(ebn0_to_sigma2(1.0, 10, 100, -1.0).is_err());
    }

    #[test]
    fn sigma2_round_trip_and_monotone() {
        let mut prev = f64::INFINITY;
        for i in -20..60 {
            let db = i as f64 * 0.5;
            let s = ebn0_to_sigma2(db, 19478, 100, 1.0).unwrap();
            assert!(s < prev);
            prev = s;
            let back = sigma2_to_ebn0(s, 19478, 100, 1.0).unwrap();
            let s2 = ebn0_to_sigma2(back, 19478, 100, 1.0).unwrap();
            assert!((s2 - s).abs() <= 1e-12 * s);
        }
    }

    #[test]
    fn budget_holds_snr_identity() {
        let b = PowerBudget::new(15000, 100, 2.0, 3.0).unwrap();
        let ebn0 = b.frame_energy(15000) / (b.k as f64 * b.sigma2);
        assert!((10.0 * math::log10(ebn0) - 3.0).abs() < 1e-12);
    }
}
