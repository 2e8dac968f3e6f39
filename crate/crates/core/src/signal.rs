//! Complex sample vectors.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use crate::error::{check_len, Error, Result};

pub type Complex = num_complex::Complex64;

/// A vector of complex channel-use amplitudes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexVec(Vec<Complex>);

impl ComplexVec {
    pub fn zeros(len: usize) -> Self {
        ComplexVec(vec![Complex::new(0.0, 0.0); len])
    }

    pub fn from_vec(samples: Vec<Complex>) -> Self {
        ComplexVec(samples)
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.0
    }

    /// Squared Euclidean norm.
    pub fn energy(&self) -> f64 {
        energy(&self.0)
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &[Complex]) -> ComplexVec {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(other);
        ComplexVec(out)
    }

    /// Splits at `mid`, failing if `mid` exceeds the length.
    pub fn split_at_checked(&self, mid: usize) -> Result<(ComplexVec, ComplexVec)> {
        if mid > self.len() {
            return Err(Error::OutOfRange { index: mid, len: self.len() });
        }
        let (a, b) = self.0.split_at(mid);
        Ok((ComplexVec(a.to_vec()), ComplexVec(b.to_vec())))
    }

    /// Element-wise `self += scale * other`; lengths must agree.
    pub fn add_scaled(&mut self, other: &[Complex], scale: Complex) -> Result<()> {
        check_len(self.len(), other.len())?;
        axpy(scale, other, &mut self.0);
        Ok(())
    }

    pub fn scale(&mut self, factor: f64) {
        for s in self.0.iter_mut() {
            *s *= factor;
        }
    }
}

impl Deref for ComplexVec {
    type Target = [Complex];
    fn deref(&self) -> &[Complex] {
        &self.0
    }
}

impl DerefMut for ComplexVec {
    fn deref_mut(&mut self) -> &mut [Complex] {
        &mut self.0
    }
}

impl From<Vec<Complex>> for ComplexVec {
    fn from(v: Vec<Complex>) -> Self {
        ComplexVec(v)
    }
}

impl FromIterator<Complex> for ComplexVec {
    fn from_iter<I: IntoIterator<Item = Complex>>(iter: I) -> Self {
        ComplexVec(iter.into_iter().collect())
    }
}

pub fn energy(x: &[Complex]) -> f64 {
    x.iter().map(|s| s.norm_sqr()).sum()
}

/// `Σ y·conj(x)`.
pub fn inner(y: &[Complex], x: &[Complex]) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for (a, b) in y.iter().zip(x) {
        acc += a * b.conj();
    }
    acc
}

/// `out += a * x`.
pub fn axpy(a: Complex, x: &[Complex], out: &mut [Complex]) {
    for (o, s) in out.iter_mut().zip(x) {
        *o += a * s;
    }
}

/// A frame signal stored as non-overlapping pieces at fixed offsets; all
/// samples outside the pieces are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseSignal {
    pieces: Vec<(usize, ComplexVec)>,
}

impl SparseSignal {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, offset: usize, samples: ComplexVec) {
        self.pieces.push((offset, samples));
    }

    pub fn pieces(&self) -> &[(usize, ComplexVec)] {
        &self.pieces
    }

    pub fn energy(&self) -> f64 {
        self.pieces.iter().map(|(_, s)| s.energy()).sum()
    }

    /// Materializes the full-length signal.
    pub fn to_dense(&self, len: usize) -> Result<ComplexVec> {
        let mut out = ComplexVec::zeros(len);
        for (offset, piece) in &self.pieces {
            let end = offset + piece.len();
            if end > len {
                return Err(Error::OutOfRange { index: end, len });
            }
            out[*offset..end].copy_from_slice(piece);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_checks_bounds() {
        let v = ComplexVec::zeros(4);
        assert!(v.split_at_checked(5).is_err());
        let (a, b) = v.split_at_checked(1).unwrap();
        assert_eq!((a.len(), b.len()), (1, 3));
        assert_eq!(a.concat(&b).len(), 4);
    }

    #[test]
    fn add_scaled_rejects_mismatch() {
        let mut v = ComplexVec::zeros(3);
        assert!(v.add_scaled(&[Complex::new(1.0, 0.0)], Complex::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn sparse_to_dense() {
        let mut s = SparseSignal::new();
        s.push(2, ComplexVec::from_vec(vec![Complex::new(1.0, 1.0)]));
        let d = s.to_dense(4).unwrap();
        assert_eq!(d[2], Complex::new(1.0, 1.0));
        assert_eq!(d.energy(), 2.0);
        assert!(s.to_dense(2).is_err());
    }
}
