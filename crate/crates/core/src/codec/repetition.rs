use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Sums per-copy LLR vectors of a repeated codeword. Copies are assumed
/// conditionally independent given the codeword, so their LLRs add.
pub fn combine_repetitions(copies: &[&[f64]]) -> Result<Vec<f64>> {
    let first = copies.first().ok_or_else(|| invalid("no repetitions to combine"))?;
    let mut out = first.to_vec();
    for c in &copies[1..] {
        crate::error::check_len(out.len(), c.len())?;
        for (o, v) in out.iter_mut().zip(c.iter()) {
            *o += v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_copies() {
        let a = [1.0, -2.0];
        let b = [0.5, 0.5];
        assert_eq!(combine_repetitions(&[&a, &b, &a]).unwrap(), [2.5, -3.5]);
        assert!(combine_repetitions(&[]).is_err());
        assert!(combine_repetitions(&[&a, &[1.0]]).is_err());
    }
}
