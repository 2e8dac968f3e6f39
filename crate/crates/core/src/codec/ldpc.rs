//! Binary LDPC codes: systematic encoding from a parity-check matrix and
//! flooding sum-product decoding.

use alloc::vec;
use alloc::vec::Vec;

use super::alist::{parse_alist, ParityCheck};
use super::DecodeResult;
use crate::error::{check_len, invalid, Result};
use crate::math;

/// Decoder iterations used by the receivers.
pub const BP_ITERATIONS: usize = 50;

const MSG_CLAMP: f64 = 60.0;
const TANH_CLAMP: f64 = 1.0 - 1e-15;

/// `tanh(m/2)` through one `expm1`.
#[inline]
fn half_tanh(m: f64) -> f64 {
    let e = math::exp_m1(-m.abs());
    let t = -e / (2.0 + e);
    if m < 0.0 {
        -t
    } else {
        t
    }
}

/// An LDPC code with a precomputed systematic encoder.
///
/// The information bits sit on the non-pivot columns found by GF(2)
/// elimination (searching pivots from the last column backwards). For the
/// shipped BG2 code these are the first 100 columns, the first 20 of which are
/// punctured.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    n_full: usize,
    punctured: usize,
    num_checks: usize,
    info_positions: Vec<usize>,
    /// `(column, mask over the info bits)` for every parity column.
    parity_rows: Vec<(usize, Vec<u64>)>,
    // Edge storage in check-major order.
    check_ptr: Vec<u32>,
    edge_var: Vec<u32>,
    var_ptr: Vec<u32>,
    var_edges: Vec<u32>,
}

fn words(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl LdpcCode {
    pub fn from_alist(text: &str) -> Result<Self> {
        Self::new(&parse_alist(text)?)
    }

    pub fn new(h: &ParityCheck) -> Result<Self> {
        let n = h.num_cols;
        let m = h.num_rows;
        let w = words(n);
        let mut dense = vec![vec![0u64; w]; m];
        for (c, col) in h.cols.iter().enumerate() {
            for &r in col {
                dense[r][c / 64] ^= 1 << (c % 64);
            }
        }
        // Reduced row echelon form with pivots taken from the right.
        let mut rank = 0;
        let mut pivots = Vec::new();
        for col in (0..n).rev() {
            if rank == m {
                break;
            }
            let bit = |row: &Vec<u64>| row[col / 64] >> (col % 64) & 1 == 1;
            let Some(p) = (rank..m).find(|&r| bit(&dense[r])) else {
                continue;
            };
            dense.swap(rank, p);
            let pivot_row = dense[rank].clone();
            for (r, row) in dense.iter_mut().enumerate() {
                if r != rank && bit(row) {
                    for (a, b) in row.iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let k = info_positions.len();
        if k == 0 {
            return Err(invalid("parity-check matrix has full column rank"));
        }
        let parity_rows = pivots
            .iter()
            .enumerate()
            .map(|(r, &col)| {
                let mut mask = vec![0u64; words(k)];
                for (j, &ic) in info_positions.iter().enumerate() {
                    if dense[r][ic / 64] >> (ic % 64) & 1 == 1 {
                        mask[j / 64] |= 1 << (j % 64);
                    }
                }
                (col, mask)
            })
            .collect();

        let rows = h.rows();
        let mut check_ptr = vec![0u32];
        let mut edge_var = Vec::new();
        for row in &rows {
            edge_var.extend(row.iter().map(|&v| v as u32));
            check_ptr.push(edge_var.len() as u32);
        }
        let mut per_var = vec![Vec::new(); n];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v as usize].push(e as u32);
        }
        let mut var_ptr = vec![0u32];
        let mut var_edges = Vec::new();
        for list in per_var {
            var_edges.extend(list);
            var_ptr.push(var_edges.len() as u32);
        }
        Ok(LdpcCode {
            n_full: n,
            punctured: h.punctured,
            num_checks: m,
            info_positions,
            parity_rows,
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
        })
    }

    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    /// Transmitted length (mother length minus punctured columns).
    pub fn n(&self) -> usize {
        self.n_full - self.punctured
    }

    pub fn mother_length(&self) -> usize {
        self.n_full
    }

    pub fn punctured(&self) -> usize {
        self.punctured
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Full mother codeword, including punctured positions.
    pub fn encode_full(&self, message: &[u8]) -> Result<Vec<u8>> {
        check_len(self.k(), message.len())?;
        let mut packed = vec![0u64; words(self.k())];
        for (j, &b) in message.iter().enumerate() {
            packed[j / 64] |= ((b & 1) as u64) << (j % 64);
        }
        let mut c = vec![0u8; self.n_full];
        for (&pos, &b) in self.info_positions.iter().zip(message) {
            c[pos] = b & 1;
        }
        for (col, mask) in &self.parity_rows {
            let ones: u32 = mask.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
            c[*col] = (ones & 1) as u8;
        }
        Ok(c)
    }

    /// Transmitted codeword of length [`n`](Self::n).
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        let mut c = self.encode_full(message)?;
        c.drain(..self.punctured);
        Ok(c)
    }

    /// True iff the full-length word satisfies every check.
    pub fn is_codeword(&self, full: &[u8]) -> bool {
        full.len() == self.n_full
            && (0..self.num_checks).all(|c| {
                let (a, b) = (self.check_ptr[c] as usize, self.check_ptr[c + 1] as usize);
                self.edge_var[a..b].iter().fold(0u8, |acc, &v| acc ^ full[v as usize]) == 0
            })
    }

    fn syndrome_ok(&self, hard: &[u8]) -> bool {
        self.is_codeword(hard)
    }

    /// Sum-product decoding with a flooding schedule.
    ///
    /// Takes LLRs for the transmitted positions (positive favours 0). Stops as
    /// soon as the hard decision satisfies all checks. Returns the result and
    /// the number of iterations run.
    pub fn decode(&self, llrs: &[f64], max_iter: usize) -> Result<(DecodeResult, usize)> {
        check_len(self.n(), llrs.len())?;
        let mut channel = vec![0.0; self.n_full];
        channel[self.punctured..].copy_from_slice(llrs);

        let num_edges = self.edge_var.len();
        let mut v2c = vec![0.0; num_edges];
        let mut c2v = vec![0.0; num_edges];
        for (e, &v) in self.edge_var.iter().enumerate() {
            v2c[e] = channel[v as usize];
        }
        let mut hard = vec![0u8; self.n_full];
        let mut tanhs = Vec::with_capacity(32);
        let mut suffix = Vec::with_capacity(32);

        for iter in 1..=max_iter {
            for c in 0..self.num_checks {
                let (a, b) = (self.check_ptr[c] as usize, self.check_ptr[c + 1] as usize);
                tanhs.clear();
                tanhs.extend(v2c[a..b].iter().map(|&m| half_tanh(m)));
                let deg = b - a;
                suffix.clear();
                suffix.resize(deg + 1, 1.0);
                for i in (0..deg).rev() {
                    suffix[i] = suffix[i + 1] * tanhs[i];
                }
                let mut prefix = 1.0;
                for i in 0..deg {
                    let p = (prefix * suffix[i + 1]).clamp(-TANH_CLAMP, TANH_CLAMP);
                    c2v[a + i] = math::ln((1.0 + p) / (1.0 - p));
                    prefix *= tanhs[i];
                }
            }
            for v in 0..self.n_full {
                let (a, b) = (self.var_ptr[v] as usize, self.var_ptr[v + 1] as usize);
                let edges = &self.var_edges[a..b];
                let total = channel[v] + edges.iter().map(|&e| c2v[e as usize]).sum::<f64>();
                for &e in edges {
                    v2c[e as usize] = (total - c2v[e as usize]).clamp(-MSG_CLAMP, MSG_CLAMP);
                }
                hard[v] = (total < 0.0) as u8;
            }
            if self.syndrome_ok(&hard) {
                let msg = self.info_positions.iter().map(|&p| hard[p]).collect();
                return Ok((DecodeResult::Valid(msg), iter));
            }
        }
        Ok((DecodeResult::DetectedFailure, max_iter))
    }
}
