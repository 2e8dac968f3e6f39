//! CRC-aided polar codes with shortening and adaptive successive-cancellation
//! list decoding.
//!
//! The encoder computes `x = u·F^{⊗m}` with `F = [[1,0],[1,1]]` in natural
//! order. Rate matching shortens the last `N − n_c` positions of `x`; because
//! `x_j` only depends on `u_i` with `i ⊇ j` (bitwise), freezing the last
//! `N − n_c` inputs makes those outputs identically zero, so the decoder knows
//! them perfectly.
//!
//! The list decoder follows the lazy-copy layout of Tal and Vardy in the LLR
//! domain: per-layer arrays are shared between paths and copied on write.
//! Check nodes use the min-sum `f` rule, path metrics are exact.

use alloc::vec;
use alloc::vec::Vec;

use super::crc::Crc;
use super::DecodeResult;
use crate::error::{check_len, invalid, Error, Result};
use crate::math;

/// Largest list size tried by the adaptive decoder.
pub const MAX_LIST: usize = 128;

/// LLR assigned to shortened (known-zero) positions.
const SHORTENED_LLR: f64 = 1e9;

/// Parses a reliability order: whitespace-separated integers forming a
/// permutation of `0..N`, least reliable first.
pub fn parse_reliability(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for t in line.split_whitespace() {
            out.push(t.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: alloc::format!("not an integer: {t}"),
            })?);
        }
    }
    let mut seen = vec![false; out.len()];
    for &q in &out {
        if q >= out.len() || core::mem::replace(&mut seen[q], true) {
            return Err(Error::Parse { line: 0, msg: "reliability order is not a permutation".into() });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct PolarCode {
    k: usize,
    n_c: usize,
    m: usize,
    frozen: Vec<bool>,
    /// Information positions in increasing order (message then CRC bits).
    info: Vec<usize>,
    crc: Crc,
    max_list: usize,
}

/// Instrumentation for one adaptive decoding call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PolarDecodeStats {
    /// Largest list size that was run.
    pub max_list_used: usize,
    /// Number of SCL passes.
    pub passes: usize,
}

impl PolarCode {
    pub fn new(k: usize, n_c: usize, reliability: &[usize], crc: Crc, max_list: usize) -> Result<Self> {
        if n_c == 0 || k == 0 {
            return Err(invalid("polar code needs k, n_c > 0"));
        }
        let mother = n_c.next_power_of_two();
        if reliability.len() < mother {
            return Err(invalid("reliability order shorter than the mother length"));
        }
        let info_len = k + crc.len();
        let shortened = mother - n_c;
        if info_len + shortened > mother {
            return Err(invalid("k plus CRC exceeds the rate-matched capacity"));
        }
        if max_list == 0 || !max_list.is_power_of_two() {
            return Err(invalid("list size must be a power of two"));
        }
        let usable: Vec<usize> = reliability
            .iter()
            .copied()
            .filter(|&q| q < mother && q < n_c)
            .collect();
        let mut info: Vec<usize> = usable[usable.len() - info_len..].to_vec();
        info.sort_unstable();
        let mut frozen = vec![true; mother];
        for &i in &info {
            frozen[i] = false;
        }
        Ok(PolarCode { k, n_c, m: mother.trailing_zeros() as usize, frozen, info, crc, max_list })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n_c
    }

    pub fn mother_length(&self) -> usize {
        1 << self.m
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        check_len(self.k, message.len())?;
        let mut u = vec![0u8; self.mother_length()];
        let crc = self.crc.checksum(message);
        for (&pos, &b) in self.info.iter().zip(message.iter().chain(crc.iter())) {
            u[pos] = b & 1;
        }
        polar_transform(&mut u);
        debug_assert!(u[self.n_c..].iter().all(|&b| b == 0));
        u.truncate(self.n_c);
        Ok(u)
    }

    /// Adaptive SCL: list sizes 1, 2, 4, … up to the maximum, stopping at the
    /// first list containing a CRC-passing path.
    pub fn decode(&self, llrs: &[f64]) -> Result<(DecodeResult, PolarDecodeStats)> {
        check_len(self.n_c, llrs.len())?;
        let mut channel = vec![SHORTENED_LLR; self.mother_length()];
        channel[..self.n_c].copy_from_slice(llrs);
        let mut stats = PolarDecodeStats::default();
        let mut list = 1;
        loop {
            stats.passes += 1;
            stats.max_list_used = list;
            if let Some(msg) = self.decode_list(&channel, list) {
                return Ok((DecodeResult::Valid(msg), stats));
            }
            if list >= self.max_list {
                return Ok((DecodeResult::DetectedFailure, stats));
            }
            list *= 2;
        }
    }

    /// One SCL pass with a fixed list size; returns the best CRC-passing
    /// message, if any.
    pub fn decode_list_size(&self, llrs: &[f64], list: usize) -> Result<Option<Vec<u8>>> {
        check_len(self.n_c, llrs.len())?;
        let mut channel = vec![SHORTENED_LLR; self.mother_length()];
        channel[..self.n_c].copy_from_slice(llrs);
        Ok(self.decode_list(&channel, list))
    }

    fn decode_list(&self, channel: &[f64], list: usize) -> Option<Vec<u8>> {
        let mut scl = Scl::new(self.m, list, self.info.len());
        let n = self.mother_length();
        let mut t = 0;
        for phi in 0..n {
            scl.calc_llrs(channel, phi);
            if self.frozen[phi] {
                scl.freeze(phi);
            } else {
                scl.branch(phi, t);
                t += 1;
            }
            if phi & 1 == 1 {
                scl.update_partial_sums(phi);
            }
        }
        let mut order: Vec<usize> = (0..list).filter(|&l| scl.active[l]).collect();
        order.sort_by(|&a, &b| scl.metric[a].total_cmp(&scl.metric[b]));
        let info_len = self.info.len();
        order.into_iter().find_map(|l| {
            let word = &scl.bits[l * info_len..(l + 1) * info_len];
            self.crc.check(word).then(|| word[..self.k].to_vec())
        })
    }
}

/// In-place `x = u·F^{⊗m}`.
pub(crate) fn polar_transform(u: &mut [u8]) {
    let n = u.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                u[i] ^= u[i + h];
            }
        }
        h *= 2;
    }
}

#[inline(always)]
fn f_minsum(a: f64, b: f64) -> f64 {
    const SIGN: u64 = 1 << 63;
    let m = a.abs().min(b.abs());
    f64::from_bits(m.to_bits() | ((a.to_bits() ^ b.to_bits()) & SIGN))
}

/// Scratch state of one SCL pass. Layer `λ` (1..=m) holds arrays of length
/// `2^(m−λ)`; layer 0 is the channel and is never copied.
struct Scl {
    m: usize,
    list: usize,
    info_len: usize,
    llr: Vec<Vec<f64>>,
    /// Partial sums: two columns per position, `[(slot*len + β)*2 + col]`.
    sums: Vec<Vec<u8>>,
    path_slot: Vec<Vec<usize>>,
    refs: Vec<Vec<u32>>,
    free_slots: Vec<Vec<usize>>,
    free_paths: Vec<usize>,
    active: Vec<bool>,
    metric: Vec<f64>,
    bits: Vec<u8>,
}

impl Scl {
    fn new(m: usize, list: usize, info_len: usize) -> Self {
        let len = |lam: usize| 1usize << (m - lam);
        let mut s = Scl {
            m,
            list,
            info_len,
            llr: (0..=m).map(|lam| if lam == 0 { Vec::new() } else { vec![0.0; list * len(lam)] }).collect(),
            sums: (0..=m).map(|lam| if lam == 0 { Vec::new() } else { vec![0; 2 * list * len(lam)] }).collect(),
            path_slot: vec![vec![0; list]; m + 1],
            refs: vec![vec![0; list]; m + 1],
            free_slots: (0..=m).map(|_| (0..list).rev().collect()).collect(),
            free_paths: (0..list).rev().collect(),
            active: vec![false; list],
            metric: vec![0.0; list],
            bits: vec![0; list * info_len],
        };
        let l0 = s.free_paths.pop().unwrap();
        s.active[l0] = true;
        for lam in 1..=m {
            let slot = s.free_slots[lam].pop().unwrap();
            s.path_slot[lam][l0] = slot;
            s.refs[lam][slot] = 1;
        }
        s
    }

    #[inline]
    fn len(&self, lam: usize) -> usize {
        1 << (self.m - lam)
    }

    /// Slot of path `l` at layer `lam`, made private to the path first.
    fn writable(&mut self, lam: usize, l: usize) -> usize {
        self.make_private(lam, l, true)
    }

    /// Like [`Scl::writable`], but the LLRs are not carried over because the
    /// caller overwrites them.
    fn writable_sums(&mut self, lam: usize, l: usize) -> usize {
        self.make_private(lam, l, false)
    }

    #[inline]
    fn make_private(&mut self, lam: usize, l: usize, keep_llr: bool) -> usize {
        let s = self.path_slot[lam][l];
        if self.refs[lam][s] == 1 {
            return s;
        }
        let t = self.free_slots[lam].pop().expect("slot pool exhausted");
        let len = self.len(lam);
        if keep_llr {
            self.llr[lam].copy_within(s * len..(s + 1) * len, t * len);
        }
        self.sums[lam].copy_within(2 * s * len..2 * (s + 1) * len, 2 * t * len);
        self.refs[lam][s] -= 1;
        self.refs[lam][t] = 1;
        self.path_slot[lam][l] = t;
        t
    }

    fn clone_path(&mut self, l: usize) -> usize {
        let c = self.free_paths.pop().expect("path pool exhausted");
        self.active[c] = true;
        self.metric[c] = self.metric[l];
        for lam in 1..=self.m {
            let s = self.path_slot[lam][l];
            self.path_slot[lam][c] = s;
            self.refs[lam][s] += 1;
        }
        c
    }

    fn kill_path(&mut self, l: usize) {
        self.active[l] = false;
        self.free_paths.push(l);
        for lam in 1..=self.m {
            let s = self.path_slot[lam][l];
            self.refs[lam][s] -= 1;
            if self.refs[lam][s] == 0 {
                self.free_slots[lam].push(s);
            }
        }
    }

    fn calc_llrs(&mut self, channel: &[f64], phi: usize) {
        let m = self.m;
        let start = if phi == 0 { 1 } else { m.saturating_sub(phi.trailing_zeros() as usize).max(1) };
        for lam in start..=m {
            let odd = (phi >> (m - lam)) & 1 == 1;
            let len = self.len(lam);
            for l in 0..self.list {
                if !self.active[l] {
                    continue;
                }
                let dst = self.writable_sums(lam, l);
                let (lower, upper) = self.llr.split_at_mut(lam);
                let parent: &[f64] = if lam == 1 {
                    channel
                } else {
                    let ps = self.path_slot[lam - 1][l];
                    &lower[lam - 1][ps * 2 * len..(ps + 1) * 2 * len]
                };
                let (left, right) = parent.split_at(len);
                let out = &mut upper[0][dst * len..(dst + 1) * len];
                if odd {
                    let sums = &self.sums[lam][2 * dst * len..2 * (dst + 1) * len];
                    for (((o, &a), &c), u) in out.iter_mut().zip(left).zip(right).zip(sums.chunks_exact(2)) {
                        *o = if u[0] == 0 { c + a } else { c - a };
                    }
                } else {
                    for ((o, &a), &c) in out.iter_mut().zip(left).zip(right) {
                        *o = f_minsum(a, c);
                    }
                }
            }
        }
    }

    fn leaf_llr(&self, l: usize) -> f64 {
        self.llr[self.m][self.path_slot[self.m][l]]
    }

    fn set_leaf(&mut self, l: usize, phi: usize, bit: u8) {
        let s = self.writable(self.m, l);
        self.sums[self.m][2 * s + (phi & 1)] = bit;
    }

    fn freeze(&mut self, phi: usize) {
        for l in 0..self.list {
            if self.active[l] {
                let llr = self.leaf_llr(l);
                self.metric[l] += math::softplus(-llr);
                self.set_leaf(l, phi, 0);
            }
        }
    }

    fn branch(&mut self, phi: usize, t: usize) {
        // Candidate metrics for both continuations of every active path.
        let mut cand: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * self.list);
        for l in 0..self.list {
            if self.active[l] {
                let llr = self.leaf_llr(l);
                cand.push((self.metric[l] + math::softplus(-llr), l, 0));
                cand.push((self.metric[l] + math::softplus(llr), l, 1));
            }
        }
        let keep_n = cand.len().min(self.list);
        if cand.len() > keep_n {
            cand.select_nth_unstable_by(keep_n - 1, |a, b| a.0.total_cmp(&b.0));
            cand.truncate(keep_n);
        }
        let mut keep = vec![[None::<f64>; 2]; self.list];
        for &(pm, l, u) in &cand {
            keep[l][u as usize] = Some(pm);
        }
        for l in 0..self.list {
            if self.active[l] && keep[l][0].is_none() && keep[l][1].is_none() {
                self.kill_path(l);
            }
        }
        for l in 0..self.list {
            if !self.active[l] {
                continue;
            }
            match keep[l] {
                [Some(m0), Some(m1)] => {
                    let c = self.clone_path(l);
                    self.bits.copy_within(l * self.info_len..l * self.info_len + t, c * self.info_len);
                    self.metric[l] = m0;
                    self.metric[c] = m1;
                    self.set_leaf(l, phi, 0);
                    self.set_leaf(c, phi, 1);
                    self.bits[l * self.info_len + t] = 0;
                    self.bits[c * self.info_len + t] = 1;
                    // The clone must not be revisited in this loop.
                    keep[c] = [None, None];
                }
                [Some(pm), None] | [None, Some(pm)] => {
                    let u = keep[l][1].is_some() as u8;
                    self.metric[l] = pm;
                    self.set_leaf(l, phi, u);
                    self.bits[l * self.info_len + t] = u;
                }
                [None, None] => {}
            }
        }
    }

    fn update_partial_sums(&mut self, phi: usize) {
        for l in 0..self.list {
            if !self.active[l] {
                continue;
            }
            let mut lam = self.m;
            let mut phase = phi;
            while phase & 1 == 1 && lam >= 2 {
                let col = (phase >> 1) & 1;
                let len = self.len(lam);
                let src = self.path_slot[lam][l];
                let dst = self.writable(lam - 1, l);
                let (lower, upper) = self.sums.split_at_mut(lam);
                let from = &upper[0][2 * src * len..2 * (src + 1) * len];
                let to = &mut lower[lam - 1][2 * dst * 2 * len..2 * (dst + 1) * 2 * len];
                let (to_left, to_right) = to.split_at_mut(2 * len);
                for ((c, tl), tr) in from.chunks_exact(2).zip(to_left.chunks_exact_mut(2)).zip(to_right.chunks_exact_mut(2)) {
                    tl[col] = c[0] ^ c[1];
                    tr[col] = c[1];
                }
                lam -= 1;
                phase >>= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::NR_POLAR_RELIABILITY;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn code(n_c: usize) -> PolarCode {
        let order = parse_reliability(NR_POLAR_RELIABILITY).unwrap();
        PolarCode::new(100, n_c, &order, Crc::nr_crc11(), MAX_LIST).unwrap()
    }

    fn random_bits(n: usize, seed: u64) -> Vec<u8> {
        let mut rng = rng_from_seed(seed);
        (0..n).map(|_| rng.random_range(0..2u8)).collect()
    }

    fn to_llr(bits: &[u8], mag: f64) -> Vec<f64> {
        bits.iter().map(|&b| if b == 0 { mag } else { -mag }).collect()
    }

    #[test]
    fn transform_is_involution() {
        let mut rng = rng_from_seed(2);
        let u: Vec<u8> = (0..64).map(|_| rng.random_range(0..2u8)).collect();
        let mut x = u.clone();
        polar_transform(&mut x);
        polar_transform(&mut x);
        assert_eq!(x, u);
    }

    #[test]
    fn dimensions_and_zero_word() {
        let c = code(1000);
        assert_eq!((c.mother_length(), c.info_positions().len()), (1024, 111));
        let x = c.encode(&[0; 100]).unwrap();
        assert_eq!(x.len(), 1000);
        assert!(x.iter().all(|&b| b == 0));
        let c = code(500);
        assert_eq!(c.mother_length(), 512);
        assert_eq!(c.encode(&random_bits(100, 1)).unwrap().len(), 500);
        let order = parse_reliability(NR_POLAR_RELIABILITY).unwrap();
        assert!(PolarCode::new(100, 100, &order, Crc::nr_crc11(), 128).is_err());
        assert!(c.encode(&[0; 10]).is_err());
    }

    #[test]
    fn noiseless_round_trip_at_list_one() {
        for n_c in [500, 1000] {
            let c = code(n_c);
            for s in 0..100 {
                let u = random_bits(100, s);
                let (r, stats) = c.decode(&to_llr(&c.encode(&u).unwrap(), 10.0)).unwrap();
                assert_eq!(r, DecodeResult::Valid(u));
                assert_eq!(stats.max_list_used, 1);
            }
        }
    }

    #[test]
    fn list_decoding_beats_sc_at_low_snr() {
        // BPSK over AWGN near the waterfall: SCL-8 should fix some SC failures.
        let c = code(500);
        let mut rng = rng_from_seed(11);
        let sigma: f64 = 1.1;
        let (mut sc_ok, mut scl_ok) = (0, 0);
        for s in 0..200 {
            let u = random_bits(100, 1000 + s);
            let x = c.encode(&u).unwrap();
            let llr: Vec<f64> = x
                .iter()
                .map(|&b| {
                    let y = (1.0 - 2.0 * b as f64) + sigma * rng.sample::<f64, _>(rand_distr::StandardNormal);
                    2.0 * y / (sigma * sigma)
                })
                .collect();
            sc_ok += (c.decode_list_size(&llr, 1).unwrap().as_deref() == Some(&u[..])) as usize;
            scl_ok += (c.decode_list_size(&llr, 8).unwrap().as_deref() == Some(&u[..])) as usize;
        }
        assert!(scl_ok > sc_ok, "sc {sc_ok} scl {scl_ok}");
    }

    #[test]
    fn reliability_parser_rejects_non_permutation() {
        assert!(parse_reliability("0 1 1").is_err());
        assert_eq!(parse_reliability("# c\n2 0\n1").unwrap(), [2, 0, 1]);
    }
}
