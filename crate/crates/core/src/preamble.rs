//! Preamble sets, message hashing and OMP activity detection on the PRACH.
//!
//! Dictionary columns have unit per-sample power; transmitters scale them by
//! the preamble amplitude. Columns are stored split into real and imaginary
//! parts, column-major, because the OMP correlation pass `A^H q` dominates
//! detection cost.

use alloc::vec;
use alloc::vec::Vec;

use sha2::{Digest, Sha256};

use crate::error::{check_len, invalid, Result};
use crate::math;
use crate::rng::{complex_normal, mix_seed, rng_from_seed};
use crate::signal::{Complex, ComplexVec};

/// Zadoff-Chu length used by every shipped configuration.
pub const ZC_LENGTH: usize = 139;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `x[m] = exp(−iπ·root·m(m+1)/len)` for odd `len` and `gcd(root, len) = 1`.
pub fn zadoff_chu(root: usize, len: usize) -> Result<ComplexVec> {
    if len == 0 || len.is_multiple_of(2) {
        return Err(invalid("Zadoff-Chu length must be odd"));
    }
    if root == 0 || gcd(root as u64, len as u64) != 1 {
        return Err(invalid("Zadoff-Chu root must be coprime with the length"));
    }
    // The phase is reduced modulo 2·len in integers to keep it exact.
    let modulus = 2 * len as u64;
    Ok((0..len as u64)
        .map(|m| {
            let e = (root as u64 % modulus) * ((m * (m + 1)) % modulus) % modulus;
            let (s, c) = math::sincos(-core::f64::consts::PI * e as f64 / len as f64);
            Complex::new(c, s)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreambleKind {
    GaussianIid,
    ZadoffChuRepeated,
}

/// `M` preamble columns of length `n_pre`, unit power per sample.
#[derive(Debug, Clone)]
pub struct PreambleDictionary {
    kind: PreambleKind,
    n_pre: usize,
    m: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    norm_sq: Vec<f64>,
}

impl PreambleDictionary {
    /// i.i.d. CN(0,1) columns; column `j` is drawn from its own stream
    /// `mix_seed(seed, j)` and rescaled to energy exactly `n_pre`, so smaller
    /// dictionaries are prefixes of larger ones.
    pub fn gaussian(m: usize, n_pre: usize, seed: u64) -> Result<Self> {
        if m == 0 || n_pre == 0 {
            return Err(invalid("dictionary needs M, n_pre > 0"));
        }
        let mut cols = Vec::with_capacity(m);
        for j in 0..m {
            let mut rng = rng_from_seed(mix_seed(seed, j as u64));
            let mut col: ComplexVec = (0..n_pre).map(|_| complex_normal(&mut rng, 1.0)).collect();
            let e = col.energy();
            col.scale(math::sqrt(n_pre as f64 / e));
            cols.push(col);
        }
        Ok(Self::from_columns(PreambleKind::GaussianIid, n_pre, &cols))
    }

    /// Roots `1..=m` of length-139 Zadoff-Chu sequences, each repeated
    /// `reps` times.
    pub fn zadoff_chu(m: usize, reps: usize) -> Result<Self> {
        if m == 0 || m >= ZC_LENGTH || reps == 0 {
            return Err(invalid("Zadoff-Chu dictionary supports 1..=138 roots and reps > 0"));
        }
        let n_pre = ZC_LENGTH * reps;
        let mut cols = Vec::with_capacity(m);
        for root in 1..=m {
            let base = zadoff_chu(root, ZC_LENGTH)?;
            let col: ComplexVec = base.iter().copied().cycle().take(n_pre).collect();
            cols.push(col);
        }
        Ok(Self::from_columns(PreambleKind::ZadoffChuRepeated, n_pre, &cols))
    }

    fn from_columns(kind: PreambleKind, n_pre: usize, cols: &[ComplexVec]) -> Self {
        let mut re = Vec::with_capacity(cols.len() * n_pre);
        let mut im = Vec::with_capacity(cols.len() * n_pre);
        let mut norm_sq = Vec::with_capacity(cols.len());
        for c in cols {
            re.extend(c.iter().map(|z| z.re));
            im.extend(c.iter().map(|z| z.im));
            norm_sq.push(c.energy());
        }
        PreambleDictionary { kind, n_pre, m: cols.len(), re, im, norm_sq }
    }

    pub fn kind(&self) -> PreambleKind {
        self.kind
    }

    pub fn n_pre(&self) -> usize {
        self.n_pre
    }

    /// Number of preambles `M`.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn norm_sq(&self, j: usize) -> f64 {
        self.norm_sq[j]
    }

    pub fn column(&self, j: usize) -> ComplexVec {
        let r = j * self.n_pre..(j + 1) * self.n_pre;
        self.re[r.clone()].iter().zip(&self.im[r]).map(|(&a, &b)| Complex::new(a, b)).collect()
    }

    /// `y += scale · a_j`.
    pub fn add_column(&self, j: usize, scale: Complex, y: &mut [Complex]) {
        let r = j * self.n_pre..(j + 1) * self.n_pre;
        for ((o, &a), &b) in y.iter_mut().zip(&self.re[r.clone()]).zip(&self.im[r]) {
            *o += scale * Complex::new(a, b);
        }
    }

    /// `A^H q` for `q` given as split real/imaginary parts.
    fn correlate_split(&self, q_re: &[f64], q_im: &[f64], out: &mut [Complex]) {
        let n = self.n_pre;
        for (j, o) in out.iter_mut().enumerate() {
            let a_re = &self.re[j * n..(j + 1) * n];
            let a_im = &self.im[j * n..(j + 1) * n];
            let (mut sr, mut si) = (0.0, 0.0);
            for t in 0..n {
                sr += a_re[t] * q_re[t] + a_im[t] * q_im[t];
                si += a_re[t] * q_im[t] - a_im[t] * q_re[t];
            }
            *o = Complex::new(sr, si);
        }
    }

    /// `A^H y`.
    pub fn correlate(&self, y: &[Complex]) -> Result<Vec<Complex>> {
        check_len(self.n_pre, y.len())?;
        let (q_re, q_im): (Vec<f64>, Vec<f64>) = y.iter().map(|z| (z.re, z.im)).unzip();
        let mut out = vec![Complex::new(0.0, 0.0); self.m];
        self.correlate_split(&q_re, &q_im, &mut out);
        Ok(out)
    }
}

/// Maps a message to a preamble index: SHA-256 over the bit length (u32,
/// big-endian) followed by the MSB-first packed bits; the first eight digest
/// bytes, read big-endian, reduced modulo `m`.
pub fn hash_message(bits: &[u8], m: usize) -> usize {
    if m <= 1 {
        return 0;
    }
    let mut h = Sha256::new();
    h.update((bits.len() as u32).to_be_bytes());
    let packed: Vec<u8> = bits
        .chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i))))
        .collect();
    h.update(&packed);
    let d = h.finalize();
    let mut head = [0u8; 8];
    head.copy_from_slice(&d[..8]);
    (u64::from_be_bytes(head) % m as u64) as usize
}

/// Default OMP list size `ceil(1.5·K_a)`, capped at `M` and at least 1.
pub fn default_list_size(k_a: usize, m: usize) -> usize {
    k_a.saturating_mul(3).div_ceil(2).clamp(1, m.max(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub index: usize,
    /// Least-squares coefficient per receive antenna.
    pub coeffs: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectionList {
    /// Selected preambles in selection order.
    pub entries: Vec<Detection>,
    /// Residual energy (summed over antennas) before the first round and
    /// after each accepted round.
    pub residual_energy: Vec<f64>,
    /// Columns discarded as linearly dependent on the selected set.
    pub dropped: Vec<usize>,
}

impl DetectionList {
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|d| d.index)
    }
}

/// Orthogonal matching pursuit over one or more antennas sharing the
/// dictionary. Each round picks the unselected column maximizing
/// `Σ_a |⟨r_a, a_j⟩|² / ‖a_j‖²`; the least-squares fit is maintained through
/// an incrementally orthonormalized basis of the selected columns.
pub fn omp_detect(y: &[&[Complex]], dict: &PreambleDictionary, l: usize) -> Result<DetectionList> {
    if y.is_empty() {
        return Err(invalid("OMP needs at least one antenna"));
    }
    if l > dict.len() {
        return Err(invalid("OMP list size exceeds the dictionary size"));
    }
    let n = dict.n_pre();
    for ya in y {
        check_len(n, ya.len())?;
    }
    let n_rx = y.len();
    let zero = Complex::new(0.0, 0.0);

    let mut resid: Vec<Vec<Complex>> = y.iter().map(|ya| ya.to_vec()).collect();
    let mut corr: Vec<Vec<Complex>> = y.iter().map(|ya| dict.correlate(ya)).collect::<Result<_>>()?;
    let mut available = vec![true; dict.len()];
    let mut basis: Vec<Vec<Complex>> = Vec::new();
    // Column t of the triangular factor: r[t][i] = q_i^H a_{s_t}.
    let mut r: Vec<Vec<Complex>> = Vec::new();
    // z[a][t] = q_t^H y_a.
    let mut z: Vec<Vec<Complex>> = vec![Vec::new(); n_rx];
    let mut selected = Vec::new();
    let mut out = DetectionList::default();
    out.residual_energy.push(resid.iter().map(|v| crate::signal::energy(v)).sum());
    let mut g = vec![zero; dict.len()];
    let mut q_re = vec![0.0; n];
    let mut q_im = vec![0.0; n];

    while selected.len() < l && basis.len() < n {
        let mut best = None;
        let mut best_score = -1.0;
        for j in 0..dict.len() {
            if !available[j] {
                continue;
            }
            let s: f64 = corr.iter().map(|c| c[j].norm_sqr()).sum::<f64>() / dict.norm_sq(j);
            if s > best_score {
                best_score = s;
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        available[j] = false;

        // Twice-iterated modified Gram-Schmidt.
        let mut v = dict.column(j);
        let mut rcol = vec![zero; basis.len() + 1];
        for _ in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let c = crate::signal::inner(&v, q);
                rcol[i] += c;
                crate::signal::axpy(-c, q, &mut v);
            }
        }
        let norm = math::sqrt(v.energy());
        if norm <= 1e-9 * math::sqrt(dict.norm_sq(j)) {
            log::debug!("omp: column {j} is dependent on the selected set, dropped");
            out.dropped.push(j);
            continue;
        }
        rcol[basis.len()] = Complex::new(norm, 0.0);
        v.scale(1.0 / norm);

        for ((qr, qi), s) in q_re.iter_mut().zip(q_im.iter_mut()).zip(v.iter()) {
            *qr = s.re;
            *qi = s.im;
        }
        dict.correlate_split(&q_re, &q_im, &mut g);
        for a in 0..n_rx {
            let beta = crate::signal::inner(&resid[a], &v);
            z[a].push(beta);
            crate::signal::axpy(-beta, &v, &mut resid[a]);
            for (c, gj) in corr[a].iter_mut().zip(&g) {
                *c -= beta * gj;
            }
        }
        basis.push(v.into_vec());
        r.push(rcol);
        selected.push(j);
        out.residual_energy.push(resid.iter().map(|v| crate::signal::energy(v)).sum());
        if out.residual_energy.last() == Some(&0.0) {
            break;
        }
    }

    // Back-substitution R x = z per antenna.
    let t_len = selected.len();
    let mut coeffs = vec![vec![zero; n_rx]; t_len];
    for a in 0..n_rx {
        for t in (0..t_len).rev() {
            let mut acc = z[a][t];
            for u in t + 1..t_len {
                acc -= r[u][t] * coeffs[u][a];
            }
            coeffs[t][a] = acc / r[t][t];
        }
    }
    out.entries = selected
        .into_iter()
        .zip(coeffs)
        .map(|(index, coeffs)| Detection { index, coeffs })
        .collect();
    Ok(out)
}
