//! Polar component codes.
//!
//! A [`PolarCode`] bundles the mother length `N`, the information set chosen
//! by Gaussian-approximation density evolution, and a shortening target
//! length. The codec operations live in submodules:
//!
//! - [`construction`]: synthetic-channel reliability ordering.
//! - [`sc`]: hard-output successive cancellation decoding.
//! - [`scan`]: soft-output soft cancellation (SCAN) decoding.
//! - [`oracle`]: exhaustive posterior computations used to check the decoders.
//!
//! All LLRs follow the convention `log P(bit = 0) / P(bit = 1)`.

pub mod construction;
pub mod oracle;
pub mod sc;
pub mod scan;

use std::ops::{Deref, DerefMut};

use thiserror::Error;

pub use construction::DEFAULT_DESIGN_SNR_DB;
pub use oracle::{exact_bit_posteriors, sequential_bit_map};
pub use sc::{sc_decode, ScOutput};
pub use scan::{soft_decode, ScanOutput};

/// Magnitude used in place of an infinite LLR (known bits, shortened
/// positions, frozen priors).
pub const LLR_SATURATION: f64 = 300.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarError {
    #[error("mother length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid dimensions: N={n}, K={k}, target={target}")]
    InvalidDimensions { n: usize, k: usize, target: usize },
    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("target length {target} exceeds mother length {n}")]
    TargetTooLong { target: usize, n: usize },
    #[error("code too large for exhaustive enumeration (N={n}, K={k})")]
    TooLargeForOracle { n: usize, k: usize },
    #[error("iteration count must be at least 1")]
    ZeroIterations,
    #[error("design SNR must be finite")]
    InvalidDesign,
}

/// Check-node (f-node) update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoxPlus {
    /// `sign(a) sign(b) min(|a|, |b|)`.
    #[default]
    MinSum,
    /// `2 atanh(tanh(a/2) tanh(b/2))`, evaluated in a numerically stable form.
    Exact,
}

impl BoxPlus {
    #[inline]
    pub fn apply(self, a: f64, b: f64) -> f64 {
        let ms = a.signum() * b.signum() * a.abs().min(b.abs());
        match self {
            BoxPlus::MinSum => {
                if a == 0.0 || b == 0.0 {
                    0.0
                } else {
                    ms
                }
            }
            BoxPlus::Exact => {
                if a == 0.0 || b == 0.0 {
                    return 0.0;
                }
                ms + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
            }
        }
    }
}

/// A sequence of log-likelihood ratios.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    pub fn new(values: Vec<f64>) -> Self {
        LlrVector(values)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Hard decisions; an LLR of exactly zero decides 0.
    pub fn hard_decisions(&self) -> Vec<u8> {
        self.0.iter().map(|&l| hard_decision(l)).collect()
    }

    /// Clamp every value into `[-LLR_SATURATION, LLR_SATURATION]`.
    pub fn saturated(mut self) -> Self {
        for v in self.0.iter_mut() {
            *v = saturate(*v);
        }
        self
    }
}

impl Deref for LlrVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for LlrVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for LlrVector {
    fn from(v: Vec<f64>) -> Self {
        LlrVector(v)
    }
}

impl FromIterator<f64> for LlrVector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        LlrVector(iter.into_iter().collect())
    }
}

#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

#[inline]
pub(crate) fn saturate(llr: f64) -> f64 {
    if llr.is_nan() {
        0.0
    } else {
        llr.clamp(-LLR_SATURATION, LLR_SATURATION)
    }
}

/// A shortened polar code built from an `N`-point mother code.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCode {
    n: usize,
    k: usize,
    target_len: usize,
    design_snr_db: f64,
    frozen: Vec<bool>,
    info_positions: Vec<usize>,
}

impl PolarCode {
    /// Builds a code whose information set holds the `K` most reliable
    /// synthetic channels at the given design SNR. Positions at or beyond
    /// `target_len` are shortened and always frozen.
    ///
    /// `design_snr_db` is the SNR (Es/N0, BPSK) of the channel seen by each
    /// transmitted code bit; it does not depend on `K`, so the reliability
    /// order and hence the information sets are nested across `K`.
    pub fn construct(
        n: usize,
        k: usize,
        target_len: usize,
        design_snr_db: f64,
    ) -> Result<Self, PolarError> {
        if !n.is_power_of_two() {
            return Err(PolarError::NotPowerOfTwo(n));
        }
        if target_len > n {
            return Err(PolarError::TargetTooLong { target: target_len, n });
        }
        if k == 0 || k > target_len {
            return Err(PolarError::InvalidDimensions { n, k, target: target_len });
        }
        if !design_snr_db.is_finite() {
            return Err(PolarError::InvalidDesign);
        }
        let order = construction::reliability_order(n, target_len, design_snr_db);
        let mut frozen = vec![true; n];
        for &i in order.iter().filter(|&&i| i < target_len).take(k) {
            frozen[i] = false;
        }
        Ok(Self::from_frozen(n, target_len, design_snr_db, frozen))
    }

    /// Convenience constructor for an unshortened code (`target_len = N`).
    pub fn new(n: usize, k: usize, design_snr_db: f64) -> Result<Self, PolarError> {
        Self::construct(n, k, n, design_snr_db)
    }

    /// Builds a code from an explicit frozen set.
    pub fn with_frozen_set(
        n: usize,
        target_len: usize,
        frozen_set: &[usize],
    ) -> Result<Self, PolarError> {
        if !n.is_power_of_two() {
            return Err(PolarError::NotPowerOfTwo(n));
        }
        if target_len > n {
            return Err(PolarError::TargetTooLong { target: target_len, n });
        }
        let mut frozen = vec![false; n];
        for &i in frozen_set {
            if i >= n || frozen[i] {
                return Err(PolarError::InvalidDimensions {
                    n,
                    k: n.saturating_sub(frozen_set.len()),
                    target: target_len,
                });
            }
            frozen[i] = true;
        }
        let k = n - frozen_set.len();
        if k == 0 || k > target_len || frozen[target_len..].iter().any(|&f| !f) {
            return Err(PolarError::InvalidDimensions { n, k, target: target_len });
        }
        Ok(Self::from_frozen(n, target_len, f64::NAN, frozen))
    }

    fn from_frozen(n: usize, target_len: usize, design_snr_db: f64, frozen: Vec<bool>) -> Self {
        let info_positions: Vec<usize> = (0..n).filter(|&i| !frozen[i]).collect();
        PolarCode {
            n,
            k: info_positions.len(),
            target_len,
            design_snr_db,
            frozen,
            info_positions,
        }
    }

    pub fn mother_len(&self) -> usize {
        self.n
    }

    pub fn info_len(&self) -> usize {
        self.k
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    /// Design SNR in dB; NaN for codes built from an explicit frozen set.
    pub fn design_snr_db(&self) -> f64 {
        self.design_snr_db
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.target_len as f64
    }

    pub fn is_rate_one(&self) -> bool {
        self.k == self.target_len
    }

    pub fn log2_n(&self) -> usize {
        self.n.trailing_zeros() as usize
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn frozen_set(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.frozen[i]).collect()
    }

    /// Information positions in ascending index order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Encodes `K` information bits into a codeword of length `target_len`.
    pub fn encode(&self, info_bits: &[u8]) -> Result<Vec<u8>, PolarError> {
        if info_bits.len() != self.k {
            return Err(PolarError::LengthMismatch {
                expected: self.k,
                actual: info_bits.len(),
            });
        }
        let mut u = vec![0u8; self.n];
        for (&pos, &b) in self.info_positions.iter().zip(info_bits) {
            u[pos] = b & 1;
        }
        polar_transform(&mut u);
        u.truncate(self.target_len);
        Ok(u)
    }

    /// Systematic encoding: returns the codeword `x` (length `target_len`)
    /// with `x[A[i]] = info_bits[i]` on the information set `A`.
    ///
    /// Since `x_j = ⊕_{i ⊇ j} u_i` and frozen `u_i` are zero, `u_A` follows by
    /// back-substitution from the largest information index downwards.
    pub fn encode_systematic(&self, info_bits: &[u8]) -> Result<Vec<u8>, PolarError> {
        if info_bits.len() != self.k {
            return Err(PolarError::LengthMismatch {
                expected: self.k,
                actual: info_bits.len(),
            });
        }
        let mut u = vec![0u8; self.n];
        for (a, &j) in self.info_positions.iter().enumerate().rev() {
            let mut v = info_bits[a] & 1;
            for &i in &self.info_positions[a + 1..] {
                if i & j == j {
                    v ^= u[i];
                }
            }
            u[j] = v;
        }
        polar_transform(&mut u);
        u.truncate(self.target_len);
        Ok(u)
    }

    /// Code positions ordered information set first, then the remaining
    /// unshortened positions, each in ascending order. Placing codeword bit
    /// `order[r]` at row `r` puts the systematic bits on top.
    pub fn systematic_order(&self) -> Vec<usize> {
        let mut order = self.info_positions.clone();
        order.extend((0..self.target_len).filter(|&i| self.frozen[i]));
        order
    }

    /// Info bits of a (mother-length) `u` vector.
    pub fn extract_info(&self, u: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&i| u[i]).collect()
    }

    /// Membership test: re-encode the information bits carried by `codeword`
    /// and compare.
    pub fn is_codeword(&self, codeword: &[u8]) -> bool {
        if codeword.len() != self.target_len {
            return false;
        }
        let mut x = codeword.to_vec();
        x.resize(self.n, 0);
        // The transform is an involution.
        polar_transform(&mut x);
        self.frozen.iter().zip(&x).all(|(&f, &b)| !f || b == 0)
    }
}

/// In-place `x = u F^{⊗n}` over GF(2) with `F = [[1, 0], [1, 1]]`.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// Shortening: drop the last `N - target_len` positions.
pub fn rate_match<T: Clone>(mother: &[T], target_len: usize) -> Result<Vec<T>, PolarError> {
    if target_len > mother.len() {
        return Err(PolarError::TargetTooLong {
            target: target_len,
            n: mother.len(),
        });
    }
    Ok(mother[..target_len].to_vec())
}

/// Inverse of [`rate_match`] on LLRs: shortened positions are known zeros.
pub fn rate_dematch(llrs: &[f64], mother_len: usize) -> Result<Vec<f64>, PolarError> {
    if llrs.len() > mother_len {
        return Err(PolarError::TargetTooLong {
            target: llrs.len(),
            n: mother_len,
        });
    }
    let mut out = Vec::with_capacity(mother_len);
    out.extend(llrs.iter().map(|&l| saturate(l)));
    out.resize(mother_len, LLR_SATURATION);
    Ok(out)
}
