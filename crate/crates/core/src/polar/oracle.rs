//! Exhaustive-enumeration reference computations for small codes.
//!
//! These are deliberately naive: they enumerate `u` vectors, run the plain
//! transform and sum channel likelihoods. They share nothing with the
//! message-passing decoders beyond the transform itself.

use super::{polar_transform, rate_dematch, LlrVector, PolarCode, PolarError};

/// Largest mother length accepted by the enumeration oracles.
pub const MAX_ORACLE_LEN: usize = 16;

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let hi = a.max(b);
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

/// `ln P(y | x)` up to a constant shared by all `x`.
fn log_weight(x: &[u8], llrs: &[f64]) -> f64 {
    -x.iter()
        .zip(llrs)
        .filter(|(&b, _)| b == 1)
        .map(|(_, &l)| l)
        .sum::<f64>()
}

/// Exact marginal posterior LLR of each information bit, summing over all
/// `2^K` codewords.
pub fn exact_bit_posteriors(code: &PolarCode, llrs: &[f64]) -> Result<LlrVector, PolarError> {
    let (n, k) = (code.mother_len(), code.info_len());
    if n > MAX_ORACLE_LEN {
        return Err(PolarError::TooLargeForOracle { n, k });
    }
    if llrs.len() != code.target_len() {
        return Err(PolarError::LengthMismatch {
            expected: code.target_len(),
            actual: llrs.len(),
        });
    }
    let full = rate_dematch(llrs, n)?;
    let mut zero = vec![f64::NEG_INFINITY; k];
    let mut one = vec![f64::NEG_INFINITY; k];
    let mut u = vec![0u8; n];
    for m in 0u64..(1u64 << k) {
        u.fill(0);
        for (j, &p) in code.info_positions().iter().enumerate() {
            u[p] = ((m >> j) & 1) as u8;
        }
        let mut x = u.clone();
        polar_transform(&mut x);
        let w = log_weight(&x, &full);
        for j in 0..k {
            if (m >> j) & 1 == 0 {
                zero[j] = log_add(zero[j], w);
            } else {
                one[j] = log_add(one[j], w);
            }
        }
    }
    Ok(zero.iter().zip(&one).map(|(a, b)| a - b).collect())
}

/// Sequential bit-wise MAP decisions: bit `i` is decided from its exact
/// posterior given the hard decisions on bits `< i`, with every later bit
/// (frozen or not) treated as uniform. Frozen bits are set to 0.
///
/// Returns the decided `u` vector and the per-position LLRs.
pub fn sequential_bit_map(code: &PolarCode, llrs: &[f64]) -> Result<(Vec<u8>, Vec<f64>), PolarError> {
    let n = code.mother_len();
    if n > MAX_ORACLE_LEN {
        return Err(PolarError::TooLargeForOracle { n, k: code.info_len() });
    }
    if llrs.len() != code.target_len() {
        return Err(PolarError::LengthMismatch {
            expected: code.target_len(),
            actual: llrs.len(),
        });
    }
    let full = rate_dematch(llrs, n)?;
    let mut decided = vec![0u8; n];
    let mut out_llrs = vec![0.0; n];
    let mut u = vec![0u8; n];
    for i in 0..n {
        let free = n - i - 1;
        let mut acc = [f64::NEG_INFINITY; 2];
        for (bit, slot) in acc.iter_mut().enumerate() {
            for m in 0u64..(1u64 << free) {
                u[..i].copy_from_slice(&decided[..i]);
                u[i] = bit as u8;
                for j in 0..free {
                    u[i + 1 + j] = ((m >> j) & 1) as u8;
                }
                let mut x = u.clone();
                polar_transform(&mut x);
                *slot = log_add(*slot, log_weight(&x, &full));
            }
        }
        let llr = acc[0] - acc[1];
        out_llrs[i] = llr;
        decided[i] = if code.frozen_mask()[i] { 0 } else { u8::from(llr < 0.0) };
    }
    Ok((decided, out_llrs))
}
