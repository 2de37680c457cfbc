//! Soft cancellation (SCAN) decoding.
//!
//! SCAN runs the SC schedule over the factor graph but exchanges soft
//! messages in both directions: left-to-right messages (`alpha`, towards the
//! `u` side) and right-to-left messages (`beta`, towards the channel side).
//! Frozen leaves carry a saturated prior, information leaves a zero prior.
//! Right-subtree `beta` messages from the previous iteration feed the left
//! child updates, which is what makes more than one iteration useful.

use super::{rate_dematch, saturate, BoxPlus, LlrVector, PolarCode, PolarError, LLR_SATURATION};

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutput {
    /// Posterior LLRs of the information bits, in info-position order.
    pub info_llrs: LlrVector,
    /// Posterior LLRs of the code bits (channel LLR plus extrinsic).
    pub codebit_llrs: LlrVector,
    /// Extrinsic LLRs of the code bits.
    pub codebit_extrinsic: LlrVector,
}

#[derive(Debug, Clone)]
pub struct ScanDecoder {
    n: usize,
    log_n: usize,
    boxplus: BoxPlus,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<f64>>,
}

impl ScanDecoder {
    pub fn new(mother_len: usize, boxplus: BoxPlus) -> Self {
        let log_n = mother_len.trailing_zeros() as usize;
        ScanDecoder {
            n: mother_len,
            log_n,
            boxplus,
            alpha: vec![vec![0.0; mother_len]; log_n + 1],
            beta: vec![vec![0.0; mother_len]; log_n + 1],
        }
    }

    pub fn decode(
        &mut self,
        code: &PolarCode,
        llrs: &[f64],
        iterations: usize,
    ) -> Result<ScanOutput, PolarError> {
        if iterations == 0 {
            return Err(PolarError::ZeroIterations);
        }
        if llrs.len() != code.target_len() {
            return Err(PolarError::LengthMismatch {
                expected: code.target_len(),
                actual: llrs.len(),
            });
        }
        if code.mother_len() != self.n {
            *self = ScanDecoder::new(code.mother_len(), self.boxplus);
        }
        self.alpha[self.log_n] = rate_dematch(llrs, self.n)?;
        for level in self.beta.iter_mut().skip(1) {
            level.fill(0.0);
        }
        for (b, &f) in self.beta[0].iter_mut().zip(code.frozen_mask()) {
            *b = if f { LLR_SATURATION } else { 0.0 };
        }
        for _ in 0..iterations {
            self.node(self.log_n, 0);
        }

        let info_llrs = code
            .info_positions()
            .iter()
            .map(|&i| saturate(self.alpha[0][i] + self.beta[0][i]))
            .collect();
        let t = code.target_len();
        let root_alpha = &self.alpha[self.log_n];
        let root_beta = &self.beta[self.log_n];
        let codebit_llrs = (0..t).map(|j| saturate(root_alpha[j] + root_beta[j])).collect();
        let codebit_extrinsic = root_beta[..t].iter().map(|&b| saturate(b)).collect();
        Ok(ScanOutput {
            info_llrs,
            codebit_llrs,
            codebit_extrinsic,
        })
    }

    fn node(&mut self, level: usize, off: usize) {
        if level == 0 {
            return;
        }
        let f = self.boxplus;
        let h = 1usize << (level - 1);
        {
            let (lower, upper) = self.alpha.split_at_mut(level);
            let parent = &upper[0][off..off + 2 * h];
            let child = &mut lower[level - 1][off..off + h];
            let right_beta = &self.beta[level - 1][off + h..off + 2 * h];
            for i in 0..h {
                child[i] = f.apply(parent[i], parent[i + h] + right_beta[i]);
            }
        }
        self.node(level - 1, off);
        {
            let (lower, upper) = self.alpha.split_at_mut(level);
            let parent = &upper[0][off..off + 2 * h];
            let child = &mut lower[level - 1][off + h..off + 2 * h];
            let left_beta = &self.beta[level - 1][off..off + h];
            for i in 0..h {
                child[i] = parent[i + h] + f.apply(parent[i], left_beta[i]);
            }
        }
        self.node(level - 1, off + h);
        {
            let parent = &self.alpha[level][off..off + 2 * h];
            let (lower, upper) = self.beta.split_at_mut(level);
            let child = &lower[level - 1][off..off + 2 * h];
            let out = &mut upper[0][off..off + 2 * h];
            for i in 0..h {
                let bl = child[i];
                let br = child[h + i];
                out[i] = f.apply(bl, br + parent[h + i]);
                out[h + i] = br + f.apply(bl, parent[i]);
            }
        }
    }
}

/// SCAN decoding of `llrs` (length `target_len`) for `iterations` passes.
pub fn soft_decode(
    code: &PolarCode,
    llrs: &[f64],
    iterations: usize,
    boxplus: BoxPlus,
) -> Result<ScanOutput, PolarError> {
    ScanDecoder::new(code.mother_len(), boxplus).decode(code, llrs, iterations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_k1_info_llr_is_sum() {
        let code = PolarCode::new(2, 1, 0.0).unwrap();
        let out = soft_decode(&code, &[0.7, -1.9], 1, BoxPlus::MinSum).unwrap();
        assert!((out.info_llrs[0] - (0.7 - 1.9)).abs() < 1e-12);
        // Both code bits equal the info bit.
        assert!((out.codebit_llrs[0] - (0.7 - 1.9)).abs() < 1e-12);
        assert!((out.codebit_llrs[1] - (0.7 - 1.9)).abs() < 1e-12);
        assert!((out.codebit_extrinsic[0] + 1.9).abs() < 1e-12);
    }

    #[test]
    fn n2_magnitude_monotone_in_scale() {
        let code = PolarCode::new(2, 1, 0.0).unwrap();
        let mut prev = 0.0;
        for scale in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let out = soft_decode(&code, &[scale * 0.4, scale * 1.1], 1, BoxPlus::MinSum).unwrap();
            let mag = out.info_llrs[0].abs();
            assert!(mag >= prev);
            prev = mag;
        }
        // Rate-1 N=2: the second bit combines both observations through a
        // g-node, the first through an f-node.
        let code = PolarCode::new(2, 2, 0.0).unwrap();
        let mut prev = [0.0, 0.0];
        for scale in [0.5, 1.0, 2.0, 4.0] {
            let out = soft_decode(&code, &[scale * 0.4, -scale * 1.1], 1, BoxPlus::MinSum).unwrap();
            for (p, v) in prev.iter_mut().zip(out.info_llrs.iter()) {
                assert!(v.abs() >= *p);
                *p = v.abs();
            }
        }
    }

    #[test]
    fn rejects_zero_iterations() {
        let code = PolarCode::new(4, 2, 0.0).unwrap();
        assert_eq!(
            soft_decode(&code, &[1.0; 4], 0, BoxPlus::MinSum),
            Err(PolarError::ZeroIterations)
        );
    }

    #[test]
    fn noiseless_signs() {
        let code = PolarCode::construct(64, 29, 60, 1.0).unwrap();
        let info: Vec<u8> = (0..29).map(|i| ((i * 7 + 3) % 5 < 2) as u8).collect();
        let x = code.encode(&info).unwrap();
        let llrs: Vec<f64> = x.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
        for iters in 1..=3 {
            let out = soft_decode(&code, &llrs, iters, BoxPlus::MinSum).unwrap();
            assert_eq!(out.info_llrs.hard_decisions(), info);
            assert_eq!(out.codebit_llrs.hard_decisions(), x);
        }
    }
}
