//! Successive cancellation decoding.

use super::{hard_decision, rate_dematch, BoxPlus, PolarCode, PolarError};

#[derive(Debug, Clone, PartialEq)]
pub struct ScOutput {
    /// Decoded information bits, in info-position order.
    pub info_bits: Vec<u8>,
    /// Full decoded `u` vector (frozen positions are 0).
    pub u: Vec<u8>,
    /// Re-encoded hard codeword, shortened to the target length.
    pub codeword: Vec<u8>,
}

/// Reusable SC decoder scratch space for one code length.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    n: usize,
    log_n: usize,
    boxplus: BoxPlus,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<u8>>,
}

impl ScDecoder {
    pub fn new(mother_len: usize, boxplus: BoxPlus) -> Self {
        let log_n = mother_len.trailing_zeros() as usize;
        ScDecoder {
            n: mother_len,
            log_n,
            boxplus,
            alpha: vec![vec![0.0; mother_len]; log_n + 1],
            beta: vec![vec![0u8; mother_len]; log_n + 1],
        }
    }

    pub fn decode(&mut self, code: &PolarCode, llrs: &[f64]) -> Result<ScOutput, PolarError> {
        if llrs.len() != code.target_len() {
            return Err(PolarError::LengthMismatch {
                expected: code.target_len(),
                actual: llrs.len(),
            });
        }
        if code.mother_len() != self.n {
            *self = ScDecoder::new(code.mother_len(), self.boxplus);
        }
        self.alpha[self.log_n] = rate_dematch(llrs, self.n)?;
        self.node(code.frozen_mask(), self.log_n, 0);
        let u = self.beta[0].clone();
        let mut codeword = self.beta[self.log_n].clone();
        codeword.truncate(code.target_len());
        Ok(ScOutput {
            info_bits: code.extract_info(&u),
            u,
            codeword,
        })
    }

    fn node(&mut self, frozen: &[bool], level: usize, off: usize) {
        if level == 0 {
            let bit = if frozen[off] { 0 } else { hard_decision(self.alpha[0][off]) };
            self.beta[0][off] = bit;
            return;
        }
        let h = 1usize << (level - 1);
        let (lower, upper) = self.alpha.split_at_mut(level);
        let parent = &upper[0][off..off + 2 * h];
        let child = &mut lower[level - 1][off..off + 2 * h];
        for i in 0..h {
            child[i] = self.boxplus.apply(parent[i], parent[i + h]);
        }
        self.node(frozen, level - 1, off);

        let (lower, upper) = self.alpha.split_at_mut(level);
        let parent = &upper[0][off..off + 2 * h];
        let child = &mut lower[level - 1][off..off + 2 * h];
        let left_bits = &self.beta[level - 1][off..off + h];
        for i in 0..h {
            let a = parent[i];
            child[h + i] = parent[h + i] + if left_bits[i] == 0 { a } else { -a };
        }
        self.node(frozen, level - 1, off + h);

        let (lower, upper) = self.beta.split_at_mut(level);
        let child = &lower[level - 1][off..off + 2 * h];
        let out = &mut upper[0][off..off + 2 * h];
        for i in 0..h {
            out[i] = child[i] ^ child[h + i];
            out[h + i] = child[h + i];
        }
    }
}

/// Successive cancellation decoding of `llrs` (length `target_len`).
pub fn sc_decode(code: &PolarCode, llrs: &[f64], boxplus: BoxPlus) -> Result<ScOutput, PolarError> {
    ScDecoder::new(code.mother_len(), boxplus).decode(code, llrs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::LLR_SATURATION;

    #[test]
    fn n2_k1_hand_evaluated() {
        let code = PolarCode::new(2, 1, 0.0).unwrap();
        // g-node with u0 = 0: -4 + -4 = -8 -> bit 1.
        let out = sc_decode(&code, &[-4.0, -4.0], BoxPlus::MinSum).unwrap();
        assert_eq!(out.info_bits, vec![1]);
        assert_eq!(out.u, vec![0, 1]);
        assert_eq!(out.codeword, vec![1, 1]);
    }

    #[test]
    fn zero_llr_ties_decide_zero() {
        let code = PolarCode::new(8, 4, 0.0).unwrap();
        let out = sc_decode(&code, &[0.0; 8], BoxPlus::MinSum).unwrap();
        assert_eq!(out.info_bits, vec![0; 4]);
        assert_eq!(out.codeword, vec![0; 8]);
    }

    #[test]
    fn noiseless_shortened_roundtrip() {
        let code = PolarCode::construct(32, 9, 23, 2.0).unwrap();
        let info = [1u8, 1, 0, 1, 0, 0, 1, 0, 1];
        let x = code.encode(&info).unwrap();
        let llrs: Vec<f64> = x.iter().map(|&b| if b == 0 { 10.0 } else { -10.0 }).collect();
        let out = sc_decode(&code, &llrs, BoxPlus::MinSum).unwrap();
        assert_eq!(out.info_bits, info);
        assert_eq!(out.codeword, x);
    }

    #[test]
    fn infinite_inputs_are_saturated() {
        let code = PolarCode::new(4, 2, 0.0).unwrap();
        let x = code.encode(&[1, 1]).unwrap();
        let llrs: Vec<f64> = x
            .iter()
            .map(|&b| if b == 0 { f64::INFINITY } else { f64::NEG_INFINITY })
            .collect();
        let out = sc_decode(&code, &llrs, BoxPlus::Exact).unwrap();
        assert_eq!(out.info_bits, vec![1, 1]);
        assert!(LLR_SATURATION.is_finite());
    }

    #[test]
    fn length_mismatch() {
        let code = PolarCode::new(8, 4, 0.0).unwrap();
        assert!(matches!(
            sc_decode(&code, &[1.0; 4], BoxPlus::MinSum),
            Err(PolarError::LengthMismatch { expected: 8, actual: 4 })
        ));
    }
}
