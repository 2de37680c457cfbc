//! Gray-mapped square QAM and soft demapping.
//!
//! Bits of a symbol alternate between axes: even-indexed bits select the
//! in-phase amplitude, odd-indexed bits the quadrature amplitude. Along
//! each axis the first bit is the sign (0 is positive) and the remaining bits
//! select the magnitude in Gray order, so that `q = 2` maps `[0, 0]` to
//! `(1 + j)/√2` and `q = 4` matches the usual 16-QAM table.

use num_complex::Complex64;

use super::PhyError;

/// Soft demapping rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Demapper {
    #[default]
    MaxLog,
    /// Log-sum-exp over all constellation points.
    Exact,
}

#[derive(Debug, Clone)]
pub struct Constellation {
    q: usize,
    /// Per axis: amplitude (already scaled) of each axis label.
    amplitudes: Vec<f64>,
}

impl Constellation {
    pub fn new(q: usize) -> Result<Self, PhyError> {
        if q == 0 || q % 2 != 0 || q > 16 {
            return Err(PhyError::UnsupportedModulation(q));
        }
        let m = q / 2;
        let levels = 1usize << m;
        let scale = (3.0 / (2.0 * ((levels * levels) as f64 - 1.0))).sqrt();
        let amplitudes = (0..levels)
            .map(|label| {
                // Axis bit k of the label is stored at bit position k.
                let bit = |k: usize| ((label >> k) & 1) as f64;
                let mut val = 1.0;
                for k in (1..m).rev() {
                    val = (1u64 << (m - k)) as f64 - (1.0 - 2.0 * bit(k)) * val;
                }
                (1.0 - 2.0 * bit(0)) * val * scale
            })
            .collect();
        Ok(Constellation { q, amplitudes })
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.q
    }

    /// Axis labels and their amplitudes.
    pub fn axis_levels(&self) -> &[f64] {
        &self.amplitudes
    }

    /// All `2^q` points, indexed by the symbol label (bit `i` of the index is
    /// bit `i` of the symbol).
    pub fn points(&self) -> Vec<Complex64> {
        (0..1usize << self.q)
            .map(|label| {
                let bits: Vec<u8> = (0..self.q).map(|i| ((label >> i) & 1) as u8).collect();
                self.map_symbol(&bits)
            })
            .collect()
    }

    fn map_symbol(&self, bits: &[u8]) -> Complex64 {
        let m = self.q / 2;
        let mut i_label = 0usize;
        let mut q_label = 0usize;
        for k in 0..m {
            i_label |= ((bits[2 * k] & 1) as usize) << k;
            q_label |= ((bits[2 * k + 1] & 1) as usize) << k;
        }
        Complex64::new(self.amplitudes[i_label], self.amplitudes[q_label])
    }

    /// Maps `q·M` bits to `M` unit-energy symbols.
    pub fn modulate(&self, bits: &[u8]) -> Result<Vec<Complex64>, PhyError> {
        if bits.len() % self.q != 0 {
            return Err(PhyError::IndivisibleBits {
                bits: bits.len(),
                q: self.q,
            });
        }
        Ok(bits.chunks_exact(self.q).map(|c| self.map_symbol(c)).collect())
    }

    /// Per-bit LLRs of one symbol observed as `symbol = x + e`, with `e`
    /// circular Gaussian of variance `1 / sinr`.
    pub fn llrs(
        &self,
        symbol: Complex64,
        sinr: f64,
        demapper: Demapper,
        out: &mut [f64],
    ) -> Result<(), PhyError> {
        if !(sinr > 0.0) {
            return Err(PhyError::NonPositiveSinr(sinr));
        }
        debug_assert_eq!(out.len(), self.q);
        let m = self.q / 2;
        for (axis, value) in [symbol.re, symbol.im].into_iter().enumerate() {
            for k in 0..m {
                out[2 * k + axis] = self.axis_llr(value, k, sinr, demapper);
            }
        }
        Ok(())
    }

    fn axis_llr(&self, r: f64, k: usize, sinr: f64, demapper: Demapper) -> f64 {
        match demapper {
            Demapper::MaxLog => {
                let mut best = [f64::INFINITY; 2];
                for (label, &a) in self.amplitudes.iter().enumerate() {
                    let b = (label >> k) & 1;
                    let d = (r - a) * (r - a);
                    if d < best[b] {
                        best[b] = d;
                    }
                }
                (best[1] - best[0]) * sinr
            }
            Demapper::Exact => {
                let mut terms: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
                for (label, &a) in self.amplitudes.iter().enumerate() {
                    terms[(label >> k) & 1].push(-(r - a) * (r - a) * sinr);
                }
                log_sum_exp(&terms[0]) - log_sum_exp(&terms[1])
            }
        }
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi + v.iter().map(|x| (x - hi).exp()).sum::<f64>().ln()
}

/// Gray-mapped square QAM modulation of `bits`.
pub fn qam_modulate(bits: &[u8], q: usize) -> Result<Vec<Complex64>, PhyError> {
    Constellation::new(q)?.modulate(bits)
}

/// Soft demapping of one equalized symbol.
pub fn qam_llr(symbol: Complex64, post_sinr: f64, q: usize, demapper: Demapper) -> Result<Vec<f64>, PhyError> {
    let c = Constellation::new(q)?;
    let mut out = vec![0.0; q];
    c.llrs(symbol, post_sinr, demapper, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn qpsk_corner() {
        let s = qam_modulate(&[0, 0], 2).unwrap();
        assert!((s[0] - Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-15);
        let s = qam_modulate(&[1, 0], 2).unwrap();
        assert!((s[0] - Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn qam16_table() {
        // Axis labels (sign bit, magnitude bit): 00 -> 1, 01 -> 3, 10 -> -1, 11 -> -3.
        let s = 1.0 / 10f64.sqrt();
        let sym = |b: [u8; 4]| qam_modulate(&b, 4).unwrap()[0];
        assert!((sym([0, 0, 0, 0]) - Complex64::new(s, s)).norm() < 1e-15);
        assert!((sym([0, 0, 1, 0]) - Complex64::new(3.0 * s, s)).norm() < 1e-15);
        assert!((sym([1, 0, 1, 1]) - Complex64::new(-3.0 * s, 3.0 * s)).norm() < 1e-15);
        assert!((sym([1, 1, 0, 0]) - Complex64::new(-s, -s)).norm() < 1e-15);
    }

    #[test]
    fn unit_energy_and_gray_property() {
        for q in [2, 4, 6, 8, 10] {
            let c = Constellation::new(q).unwrap();
            let pts = c.points();
            let e = pts.iter().map(|p| p.norm_sqr()).sum::<f64>() / pts.len() as f64;
            assert!((e - 1.0).abs() < 1e-12, "q={q} energy {e}");
            let mut axis: Vec<(f64, usize)> =
                c.axis_levels().iter().enumerate().map(|(l, &a)| (a, l)).collect();
            axis.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in axis.windows(2) {
                assert_eq!((w[0].1 ^ w[1].1).count_ones(), 1, "q={q}");
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(qam_modulate(&[0, 1, 0], 2), Err(PhyError::IndivisibleBits { .. })));
        assert!(matches!(qam_modulate(&[0, 1, 0], 3), Err(PhyError::UnsupportedModulation(3))));
        assert!(matches!(
            qam_llr(Complex64::new(0.0, 0.0), 0.0, 2, Demapper::MaxLog),
            Err(PhyError::NonPositiveSinr(_))
        ));
    }

    #[test]
    fn origin_gives_zero_llrs_qpsk() {
        let l = qam_llr(Complex64::new(0.0, 0.0), 5.0, 2, Demapper::MaxLog).unwrap();
        assert_eq!(l, vec![0.0, 0.0]);
    }

    #[test]
    fn on_point_signs_match_label() {
        for q in [2, 4, 6] {
            let c = Constellation::new(q).unwrap();
            for (label, p) in c.points().into_iter().enumerate() {
                let l = qam_llr(p, 1e3, q, Demapper::MaxLog).unwrap();
                for (i, v) in l.iter().enumerate() {
                    let bit = (label >> i) & 1;
                    assert!(if bit == 0 { *v > 0.0 } else { *v < 0.0 });
                }
            }
        }
    }
}
