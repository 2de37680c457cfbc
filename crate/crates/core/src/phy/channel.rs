//! I.i.d. flat Rayleigh MIMO channel.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{MimoConfig, PhyError};

/// One channel realization `y = H x + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    nr: usize,
    nt: usize,
    /// Row-major `nr × nt`.
    h: Vec<Complex64>,
    sigma2: f64,
}

impl ChannelRealization {
    pub fn new(nr: usize, nt: usize, h: Vec<Complex64>, sigma2: f64) -> Result<Self, PhyError> {
        if h.len() != nr * nt || nr == 0 || nt == 0 {
            return Err(PhyError::DimensionMismatch {
                expected: nr * nt,
                actual: h.len(),
            });
        }
        if !(sigma2 > 0.0) {
            return Err(PhyError::NonPositiveNoise(sigma2));
        }
        Ok(ChannelRealization { nr, nt, h, sigma2 })
    }

    pub fn rx_antennas(&self) -> usize {
        self.nr
    }

    pub fn tx_antennas(&self) -> usize {
        self.nt
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.h
    }

    #[inline]
    pub fn entry(&self, r: usize, t: usize) -> Complex64 {
        self.h[r * self.nt + t]
    }

    pub fn noise_var(&self) -> f64 {
        self.sigma2
    }

    /// Noise-free channel output `H x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.h
            .chunks_exact(self.nt)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// A sample of `CN(0, 1)`.
#[inline]
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws `H` with i.i.d. `CN(0, 1)` entries.
pub fn draw_channel<R: Rng + ?Sized>(cfg: &MimoConfig, sigma2: f64, rng: &mut R) -> Result<ChannelRealization, PhyError> {
    let (nr, nt) = (cfg.rx_antennas, cfg.tx_antennas);
    let h = (0..nr * nt).map(|_| complex_normal(rng)).collect();
    ChannelRealization::new(nr, nt, h, sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixed_seed_is_deterministic() {
        let cfg = MimoConfig::new(4, 8, 4).unwrap();
        let a = draw_channel(&cfg, 0.1, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = draw_channel(&cfg, 0.1, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_noise() {
        assert!(matches!(
            ChannelRealization::new(1, 1, vec![Complex64::new(1.0, 0.0)], 0.0),
            Err(PhyError::NonPositiveNoise(_))
        ));
    }
}
