//! Sufficient-statistic sampling for i.i.d. Rayleigh channels.
//!
//! The MMSE detector only sees `G = Hᴴ H` and `z = Hᴴ y`. Writing the thin
//! QR decomposition `H = Q R`, the Bartlett decomposition gives `R` upper
//! triangular with `|R_ii|² ~ Gamma(Nr − i, 1)` and `R_ij ~ CN(0, 1)` for
//! `i < j`, all independent. With `T = Rᴴ`:
//!
//! - `G = T Tᴴ`
//! - `z = G x + Rᴴ Qᴴ n = T (Tᴴ x + σ w)`, `w ~ CN(0, I)` independent of `T`.
//!
//! This reproduces the joint law of `(G, z)` exactly at `O(Nt³)` cost instead
//! of `O(Nr Nt²)`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::channel::complex_normal;
use super::mmse::{caxpy, MmseOutput, MmseWorkspace};
use super::PhyError;

/// One Gram-domain channel realization.
#[derive(Debug, Clone)]
pub struct GramChannel {
    nt: usize,
    /// Lower-triangular factor `T`, split column-major: `(i, j)` at `j·nt + i`.
    t_re: Vec<f64>,
    t_im: Vec<f64>,
}

impl GramChannel {
    pub fn draw<R: Rng + ?Sized>(nt: usize, nr: usize, rng: &mut R) -> Result<Self, PhyError> {
        if nt == 0 || nr < nt {
            return Err(PhyError::InvalidAntennas(format!("Nt={nt}, Nr={nr}")));
        }
        let mut t_re = vec![0.0; nt * nt];
        let mut t_im = vec![0.0; nt * nt];
        for i in 0..nt {
            for j in 0..i {
                let v = complex_normal(rng);
                t_re[j * nt + i] = v.re;
                t_im[j * nt + i] = v.im;
            }
            let shape = (nr - i) as f64;
            let g = Gamma::new(shape, 1.0).map_err(|_| PhyError::InvalidAntennas(format!("shape {shape}")))?;
            let v: f64 = g.sample(rng);
            t_re[i * nt + i] = v.sqrt();
        }
        Ok(GramChannel { nt, t_re, t_im })
    }

    pub fn tx_antennas(&self) -> usize {
        self.nt
    }

    /// Entry `(i, j)` of the factor `T`.
    pub fn factor_entry(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.t_re[j * self.nt + i], self.t_im[j * self.nt + i])
    }

    fn fill_gram(&self, re: &mut [f64], im: &mut [f64]) {
        let nt = self.nt;
        // G += T[:, k] T[:, k]ᴴ, one lower column at a time.
        for k in 0..nt {
            let src = k * nt;
            for j in k..nt {
                let s = Complex64::new(self.t_re[src + j], -self.t_im[src + j]);
                let dst = j * nt;
                caxpy(
                    &mut re[dst + j..dst + nt],
                    &mut im[dst + j..dst + nt],
                    &self.t_re[src + j..src + nt],
                    &self.t_im[src + j..src + nt],
                    s,
                );
            }
        }
    }

    /// Lower triangle of `G = T Tᴴ`, row-major `nt × nt`.
    pub fn gram_lower(&self) -> Vec<Complex64> {
        let nt = self.nt;
        let mut re = vec![0.0; nt * nt];
        let mut im = vec![0.0; nt * nt];
        self.fill_gram(&mut re, &mut im);
        let mut out = vec![Complex64::default(); nt * nt];
        for i in 0..nt {
            for j in 0..=i {
                out[i * nt + j] = Complex64::new(re[j * nt + i], im[j * nt + i]);
            }
        }
        out
    }

    /// Matched-filter output `Hᴴ y` for transmitted vector `x`.
    pub fn matched<R: Rng + ?Sized>(&self, x: &[Complex64], sigma2: f64, add_noise: bool, rng: &mut R) -> Vec<Complex64> {
        let nt = self.nt;
        let sigma = sigma2.sqrt();
        // v = Tᴴ x + σ w
        let mut v: Vec<Complex64> = (0..nt)
            .map(|j| {
                let col = j * nt;
                (j..nt)
                    .map(|i| Complex64::new(self.t_re[col + i], -self.t_im[col + i]) * x[i])
                    .sum()
            })
            .collect();
        if add_noise {
            for vj in v.iter_mut() {
                *vj += complex_normal(rng) * sigma;
            }
        }
        let mut z_re = vec![0.0; nt];
        let mut z_im = vec![0.0; nt];
        for (j, &vj) in v.iter().enumerate() {
            let col = j * nt;
            caxpy(
                &mut z_re[j..],
                &mut z_im[j..],
                &self.t_re[col + j..col + nt],
                &self.t_im[col + j..col + nt],
                vj,
            );
        }
        z_re.into_iter().zip(z_im).map(|(r, i)| Complex64::new(r, i)).collect()
    }

    /// MMSE detection given the matched-filter output of this realization.
    pub fn detect(&self, ws: &mut MmseWorkspace, matched: &[Complex64], sigma2: f64) -> Result<MmseOutput, PhyError> {
        if ws.tx_antennas() != self.nt {
            *ws = MmseWorkspace::new(self.nt);
        }
        let (re, im) = ws.gram_buffers();
        self.fill_gram(re, im);
        ws.solve_loaded(matched, sigma2)
    }
}
