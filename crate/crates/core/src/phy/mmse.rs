//! Linear MMSE detection with per-layer post-equalization SINR.
//!
//! With `A = Hᴴ H + σ² I = L Lᴴ` (Cholesky), the detector output is
//! `x̂ = A⁻¹ Hᴴ y` and the unbiased SINR of layer `l` is
//! `1 / (σ² [A⁻¹]_ll) − 1`, since `(I + Hᴴ H / σ²)⁻¹ = σ² A⁻¹`.
//!
//! The workspace keeps `A` as split real/imaginary column-major lower
//! triangles so that every inner loop is a contiguous axpy.

use num_complex::Complex64;

use super::channel::ChannelRealization;
use super::PhyError;

#[derive(Debug, Clone, PartialEq)]
pub struct MmseOutput {
    /// Biased MMSE estimates `x̂ = (Hᴴ H + σ² I)⁻¹ Hᴴ y`.
    pub symbols: Vec<Complex64>,
    /// Post-equalization SINR of each layer.
    pub sinr: Vec<f64>,
}

impl MmseOutput {
    /// Estimates rescaled by the per-layer bias `sinr / (1 + sinr)`, so that
    /// `x̃ = x + e` with `E|e|² = 1 / sinr`.
    pub fn unbiased(&self) -> Vec<Complex64> {
        self.symbols
            .iter()
            .zip(&self.sinr)
            .map(|(&x, &s)| x * ((1.0 + s) / s))
            .collect()
    }
}

/// `dst[t] += src[t] * s` on split complex slices.
#[inline]
pub(crate) fn caxpy(dst_re: &mut [f64], dst_im: &mut [f64], src_re: &[f64], src_im: &[f64], s: Complex64) {
    for (((dr, di), &a), &b) in dst_re.iter_mut().zip(dst_im.iter_mut()).zip(src_re).zip(src_im) {
        *dr += a * s.re - b * s.im;
        *di += a * s.im + b * s.re;
    }
}

/// `dst[t] += conj(src[t]) * s` on split complex slices.
#[inline]
fn caxpy_conj(dst_re: &mut [f64], dst_im: &mut [f64], src_re: &[f64], src_im: &[f64], s: Complex64) {
    for (((dr, di), &a), &b) in dst_re.iter_mut().zip(dst_im.iter_mut()).zip(src_re).zip(src_im) {
        *dr += a * s.re + b * s.im;
        *di += a * s.im - b * s.re;
    }
}

/// Scratch buffers for repeated detection at a fixed layer count.
#[derive(Debug, Clone)]
pub struct MmseWorkspace {
    nt: usize,
    /// Column-major lower triangle of `A`; overwritten by its Cholesky factor.
    a_re: Vec<f64>,
    a_im: Vec<f64>,
    x_re: Vec<f64>,
    x_im: Vec<f64>,
    row_re: Vec<f64>,
    row_im: Vec<f64>,
}

impl MmseWorkspace {
    pub fn new(nt: usize) -> Self {
        MmseWorkspace {
            nt,
            a_re: vec![0.0; nt * nt],
            a_im: vec![0.0; nt * nt],
            x_re: vec![0.0; nt],
            x_im: vec![0.0; nt],
            row_re: vec![0.0; nt],
            row_im: vec![0.0; nt],
        }
    }

    pub fn tx_antennas(&self) -> usize {
        self.nt
    }

    /// Mutable access to the Gram buffers (column-major lower triangle,
    /// entry `(i, j)` with `i ≥ j` at `j·nt + i`), zeroed.
    pub(crate) fn gram_buffers(&mut self) -> (&mut [f64], &mut [f64]) {
        self.a_re.fill(0.0);
        self.a_im.fill(0.0);
        (&mut self.a_re, &mut self.a_im)
    }

    /// Detection from the sufficient statistics: the lower triangle of the
    /// Gram matrix `Hᴴ H` (row-major `nt × nt`) and the matched-filter output
    /// `Hᴴ y`.
    pub fn detect_from_gram(
        &mut self,
        gram_lower: &[Complex64],
        matched: &[Complex64],
        sigma2: f64,
    ) -> Result<MmseOutput, PhyError> {
        let nt = self.nt;
        if gram_lower.len() != nt * nt {
            return Err(PhyError::DimensionMismatch {
                expected: nt * nt,
                actual: gram_lower.len(),
            });
        }
        let (re, im) = self.gram_buffers();
        for i in 0..nt {
            for j in 0..=i {
                re[j * nt + i] = gram_lower[i * nt + j].re;
                im[j * nt + i] = gram_lower[i * nt + j].im;
            }
        }
        self.solve_loaded(matched, sigma2)
    }

    pub fn detect(&mut self, y: &[Complex64], ch: &ChannelRealization) -> Result<MmseOutput, PhyError> {
        if ch.tx_antennas() != self.nt {
            *self = MmseWorkspace::new(ch.tx_antennas());
        }
        if y.len() != ch.rx_antennas() {
            return Err(PhyError::DimensionMismatch {
                expected: ch.rx_antennas(),
                actual: y.len(),
            });
        }
        let nt = self.nt;
        self.a_re.fill(0.0);
        self.a_im.fill(0.0);
        let mut hy = vec![Complex64::default(); nt];
        for (row, &yr) in ch.matrix().chunks_exact(nt).zip(y) {
            for (k, h) in row.iter().enumerate() {
                self.row_re[k] = h.re;
                self.row_im[k] = h.im;
                hy[k] += h.conj() * yr;
            }
            // Column j of the Gram lower triangle: G[i][j] += conj(h_i) h_j.
            for j in 0..nt {
                let s = Complex64::new(self.row_re[j], self.row_im[j]);
                let col = j * nt;
                caxpy_conj(
                    &mut self.a_re[col + j..col + nt],
                    &mut self.a_im[col + j..col + nt],
                    &self.row_re[j..],
                    &self.row_im[j..],
                    s,
                );
            }
        }
        self.solve_loaded(&hy, ch.noise_var())
    }

    /// Solves with the Gram matrix already in the workspace buffers.
    pub(crate) fn solve_loaded(&mut self, matched: &[Complex64], sigma2: f64) -> Result<MmseOutput, PhyError> {
        let nt = self.nt;
        if matched.len() != nt {
            return Err(PhyError::DimensionMismatch {
                expected: nt,
                actual: matched.len(),
            });
        }
        if !(sigma2 > 0.0) {
            return Err(PhyError::NonPositiveNoise(sigma2));
        }
        for i in 0..nt {
            self.a_re[i * nt + i] += sigma2;
        }
        self.cholesky()?;

        let symbols = self.substitute(matched);

        // diag(A⁻¹)_c = ‖L⁻¹ e_c‖², by forward substitution per column.
        let mut sinr = vec![0.0; nt];
        for (c, s) in sinr.iter_mut().enumerate() {
            self.x_re[c..].fill(0.0);
            self.x_im[c..].fill(0.0);
            self.x_re[c] = 1.0;
            let mut d = 0.0;
            for k in c..nt {
                let lkk = self.a_re[k * nt + k];
                let xk = Complex64::new(self.x_re[k] / lkk, self.x_im[k] / lkk);
                d += xk.norm_sqr();
                let col = k * nt;
                caxpy(
                    &mut self.x_re[k + 1..],
                    &mut self.x_im[k + 1..],
                    &self.a_re[col + k + 1..col + nt],
                    &self.a_im[col + k + 1..col + nt],
                    -xk,
                );
            }
            *s = (1.0 / (sigma2 * d) - 1.0).max(f64::MIN_POSITIVE);
        }
        Ok(MmseOutput { symbols, sinr })
    }

    /// Right-looking column Cholesky on the split lower triangle.
    fn cholesky(&mut self) -> Result<(), PhyError> {
        let nt = self.nt;
        for j in 0..nt {
            let col = j * nt;
            let d = self.a_re[col + j];
            if !(d > 0.0) || !d.is_finite() {
                return Err(PhyError::Singular);
            }
            let ljj = d.sqrt();
            self.a_re[col + j] = ljj;
            self.a_im[col + j] = 0.0;
            let inv = 1.0 / ljj;
            for v in &mut self.a_re[col + j + 1..col + nt] {
                *v *= inv;
            }
            for v in &mut self.a_im[col + j + 1..col + nt] {
                *v *= inv;
            }
            let (head_re, tail_re) = self.a_re.split_at_mut((j + 1) * nt);
            let (head_im, tail_im) = self.a_im.split_at_mut((j + 1) * nt);
            let lj_re = &head_re[col..col + nt];
            let lj_im = &head_im[col..col + nt];
            for k in j + 1..nt {
                // A[i][k] -= L[i][j] conj(L[k][j]) for i ≥ k.
                let s = -Complex64::new(lj_re[k], -lj_im[k]);
                let dst = (k - j - 1) * nt;
                caxpy(
                    &mut tail_re[dst + k..dst + nt],
                    &mut tail_im[dst + k..dst + nt],
                    &lj_re[k..],
                    &lj_im[k..],
                    s,
                );
            }
        }
        Ok(())
    }

    /// Solves `L Lᴴ x = b` with the factor in the workspace.
    fn substitute(&mut self, b: &[Complex64]) -> Vec<Complex64> {
        let nt = self.nt;
        for (k, v) in b.iter().enumerate() {
            self.x_re[k] = v.re;
            self.x_im[k] = v.im;
        }
        for k in 0..nt {
            let col = k * nt;
            let lkk = self.a_re[col + k];
            let xk = Complex64::new(self.x_re[k] / lkk, self.x_im[k] / lkk);
            self.x_re[k] = xk.re;
            self.x_im[k] = xk.im;
            caxpy(
                &mut self.x_re[k + 1..],
                &mut self.x_im[k + 1..],
                &self.a_re[col + k + 1..col + nt],
                &self.a_im[col + k + 1..col + nt],
                -xk,
            );
        }
        let mut out = vec![Complex64::default(); nt];
        for i in (0..nt).rev() {
            let col = i * nt;
            let mut s = Complex64::default();
            for k in i + 1..nt {
                s += Complex64::new(self.a_re[col + k], -self.a_im[col + k]) * out[k];
            }
            let z = Complex64::new(self.x_re[i], self.x_im[i]);
            out[i] = (z - s) / self.a_re[col + i];
        }
        out
    }
}

/// MMSE detection of one received vector.
pub fn mmse_detect(y: &[Complex64], ch: &ChannelRealization) -> Result<MmseOutput, PhyError> {
    MmseWorkspace::new(ch.tx_antennas()).detect(y, ch)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_formula() {
        let h = Complex64::new(0.6, -1.1);
        let y = Complex64::new(-0.3, 0.9);
        let s2 = 0.4;
        let ch = ChannelRealization::new(1, 1, vec![h], s2).unwrap();
        let out = mmse_detect(&[y], &ch).unwrap();
        let expect = h.conj() * y / (h.norm_sqr() + s2);
        assert!((out.symbols[0] - expect).norm() < 1e-14);
        assert!((out.sinr[0] - h.norm_sqr() / s2).abs() < 1e-12);
    }

    #[test]
    fn identity_channel_low_noise() {
        let n = 3;
        let mut h = vec![Complex64::default(); n * n];
        for i in 0..n {
            h[i * n + i] = Complex64::new(1.0, 0.0);
        }
        let ch = ChannelRealization::new(n, n, h, 1e-12).unwrap();
        let y = vec![Complex64::new(0.3, -0.2), Complex64::new(-1.0, 0.5), Complex64::new(0.7, 0.7)];
        let out = mmse_detect(&y, &ch).unwrap();
        for (a, b) in out.symbols.iter().zip(&y) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn gram_entry_point_matches_channel_entry_point() {
        let h: Vec<Complex64> = (0..12)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let ch = ChannelRealization::new(4, 3, h.clone(), 0.2).unwrap();
        let y = vec![
            Complex64::new(0.1, 0.2),
            Complex64::new(-0.4, 1.0),
            Complex64::new(0.0, -0.3),
            Complex64::new(0.9, 0.5),
        ];
        let a = mmse_detect(&y, &ch).unwrap();
        let mut gram = vec![Complex64::default(); 9];
        let mut hy = vec![Complex64::default(); 3];
        for i in 0..3 {
            for r in 0..4 {
                hy[i] += h[r * 3 + i].conj() * y[r];
            }
            for j in 0..=i {
                gram[i * 3 + j] = (0..4).map(|r| h[r * 3 + i].conj() * h[r * 3 + j]).sum();
            }
        }
        let b = MmseWorkspace::new(3).detect_from_gram(&gram, &hy, 0.2).unwrap();
        for (x, y) in a.symbols.iter().zip(&b.symbols) {
            assert!((x - y).norm() < 1e-12);
        }
        for (x, y) in a.sinr.iter().zip(&b.sinr) {
            assert!((x - y).abs() < 1e-10 * x.abs());
        }
    }
}
