//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use st2d::phy::ChannelRealization;
use st2d::polar::PolarCode;
use st2d::st2d::CodewordTrellis;

/// Dense Gaussian elimination with partial pivoting: solves `A X = B` for
/// `B` with several right-hand columns. `a` is row-major `n × n`.
pub fn dense_solve(a: &[Complex64], b: &[Vec<Complex64>], n: usize) -> Vec<Vec<Complex64>> {
    let m = b.len();
    let mut aug: Vec<Vec<Complex64>> = (0..n)
        .map(|r| {
            let mut row = a[r * n..(r + 1) * n].to_vec();
            row.extend(b.iter().map(|col| col[r]));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| aug[i][c].norm().total_cmp(&aug[j][c].norm())).unwrap();
        aug.swap(c, p);
        let pivot = aug[c][c];
        for r in 0..n {
            if r != c {
                let f = aug[r][c] / pivot;
                for k in c..n + m {
                    let v = aug[c][k];
                    aug[r][k] -= f * v;
                }
            }
        }
    }
    (0..m).map(|j| (0..n).map(|r| aug[r][n + j] / aug[r][r]).collect()).collect()
}

/// `A = Hᴴ H + σ² I` (row-major) and `Hᴴ y`.
pub fn normal_equations(ch: &ChannelRealization, y: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let (nr, nt) = (ch.rx_antennas(), ch.tx_antennas());
    let mut a = vec![Complex64::new(0.0, 0.0); nt * nt];
    let mut z = vec![Complex64::new(0.0, 0.0); nt];
    for i in 0..nt {
        for j in 0..nt {
            a[i * nt + j] = (0..nr).map(|r| ch.entry(r, i).conj() * ch.entry(r, j)).sum();
        }
        a[i * nt + i] += ch.noise_var();
        z[i] = (0..nr).map(|r| ch.entry(r, i).conj() * y[r]).sum();
    }
    (a, z)
}

/// Column `c` of a time-space trellis, reordered back to space-code positions.
pub fn column_in_code_order(t: &CodewordTrellis, c: usize, code: &PolarCode) -> Vec<u8> {
    let mut x = vec![0u8; code.target_len()];
    for (r, &p) in code.systematic_order().iter().enumerate() {
        x[p] = *t.get(r, c);
    }
    x
}
