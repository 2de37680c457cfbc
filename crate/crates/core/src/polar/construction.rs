//! Gaussian-approximation density evolution.
//!
//! Each synthetic channel is summarised by the mean of its (consistent,
//! Gaussian) LLR. Check-node combining uses the two-piece approximation of
//! the φ function; variable-node combining adds means. Shortened code bits
//! are perfectly known, so their channel mean is infinite.

/// Default design SNR (Es/N0 of a BPSK-equivalent bit channel, dB).
pub const DEFAULT_DESIGN_SNR_DB: f64 = 1.0;

const PHI_SPLIT: f64 = 10.0;

/// `ln φ(x)` with the standard two-piece approximation, clamped to `≤ 0`.
pub fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x.is_infinite() {
        f64::NEG_INFINITY
    } else if x < PHI_SPLIT {
        (-0.4527 * x.powf(0.86) + 0.0218).min(0.0)
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

/// Inverse of [`ln_phi`] by bisection.
pub fn ln_phi_inv(target: f64) -> f64 {
    if target >= 0.0 {
        return 0.0;
    }
    if target == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while ln_phi(hi) > target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Mean of the check-node output for input means `a` and `b`:
/// `φ⁻¹(1 − (1 − φ(a))(1 − φ(b)))`, evaluated in the log domain.
pub fn check_node_mean(a: f64, b: f64) -> f64 {
    let la = ln_phi(a);
    let lb = ln_phi(b);
    if la == f64::NEG_INFINITY {
        return b;
    }
    if lb == f64::NEG_INFINITY {
        return a;
    }
    // ln(φa + φb − φa φb)
    let hi = la.max(lb);
    let s = hi + ((la - hi).exp() + (lb - hi).exp()).ln();
    let v = s + (-(la + lb - s).exp()).ln_1p();
    ln_phi_inv(v.min(0.0))
}

/// Mean LLR of every synthetic channel `u_i`, for a mother code of length
/// `n` shortened to `target_len`.
pub fn synthetic_channel_means(n: usize, target_len: usize, design_snr_db: f64) -> Vec<f64> {
    let m0 = 4.0 * 10f64.powf(design_snr_db / 10.0);
    let mut means: Vec<f64> = (0..n)
        .map(|j| if j < target_len { m0 } else { f64::INFINITY })
        .collect();
    let mut half = n / 2;
    while half >= 1 {
        for block in means.chunks_exact_mut(2 * half) {
            for i in 0..half {
                let a = block[i];
                let b = block[i + half];
                block[i] = check_node_mean(a, b);
                block[i + half] = a + b;
            }
        }
        half /= 2;
    }
    means
}

/// Channel indices sorted from most to least reliable. Ties go to the
/// higher index.
pub fn reliability_order(n: usize, target_len: usize, design_snr_db: f64) -> Vec<usize> {
    let means = synthetic_channel_means(n, target_len, design_snr_db);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| means[b].total_cmp(&means[a]).then(b.cmp(&a)));
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_inverse_roundtrip() {
        for &x in &[0.05, 0.5, 1.0, 3.0, 9.9, 10.5, 40.0, 500.0, 5000.0] {
            let y = ln_phi_inv(ln_phi(x));
            assert!((y - x).abs() < 1e-6 * x.max(1.0), "{x} -> {y}");
        }
    }

    #[test]
    fn check_node_is_worse_than_both_inputs() {
        for &(a, b) in &[(1.0, 1.0), (2.0, 8.0), (20.0, 30.0), (400.0, 1000.0)] {
            let c = check_node_mean(a, b);
            assert!(c < a.min(b), "{a},{b} -> {c}");
            assert!(c > 0.0);
        }
        assert_eq!(check_node_mean(3.0, f64::INFINITY), 3.0);
    }

    #[test]
    fn n16_ordering_worst_and_best() {
        let order = reliability_order(16, 16, 3.0);
        assert_eq!(order[0], 15);
        assert_eq!(*order.last().unwrap(), 0);
        let means = synthetic_channel_means(16, 16, 3.0);
        // Channel 0 sees only check nodes, channel 15 only variable nodes.
        let m0 = 4.0 * 10f64.powf(0.3);
        assert!((means[15] - 16.0 * m0).abs() < 1e-9);
    }

    #[test]
    fn large_means_do_not_overflow() {
        let means = synthetic_channel_means(128, 128, 15.0);
        assert!(means.iter().all(|m| m.is_finite() && *m > 0.0));
    }
}
