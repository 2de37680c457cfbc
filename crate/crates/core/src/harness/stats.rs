//! Error-rate statistics.

use super::FerRecord;

/// `sqrt(p(1−p)/n)`.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Whether `high` exceeds `low` by more than `k` combined standard
/// deviations.
pub fn exceeds_by_sigmas(high: &FerRecord, low: &FerRecord, k: f64) -> bool {
    let s = (high.fer_sigma().powi(2) + low.fer_sigma().powi(2)).sqrt();
    high.fer - low.fer > k * s
}

/// Eb/N0 at which the curve first crosses `target`, by linear interpolation
/// of `log10(FER)` between the bracketing points. Records must be sorted by
/// Eb/N0; points without errors are treated as lying below any target.
/// Returns `None` if the curve never brackets the target.
pub fn ebn0_at_fer(records: &[FerRecord], target: f64) -> Option<f64> {
    if !(target > 0.0) {
        return None;
    }
    let lt = target.log10();
    for w in records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.fer >= target && b.fer < target {
            if b.fer <= 0.0 {
                return None;
            }
            if a.fer == target {
                return Some(a.ebn0_db);
            }
            let (la, lb) = (a.fer.log10(), b.fer.log10());
            return Some(a.ebn0_db + (b.ebn0_db - a.ebn0_db) * (la - lt) / (la - lb));
        }
    }
    None
}
