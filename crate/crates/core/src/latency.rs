//! Analytical decoding latency.
//!
//! Decoding starts once the whole trellis is received, all decoders of one
//! domain run in parallel, and decoding a codeword of length `N` takes
//! `γ·N`. A 2-D scheme therefore costs `γ·(max N^time + max N^space)`.

use thiserror::Error;

use crate::st2d::{Mode, St2dConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatencyError {
    #[error("gamma must be positive and finite, got {0}")]
    InvalidGamma(f64),
    #[error("no {0} code lengths given")]
    EmptyLengths(&'static str),
    #[error("code lengths must be positive")]
    ZeroLength,
    #[error("unknown special case `{0}`")]
    UnknownCase(String),
}

/// The two degenerate layouts with closed-form latency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// One time codeword per layer, rate-1 space code (no space decoding).
    ParallelRowsRate1Space,
    /// One stream folded over all layers, no space code.
    SingleFoldedStream,
}

impl std::str::FromStr for SpecialCase {
    type Err = LatencyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "parallel_rows_rate1_space" => Ok(SpecialCase::ParallelRowsRate1Space),
            "single_folded_stream" => Ok(SpecialCase::SingleFoldedStream),
            other => Err(LatencyError::UnknownCase(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyModel {
    gamma: f64,
}

impl Default for LatencyModel {
    fn default() -> Self {
        LatencyModel { gamma: 1.0 }
    }
}

impl LatencyModel {
    pub fn new(gamma: f64) -> Result<Self, LatencyError> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(LatencyError::InvalidGamma(gamma));
        }
        Ok(LatencyModel { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `γ·(max N^time + max N^space)`.
    pub fn decoding_latency(&self, time_lengths: &[usize], space_lengths: &[usize]) -> Result<f64, LatencyError> {
        Ok(self.gamma * (max_len(time_lengths, "time")? + max_len(space_lengths, "space")?) as f64)
    }

    /// `γ·(M_bit + L)`, reached when every codeword spans one row or column.
    pub fn min_latency(&self, width: usize, layers: usize) -> f64 {
        self.gamma * (width + layers) as f64
    }

    pub fn special_case_latency(&self, case: SpecialCase, width: usize, layers: usize) -> f64 {
        match case {
            SpecialCase::ParallelRowsRate1Space => self.gamma * width as f64,
            SpecialCase::SingleFoldedStream => self.gamma * (layers * width) as f64,
        }
    }

    /// Latency of a configured scheme. Rate-1 codes are never decoded and
    /// contribute nothing.
    pub fn scheme_latency(&self, cfg: &St2dConfig) -> f64 {
        let longest = |codes: &[crate::polar::PolarCode]| {
            codes
                .iter()
                .filter(|c| !c.is_rate_one())
                .map(|c| c.target_len())
                .max()
                .unwrap_or(0)
        };
        let total = match cfg.mode() {
            Mode::TimeSpace | Mode::SpaceTime => longest(cfg.time_codes()) + longest(cfg.space_codes()),
            Mode::TimeOnlyParallel | Mode::TimeOnlyFolded => longest(cfg.time_codes()),
        };
        self.gamma * total as f64
    }
}

fn max_len(lengths: &[usize], domain: &'static str) -> Result<usize, LatencyError> {
    if lengths.contains(&0) {
        return Err(LatencyError::ZeroLength);
    }
    lengths.iter().copied().max().ok_or(LatencyError::EmptyLengths(domain))
}
