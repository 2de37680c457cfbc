//! Physical-layer model: Gray QAM, i.i.d. Rayleigh MIMO channel, soft-output
//! MMSE detection and LLR demapping.
//!
//! Layers map one-to-one onto transmit antennas (identity precoding) and the
//! channel is flat, so each of the `M_sym` symbol positions of a trellis is
//! one channel use carrying the `L`-vector of layer symbols.

pub mod channel;
pub mod gram;
pub mod link;
pub mod mmse;
pub mod qam;

use thiserror::Error;

pub use channel::{complex_normal, draw_channel, ChannelRealization};
pub use link::{ebn0_to_sigma2, transmit_frame, LinkOptions, NoisePoint};
pub use mmse::{mmse_detect, MmseOutput, MmseWorkspace};
pub use qam::{qam_llr, qam_modulate, Constellation, Demapper};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhyError {
    #[error("unsupported modulation order q={0} (must be even, 2..=16)")]
    UnsupportedModulation(usize),
    #[error("{bits} bits cannot be grouped into {q}-bit symbols")]
    IndivisibleBits { bits: usize, q: usize },
    #[error("post-equalization SINR must be positive, got {0}")]
    NonPositiveSinr(f64),
    #[error("noise variance must be positive, got {0}")]
    NonPositiveNoise(f64),
    #[error("code rate must lie in (0, 1], got {0}")]
    InvalidRate(f64),
    #[error("Eb/N0 must be finite")]
    InvalidEbN0,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid antenna configuration: {0}")]
    InvalidAntennas(String),
    #[error("MMSE system is not positive definite")]
    Singular,
}

/// When a fresh channel matrix is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FadingUnit {
    /// New `H` for every channel use (symbol position).
    #[default]
    PerChannelUse,
    /// One `H` for all channel uses of a frame.
    PerFrame,
}

/// How channel uses are simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelSampler {
    /// Draw `H` explicitly and form `Hᴴ H`, `Hᴴ y`.
    #[default]
    Full,
    /// Draw the detector's sufficient statistics (`Hᴴ H`, `Hᴴ y`) directly
    /// from their joint law under i.i.d. Rayleigh fading.
    Gram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MimoConfig {
    pub tx_antennas: usize,
    pub rx_antennas: usize,
    /// Bits per QAM symbol.
    pub modulation_q: usize,
    pub fading: FadingUnit,
    pub sampler: ChannelSampler,
}

impl MimoConfig {
    pub fn new(tx_antennas: usize, rx_antennas: usize, modulation_q: usize) -> Result<Self, PhyError> {
        let cfg = MimoConfig {
            tx_antennas,
            rx_antennas,
            modulation_q,
            fading: FadingUnit::default(),
            sampler: ChannelSampler::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_fading(mut self, fading: FadingUnit) -> Self {
        self.fading = fading;
        self
    }

    pub fn with_sampler(mut self, sampler: ChannelSampler) -> Self {
        self.sampler = sampler;
        self
    }

    /// Layers equal transmit antennas.
    pub fn layers(&self) -> usize {
        self.tx_antennas
    }

    pub fn validate(&self) -> Result<(), PhyError> {
        if self.tx_antennas == 0 {
            return Err(PhyError::InvalidAntennas("no transmit antennas".into()));
        }
        if self.rx_antennas < self.tx_antennas {
            return Err(PhyError::InvalidAntennas(format!(
                "Nr={} < Nt={}",
                self.rx_antennas, self.tx_antennas
            )));
        }
        if self.modulation_q == 0 || self.modulation_q % 2 != 0 || self.modulation_q > 16 {
            return Err(PhyError::UnsupportedModulation(self.modulation_q));
        }
        Ok(())
    }
}
