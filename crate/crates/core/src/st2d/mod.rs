//! Spatiotemporal 2-D coding over the codeword trellis.
//!
//! Time-domain codewords run along the rows (layers) of the trellis and
//! space-domain codewords along its columns. The soft-output stage always
//! decodes the codes applied last, and SC then recovers the streams.

pub mod codec;
pub mod config;
pub mod mapping;
pub mod trellis;

use thiserror::Error;

use crate::polar::PolarError;

pub use codec::{
    bit_errors, decode_1d, decode_space_time, decode_time_space, encode_1d, encode_space_time, encode_time_space,
    stream_errors, BitStreams, St2dCodec,
};
pub use config::{split_evenly, Mode, St2dConfig, StageLlr};
pub use mapping::{demap_folded, demap_parallel, map_folded, map_parallel};
pub use trellis::{CodewordTrellis, LlrTrellis, Trellis};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum St2dError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Polar(#[from] PolarError),
}
