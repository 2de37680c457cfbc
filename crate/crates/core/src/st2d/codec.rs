//! Encoders and two-stage decoders for all four modes.
//!
//! Space-time is handled as time-space on the transposed trellis with the
//! roles of the two domains exchanged.

use std::collections::BTreeMap;

use rand::Rng;

use crate::polar::sc::ScDecoder;
use crate::polar::scan::ScanDecoder;
use crate::polar::{BoxPlus, PolarCode};

use super::config::{Mode, St2dConfig, StageLlr};
use super::mapping::{demap_folded, map_folded};
use super::{CodewordTrellis, LlrTrellis, St2dError, Trellis};

/// Information bits of one trellis, one sequence per stream code.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitStreams {
    streams: Vec<Vec<u8>>,
}

impl BitStreams {
    pub fn new(streams: Vec<Vec<u8>>) -> Self {
        BitStreams { streams }
    }

    /// Splits `bits` into consecutive streams of the given lengths.
    pub fn from_flat(bits: &[u8], lengths: &[usize]) -> Result<Self, St2dError> {
        let total: usize = lengths.iter().sum();
        if total != bits.len() {
            return Err(St2dError::Dimension(format!(
                "{} bits for streams totalling {total}",
                bits.len()
            )));
        }
        let mut pos = 0;
        let streams = lengths
            .iter()
            .map(|&k| {
                let s = bits[pos..pos + k].to_vec();
                pos += k;
                s
            })
            .collect();
        Ok(BitStreams { streams })
    }

    /// Uniformly random streams of the given lengths.
    pub fn random<R: Rng + ?Sized>(lengths: &[usize], rng: &mut R) -> Self {
        BitStreams {
            streams: lengths
                .iter()
                .map(|&k| (0..k).map(|_| rng.random_range(0..2u8)).collect())
                .collect(),
        }
    }

    pub fn zeros(lengths: &[usize]) -> Self {
        BitStreams {
            streams: lengths.iter().map(|&k| vec![0; k]).collect(),
        }
    }

    pub fn flatten(&self) -> Vec<u8> {
        self.streams.concat()
    }

    pub fn streams(&self) -> &[Vec<u8>] {
        &self.streams
    }

    pub fn len(&self) -> usize {
        self.streams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.streams.iter().map(Vec::len).collect()
    }

    /// Per-stream XOR, for linearity checks.
    pub fn xor(&self, other: &BitStreams) -> BitStreams {
        BitStreams {
            streams: self
                .streams
                .iter()
                .zip(&other.streams)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x ^ y).collect())
                .collect(),
        }
    }
}

/// Per-stream error flags of `decoded` against `sent`.
pub fn stream_errors(sent: &BitStreams, decoded: &BitStreams) -> Vec<bool> {
    sent.streams
        .iter()
        .zip(&decoded.streams)
        .map(|(a, b)| a != b)
        .collect()
}

/// Number of differing information bits.
pub fn bit_errors(sent: &BitStreams, decoded: &BitStreams) -> usize {
    sent.streams
        .iter()
        .zip(&decoded.streams)
        .map(|(a, b)| a.iter().zip(b).filter(|(x, y)| x != y).count())
        .sum()
}

/// Encoder and decoder for one configuration, with reusable decoder scratch.
#[derive(Debug, Clone)]
pub struct St2dCodec {
    cfg: St2dConfig,
    inner_orders: Vec<Vec<usize>>,
    sc: BTreeMap<usize, ScDecoder>,
    scan: BTreeMap<usize, ScanDecoder>,
}

impl St2dCodec {
    pub fn new(cfg: St2dConfig) -> Self {
        let inner_orders = cfg.inner_codes().iter().map(PolarCode::systematic_order).collect();
        St2dCodec {
            cfg,
            inner_orders,
            sc: BTreeMap::new(),
            scan: BTreeMap::new(),
        }
    }

    pub fn config(&self) -> &St2dConfig {
        &self.cfg
    }

    fn check_streams(&self, info: &BitStreams) -> Result<(), St2dError> {
        let expected = self.cfg.stream_lengths();
        if info.lengths() != expected {
            return Err(St2dError::Dimension(format!(
                "stream lengths {:?}, expected {:?}",
                info.lengths(),
                expected
            )));
        }
        Ok(())
    }

    pub fn encode(&self, info: &BitStreams) -> Result<CodewordTrellis, St2dError> {
        self.check_streams(info)?;
        let cfg = &self.cfg;
        let (l, m) = (cfg.layers(), cfg.width());
        match cfg.mode() {
            Mode::TimeSpace => encode_product(info, cfg.time_codes(), cfg.space_codes(), &self.inner_orders, l, m),
            Mode::SpaceTime => {
                encode_product(info, cfg.space_codes(), cfg.time_codes(), &self.inner_orders, m, l)
                    .map(|t| t.transposed())
            }
            Mode::TimeOnlyParallel => {
                let mut data = Vec::with_capacity(l * m);
                for (code, bits) in cfg.time_codes().iter().zip(info.streams()) {
                    data.extend(code.encode(bits)?);
                }
                Trellis::from_vec(l, m, data)
            }
            Mode::TimeOnlyFolded => {
                let mut stream = Vec::with_capacity(l * m);
                for (code, bits) in cfg.time_codes().iter().zip(info.streams()) {
                    stream.extend(code.encode(bits)?);
                }
                fold(&stream, l, cfg.symbol_bits())
            }
        }
    }

    pub fn decode(&mut self, llrs: &LlrTrellis) -> Result<BitStreams, St2dError> {
        let (l, m) = (self.cfg.layers(), self.cfg.width());
        if llrs.dims() != (l, m) {
            return Err(St2dError::Dimension(format!(
                "{}x{} LLR trellis for a {l}x{m} configuration",
                llrs.rows(),
                llrs.cols()
            )));
        }
        match self.cfg.mode() {
            Mode::TimeSpace => {
                let stream_llrs = self.soft_stage(llrs)?;
                self.hard_stage(&stream_llrs)
            }
            Mode::SpaceTime => {
                let stream_llrs = self.soft_stage(&llrs.transposed())?;
                self.hard_stage(&stream_llrs)
            }
            Mode::TimeOnlyParallel => self.hard_stage(llrs.as_slice()),
            Mode::TimeOnlyFolded => {
                let stream = unfold(llrs, self.cfg.symbol_bits())?;
                self.hard_stage(&stream)
            }
        }
    }

    /// SCAN over each column of `llrs` (time-space frame); returns the LLRs
    /// of the stacked stream codewords, row-major.
    fn soft_stage(&mut self, llrs: &LlrTrellis) -> Result<Vec<f64>, St2dError> {
        let (rows, cols) = llrs.dims();
        let iterations = self.cfg.scan_iterations();
        let boxplus = self.cfg.boxplus();
        let stage = self.cfg.stage_llr();
        let inner = self.cfg.inner_codes();
        let k = inner[0].info_len();
        let mut out = vec![0.0; k * cols];
        let mut column = vec![0.0; rows];
        for (c, (code, order)) in inner.iter().zip(&self.inner_orders).enumerate() {
            if code.is_rate_one() {
                // Identity code: the column already holds the stream bits.
                for r in 0..k {
                    out[r * cols + c] = *llrs.get(r, c);
                }
                continue;
            }
            for (r, &p) in order.iter().enumerate() {
                column[p] = *llrs.get(r, c);
            }
            let dec = self
                .scan
                .entry(code.mother_len())
                .or_insert_with(|| ScanDecoder::new(code.mother_len(), boxplus));
            let res = dec.decode(code, &column, iterations)?;
            let src = match stage {
                StageLlr::Posterior => &res.codebit_llrs,
                StageLlr::Extrinsic => &res.codebit_extrinsic,
            };
            for (r, &p) in code.info_positions().iter().enumerate() {
                out[r * cols + c] = src[p];
            }
        }
        Ok(out)
    }

    /// SC over consecutive stream codewords.
    fn hard_stage(&mut self, llrs: &[f64]) -> Result<BitStreams, St2dError> {
        let boxplus: BoxPlus = self.cfg.boxplus();
        let mut streams = Vec::with_capacity(self.cfg.stream_codes().len());
        let mut pos = 0;
        for code in self.cfg.stream_codes() {
            let n = code.target_len();
            let dec = self
                .sc
                .entry(code.mother_len())
                .or_insert_with(|| ScDecoder::new(code.mother_len(), boxplus));
            streams.push(dec.decode(code, &llrs[pos..pos + n])?.info_bits);
            pos += n;
        }
        Ok(BitStreams { streams })
    }
}

/// Time-space frame product encoding into a `rows × cols` trellis.
fn encode_product(
    info: &BitStreams,
    streams: &[PolarCode],
    inner: &[PolarCode],
    orders: &[Vec<usize>],
    rows: usize,
    cols: usize,
) -> Result<CodewordTrellis, St2dError> {
    let k = inner[0].info_len();
    let mut stacked = Vec::with_capacity(k * cols);
    for (code, bits) in streams.iter().zip(info.streams()) {
        stacked.extend(code.encode(bits)?);
    }
    let mut out = CodewordTrellis::filled(rows, cols, 0);
    let mut column = vec![0u8; k];
    for (c, (code, order)) in inner.iter().zip(orders).enumerate() {
        for (r, v) in column.iter_mut().enumerate() {
            *v = stacked[r * cols + c];
        }
        let x = code.encode_systematic(&column)?;
        for (r, &p) in order.iter().enumerate() {
            out.set(r, c, x[p]);
        }
    }
    Ok(out)
}

/// Folds a bit stream onto `layers` rows, `symbol_bits` bits at a time.
pub fn fold<T: Clone>(stream: &[T], layers: usize, symbol_bits: usize) -> Result<Trellis<T>, St2dError> {
    if symbol_bits == 0 || stream.len() % symbol_bits != 0 {
        return Err(St2dError::Dimension(format!(
            "{} bits do not form {symbol_bits}-bit symbols",
            stream.len()
        )));
    }
    let symbols: Vec<Vec<T>> = stream.chunks(symbol_bits).map(<[T]>::to_vec).collect();
    let per_layer = map_folded(&symbols, layers)?;
    let width = stream.len() / layers;
    let data = per_layer.into_iter().flatten().flatten().collect();
    Trellis::from_vec(layers, width, data)
}

/// Inverse of [`fold`].
pub fn unfold<T: Clone>(trellis: &Trellis<T>, symbol_bits: usize) -> Result<Vec<T>, St2dError> {
    if symbol_bits == 0 || trellis.cols() % symbol_bits != 0 {
        return Err(St2dError::Dimension(format!(
            "width {} is not a multiple of {symbol_bits}",
            trellis.cols()
        )));
    }
    let layers: Vec<Vec<Vec<T>>> = (0..trellis.rows())
        .map(|r| trellis.row(r).chunks(symbol_bits).map(<[T]>::to_vec).collect())
        .collect();
    Ok(demap_folded(&layers)?.into_iter().flatten().collect())
}

fn require_mode(cfg: &St2dConfig, modes: &[Mode]) -> Result<(), St2dError> {
    if modes.contains(&cfg.mode()) {
        Ok(())
    } else {
        Err(St2dError::Config(format!("operation not available in {} mode", cfg.mode().name())))
    }
}

pub fn encode_time_space(info: &BitStreams, cfg: &St2dConfig) -> Result<CodewordTrellis, St2dError> {
    require_mode(cfg, &[Mode::TimeSpace])?;
    St2dCodec::new(cfg.clone()).encode(info)
}

pub fn encode_space_time(info: &BitStreams, cfg: &St2dConfig) -> Result<CodewordTrellis, St2dError> {
    require_mode(cfg, &[Mode::SpaceTime])?;
    St2dCodec::new(cfg.clone()).encode(info)
}

pub fn encode_1d(info: &BitStreams, cfg: &St2dConfig) -> Result<CodewordTrellis, St2dError> {
    require_mode(cfg, &[Mode::TimeOnlyParallel, Mode::TimeOnlyFolded])?;
    St2dCodec::new(cfg.clone()).encode(info)
}

pub fn decode_time_space(llrs: &LlrTrellis, cfg: &St2dConfig) -> Result<BitStreams, St2dError> {
    require_mode(cfg, &[Mode::TimeSpace])?;
    St2dCodec::new(cfg.clone()).decode(llrs)
}

pub fn decode_space_time(llrs: &LlrTrellis, cfg: &St2dConfig) -> Result<BitStreams, St2dError> {
    require_mode(cfg, &[Mode::SpaceTime])?;
    St2dCodec::new(cfg.clone()).decode(llrs)
}

pub fn decode_1d(llrs: &LlrTrellis, cfg: &St2dConfig) -> Result<BitStreams, St2dError> {
    require_mode(cfg, &[Mode::TimeOnlyParallel, Mode::TimeOnlyFolded])?;
    St2dCodec::new(cfg.clone()).decode(llrs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_matches_symbol_layout() {
        // Two-bit symbols s1..s8 over four layers.
        let stream: Vec<u32> = (0..16).collect();
        let t = fold(&stream, 4, 2).unwrap();
        assert_eq!(t.row(0), &[0, 1, 8, 9]);
        assert_eq!(t.row(3), &[6, 7, 14, 15]);
        assert_eq!(unfold(&t, 2).unwrap(), stream);
    }

    #[test]
    fn from_flat_and_flatten() {
        let bits = [1, 0, 1, 1, 0];
        let s = BitStreams::from_flat(&bits, &[2, 3]).unwrap();
        assert_eq!(s.streams(), &[vec![1, 0], vec![1, 1, 0]]);
        assert_eq!(s.flatten(), bits.to_vec());
        assert!(BitStreams::from_flat(&bits, &[2, 2]).is_err());
    }

    #[test]
    fn wrong_mode_is_rejected() {
        let cfg = St2dConfig::parallel_1d(4, 8, 2, 8, 1.0).unwrap();
        let info = BitStreams::zeros(&cfg.stream_lengths());
        assert!(encode_time_space(&info, &cfg).is_err());
        assert!(encode_1d(&info, &cfg).is_ok());
    }
}
