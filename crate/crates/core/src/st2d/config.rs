//! Scheme description: mode, trellis size and component codes.
//!
//! In the two 2-D modes one domain carries the *stream* codes, encoded first
//! and decoded last with SC, and the other carries the *inner* codes, encoded
//! systematically over the stream codewords and decoded first with SCAN:
//!
//! | mode        | stream codes        | inner codes              |
//! |-------------|---------------------|--------------------------|
//! | time-space  | time (rows)         | space, one per column    |
//! | space-time  | space (columns)     | time, one per row        |
//!
//! A stream codeword longer than one row (column) occupies consecutive rows
//! (columns), filled row-major (column-major).

use crate::polar::{BoxPlus, PolarCode};

use super::St2dError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    TimeSpace,
    SpaceTime,
    TimeOnlyParallel,
    TimeOnlyFolded,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::TimeSpace => "time_space",
            Mode::SpaceTime => "space_time",
            Mode::TimeOnlyParallel => "time_only_parallel",
            Mode::TimeOnlyFolded => "time_only_folded",
        }
    }

    pub fn is_2d(self) -> bool {
        matches!(self, Mode::TimeSpace | Mode::SpaceTime)
    }
}

impl std::str::FromStr for Mode {
    type Err = St2dError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "time_space" => Ok(Mode::TimeSpace),
            "space_time" => Ok(Mode::SpaceTime),
            "time_only_parallel" => Ok(Mode::TimeOnlyParallel),
            "time_only_folded" => Ok(Mode::TimeOnlyFolded),
            other => Err(St2dError::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// Which SCAN output the soft stage hands to the SC stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StageLlr {
    #[default]
    Posterior,
    Extrinsic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct St2dConfig {
    mode: Mode,
    layers: usize,
    width: usize,
    symbol_bits: usize,
    time_codes: Vec<PolarCode>,
    space_codes: Vec<PolarCode>,
    scan_iterations: usize,
    boxplus: BoxPlus,
    stage_llr: StageLlr,
}

/// Splits `total` into `parts` integers differing by at most one, larger
/// ones first.
pub fn split_evenly(total: usize, parts: usize) -> Vec<usize> {
    if parts == 0 {
        return Vec::new();
    }
    let base = total / parts;
    let extra = total % parts;
    (0..parts).map(|i| base + usize::from(i < extra)).collect()
}

fn shortened_code(target: usize, k: usize, design_snr_db: f64) -> Result<PolarCode, St2dError> {
    Ok(PolarCode::construct(target.next_power_of_two(), k, target, design_snr_db)?)
}

impl St2dConfig {
    /// Validated configuration. `time_codes` and `space_codes` follow the
    /// table in the module docs; `space_codes` must be empty in the 1-D modes.
    pub fn new(
        mode: Mode,
        layers: usize,
        width: usize,
        symbol_bits: usize,
        time_codes: Vec<PolarCode>,
        space_codes: Vec<PolarCode>,
    ) -> Result<Self, St2dError> {
        let cfg = St2dConfig {
            mode,
            layers,
            width,
            symbol_bits,
            time_codes,
            space_codes,
            scan_iterations: 1,
            boxplus: BoxPlus::default(),
            stage_llr: StageLlr::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Lowest-latency 2-D layout: every stream codeword fills exactly one row
    /// (time-space) or one column (space-time), and `inner_info_len` such
    /// codewords are protected by one inner code per column (row).
    /// `info_bits` are spread as evenly as possible over the streams.
    pub fn lowest_latency_2d(
        mode: Mode,
        layers: usize,
        width: usize,
        symbol_bits: usize,
        inner_info_len: usize,
        info_bits: usize,
        design_snr_db: f64,
    ) -> Result<Self, St2dError> {
        let (stream_len, inner_len, inner_count) = match mode {
            Mode::TimeSpace => (width, layers, width),
            Mode::SpaceTime => (layers, width, layers),
            _ => return Err(St2dError::Config(format!("{} is not a 2-D mode", mode.name()))),
        };
        let streams = split_evenly(info_bits, inner_info_len)
            .into_iter()
            .map(|k| shortened_code(stream_len, k, design_snr_db))
            .collect::<Result<Vec<_>, _>>()?;
        let inner = shortened_code(inner_len, inner_info_len, design_snr_db)?;
        let inner = vec![inner; inner_count];
        match mode {
            Mode::TimeSpace => Self::new(mode, layers, width, symbol_bits, streams, inner),
            _ => Self::new(mode, layers, width, symbol_bits, inner, streams),
        }
    }

    /// One time codeword per layer, `info_bits` spread evenly.
    pub fn parallel_1d(
        layers: usize,
        width: usize,
        symbol_bits: usize,
        info_bits: usize,
        design_snr_db: f64,
    ) -> Result<Self, St2dError> {
        let codes = split_evenly(info_bits, layers)
            .into_iter()
            .map(|k| shortened_code(width, k, design_snr_db))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(Mode::TimeOnlyParallel, layers, width, symbol_bits, codes, Vec::new())
    }

    /// A single stream of consecutive codewords of length `codeword_len`
    /// folded over all layers.
    pub fn folded_1d(
        layers: usize,
        width: usize,
        symbol_bits: usize,
        codeword_len: usize,
        info_bits: usize,
        design_snr_db: f64,
    ) -> Result<Self, St2dError> {
        let total = layers * width;
        if codeword_len == 0 || total % codeword_len != 0 {
            return Err(St2dError::Config(format!(
                "codeword length {codeword_len} does not divide the {total}-bit trellis"
            )));
        }
        let codes = split_evenly(info_bits, total / codeword_len)
            .into_iter()
            .map(|k| shortened_code(codeword_len, k, design_snr_db))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(Mode::TimeOnlyFolded, layers, width, symbol_bits, codes, Vec::new())
    }

    pub fn with_scan_iterations(mut self, iterations: usize) -> Result<Self, St2dError> {
        if iterations == 0 {
            return Err(St2dError::Config("SCAN needs at least one iteration".into()));
        }
        self.scan_iterations = iterations;
        Ok(self)
    }

    pub fn with_boxplus(mut self, boxplus: BoxPlus) -> Self {
        self.boxplus = boxplus;
        self
    }

    pub fn with_stage_llr(mut self, stage_llr: StageLlr) -> Self {
        self.stage_llr = stage_llr;
        self
    }

    fn validate(&self) -> Result<(), St2dError> {
        let bad = |msg: String| Err(St2dError::Config(msg));
        let (l, m) = (self.layers, self.width);
        if l == 0 || m == 0 {
            return bad(format!("empty {l}x{m} trellis"));
        }
        if self.symbol_bits == 0 || m % self.symbol_bits != 0 {
            return bad(format!("width {m} is not a multiple of {} bits per symbol", self.symbol_bits));
        }
        match self.mode {
            Mode::TimeSpace => check_product(&self.time_codes, &self.space_codes, m, l, "time", "space"),
            Mode::SpaceTime => check_product(&self.space_codes, &self.time_codes, l, m, "space", "time"),
            Mode::TimeOnlyParallel => {
                if !self.space_codes.is_empty() {
                    return bad("1-D modes take no space codes".into());
                }
                if self.time_codes.len() != l {
                    return bad(format!("{} time codes for {l} layers", self.time_codes.len()));
                }
                if let Some(c) = self.time_codes.iter().find(|c| c.target_len() != m) {
                    return bad(format!("time code of length {} in a width-{m} trellis", c.target_len()));
                }
                Ok(())
            }
            Mode::TimeOnlyFolded => {
                if !self.space_codes.is_empty() {
                    return bad("1-D modes take no space codes".into());
                }
                let total: usize = self.time_codes.iter().map(PolarCode::target_len).sum();
                if self.time_codes.is_empty() || total != l * m {
                    return bad(format!("time codewords cover {total} of {} trellis bits", l * m));
                }
                Ok(())
            }
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn symbol_bits(&self) -> usize {
        self.symbol_bits
    }

    pub fn time_codes(&self) -> &[PolarCode] {
        &self.time_codes
    }

    pub fn space_codes(&self) -> &[PolarCode] {
        &self.space_codes
    }

    /// Codes of the streams, in stream order.
    pub fn stream_codes(&self) -> &[PolarCode] {
        match self.mode {
            Mode::SpaceTime => &self.space_codes,
            _ => &self.time_codes,
        }
    }

    /// Codes applied across the stream codewords (empty in 1-D modes).
    pub fn inner_codes(&self) -> &[PolarCode] {
        match self.mode {
            Mode::TimeSpace => &self.space_codes,
            Mode::SpaceTime => &self.time_codes,
            _ => &[],
        }
    }

    pub fn stream_lengths(&self) -> Vec<usize> {
        self.stream_codes().iter().map(PolarCode::info_len).collect()
    }

    pub fn info_bits(&self) -> usize {
        self.stream_codes().iter().map(PolarCode::info_len).sum()
    }

    /// Information bits per coded trellis bit.
    pub fn overall_rate(&self) -> f64 {
        self.info_bits() as f64 / (self.layers * self.width) as f64
    }

    pub fn scan_iterations(&self) -> usize {
        self.scan_iterations
    }

    pub fn boxplus(&self) -> BoxPlus {
        self.boxplus
    }

    pub fn stage_llr(&self) -> StageLlr {
        self.stage_llr
    }
}

/// Checks a product layout in the time-space frame: stream codewords of
/// length a multiple of `stride` stacked into `K` lines, and one inner code
/// of dimension `K` and length `depth` per position along the line.
fn check_product(
    streams: &[PolarCode],
    inner: &[PolarCode],
    stride: usize,
    depth: usize,
    stream_domain: &str,
    inner_domain: &str,
) -> Result<(), St2dError> {
    let bad = |msg: String| Err(St2dError::Config(msg));
    if streams.is_empty() {
        return bad(format!("no {stream_domain} codes"));
    }
    if let Some(c) = streams.iter().find(|c| c.target_len() % stride != 0) {
        return bad(format!(
            "{stream_domain} code length {} is not a multiple of {stride}",
            c.target_len()
        ));
    }
    let lines: usize = streams.iter().map(|c| c.target_len() / stride).sum();
    if inner.len() != stride {
        return bad(format!("{} {inner_domain} codes, expected {stride}", inner.len()));
    }
    for c in inner {
        if c.target_len() != depth {
            return bad(format!("{inner_domain} code length {} differs from {depth}", c.target_len()));
        }
        if c.info_len() != lines {
            return bad(format!(
                "{inner_domain} code dimension {} differs from the {lines} lines of {stream_domain} codewords",
                c.info_len()
            ));
        }
    }
    Ok(())
}
