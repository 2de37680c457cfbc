//! Monte-Carlo FER/BER simulation.
//!
//! Every frame draws its randomness from its own ChaCha stream, keyed by the
//! point seed and the frame index. Frames are simulated in batches (in
//! parallel when several workers are available) and then tallied in frame
//! order, stopping at the exact frame where the stop rule fires, so results
//! never depend on the worker count.

pub mod config_file;
pub mod csv;
pub mod presets;
pub mod stats;

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::phy::{transmit_frame, Demapper, LinkOptions, MimoConfig, NoisePoint, PhyError};
use crate::st2d::{bit_errors, BitStreams, St2dCodec, St2dConfig, St2dError};

pub use config_file::parse_config;
pub use csv::{read_csv, write_csv};
pub use presets::{preset, Curve, PRESET_NAMES};
pub use stats::{binomial_sigma, ebn0_at_fer};

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "ST2D_WORKERS";

const FIRST_BATCH: u64 = 16;
const MAX_BATCH: u64 = 1024;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    St2d(#[from] St2dError),
    #[error(transparent)]
    Phy(#[from] PhyError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Csv { path: String, line: usize, message: String },
}

impl HarnessError {
    /// I/O failures, as opposed to validation failures.
    pub fn is_io(&self) -> bool {
        matches!(self, HarnessError::Io { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_frame_errors: 100,
            max_frames: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub st2d: St2dConfig,
    pub mimo: MimoConfig,
    pub ebn0_points_db: Vec<f64>,
    pub stop_rule: StopRule,
    pub master_seed: u64,
    /// Worker count hint; the environment override wins.
    pub workers: Option<usize>,
    pub demapper: Demapper,
    /// Skip the additive noise (debug mode).
    pub noiseless: bool,
    /// Stop a sweep after the first point whose FER falls below this value.
    pub fer_floor: Option<f64>,
}

impl SimConfig {
    pub fn new(st2d: St2dConfig, mimo: MimoConfig, ebn0_points_db: Vec<f64>) -> Result<Self, HarnessError> {
        let cfg = SimConfig {
            st2d,
            mimo,
            ebn0_points_db,
            stop_rule: StopRule::default(),
            master_seed: 0,
            workers: None,
            demapper: Demapper::default(),
            noiseless: false,
            fer_floor: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        self.mimo.validate()?;
        if self.st2d.layers() != self.mimo.tx_antennas {
            return bad(format!(
                "{} layers on {} transmit antennas",
                self.st2d.layers(),
                self.mimo.tx_antennas
            ));
        }
        if self.st2d.symbol_bits() != self.mimo.modulation_q {
            return bad(format!(
                "trellis built for {}-bit symbols, modulation carries {}",
                self.st2d.symbol_bits(),
                self.mimo.modulation_q
            ));
        }
        if self.ebn0_points_db.is_empty() {
            return bad("no Eb/N0 points".into());
        }
        if self.ebn0_points_db.iter().any(|x| !x.is_finite()) {
            return bad("non-finite Eb/N0 point".into());
        }
        if self.stop_rule.min_frame_errors == 0 || self.stop_rule.max_frames == 0 {
            return bad("stop rule counts must be positive".into());
        }
        if self.workers == Some(0) {
            return bad("worker count must be positive".into());
        }
        if let Some(f) = self.fer_floor {
            if !(0.0..=1.0).contains(&f) {
                return bad(format!("FER floor {f} outside [0, 1]"));
            }
        }
        Ok(())
    }

    fn noise_point(&self, ebn0_db: f64) -> Result<NoisePoint, HarnessError> {
        if self.noiseless {
            return Ok(NoisePoint::noiseless());
        }
        Ok(NoisePoint::new(
            ebn0_db,
            self.mimo.modulation_q,
            self.st2d.overall_rate(),
        )?)
    }
}

/// One measured operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct FerRecord {
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub bit_errors: u64,
    pub ber: f64,
    pub seconds: f64,
}

impl FerRecord {
    pub fn new(ebn0_db: f64, frames: u64, frame_errors: u64, bit_errors: u64, info_bits: u64, seconds: f64) -> Self {
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        FerRecord {
            ebn0_db,
            frames,
            frame_errors,
            fer: ratio(frame_errors, frames),
            bit_errors,
            ber: ratio(bit_errors, frames * info_bits),
            seconds,
        }
    }

    /// Binomial standard deviation of the FER estimate.
    pub fn fer_sigma(&self) -> f64 {
        binomial_sigma(self.fer, self.frames)
    }
}

/// Seed of point `index` of a sweep.
pub fn point_seed(master_seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng.next_u64()
}

/// Random source of frame `index` at a point.
pub fn frame_rng(point_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed);
    rng.set_stream(index);
    rng
}

/// Worker count: the environment override, then the config hint, then the
/// number of available cores.
pub fn worker_count(hint: Option<usize>) -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .or(hint)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

struct FrameOutcome {
    frame_error: bool,
    bit_errors: u64,
}

fn simulate_frame(
    cfg: &SimConfig,
    codec: &mut St2dCodec,
    lengths: &[usize],
    noise: &NoisePoint,
    seed: u64,
    index: u64,
) -> Result<FrameOutcome, HarnessError> {
    let mut rng = frame_rng(seed, index);
    let info = BitStreams::random(lengths, &mut rng);
    let trellis = codec.encode(&info)?;
    let opts = LinkOptions { demapper: cfg.demapper };
    let llrs = transmit_frame(&trellis, &cfg.mimo, noise, opts, &mut rng)?;
    let decoded = codec.decode(&llrs)?;
    let errors = bit_errors(&info, &decoded) as u64;
    Ok(FrameOutcome {
        frame_error: errors > 0,
        bit_errors: errors,
    })
}

/// Simulates frames at one Eb/N0 until the stop rule fires.
pub fn run_point(cfg: &SimConfig, ebn0_db: f64, seed: u64) -> Result<FerRecord, HarnessError> {
    cfg.validate()?;
    let noise = cfg.noise_point(ebn0_db)?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(cfg.workers))
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let codec = St2dCodec::new(cfg.st2d.clone());
    let lengths = cfg.st2d.stream_lengths();
    let stop = cfg.stop_rule;

    let (mut frames, mut frame_errors, mut bits) = (0u64, 0u64, 0u64);
    let mut batch = FIRST_BATCH;
    'run: while frames < stop.max_frames {
        let n = batch.min(stop.max_frames - frames);
        let outcomes: Vec<Result<FrameOutcome, HarnessError>> = pool.install(|| {
            (frames..frames + n)
                .into_par_iter()
                .map_init(
                    || codec.clone(),
                    |codec, f| simulate_frame(cfg, codec, &lengths, &noise, seed, f),
                )
                .collect()
        });
        for outcome in outcomes {
            let o = outcome?;
            frames += 1;
            bits += o.bit_errors;
            if o.frame_error {
                frame_errors += 1;
                if frame_errors >= stop.min_frame_errors {
                    break 'run;
                }
            }
        }
        batch = (batch * 2).min(MAX_BATCH);
    }
    Ok(FerRecord::new(
        ebn0_db,
        frames,
        frame_errors,
        bits,
        cfg.st2d.info_bits() as u64,
        start.elapsed().as_secs_f64(),
    ))
}

/// Runs every Eb/N0 point in ascending order; point `i` uses seed
/// [`point_seed`]`(master_seed, i)`.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<FerRecord>, HarnessError> {
    cfg.validate()?;
    let mut points = cfg.ebn0_points_db.clone();
    points.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(points.len());
    for (i, &ebn0) in points.iter().enumerate() {
        let rec = run_point(cfg, ebn0, point_seed(cfg.master_seed, i as u64))?;
        let below_floor = cfg.fer_floor.is_some_and(|f| rec.fer < f);
        out.push(rec);
        if below_floor {
            break;
        }
    }
    Ok(out)
}

/// Runs points `start`, `start + step`, ... in order until one measures a
/// FER below `target` or `max_points` points have run. Point `i` uses seed
/// [`point_seed`]`(master_seed, i)`, as in [`run_sweep`].
pub fn run_until_below(
    cfg: &SimConfig,
    start_db: f64,
    step_db: f64,
    target: f64,
    max_points: usize,
) -> Result<Vec<FerRecord>, HarnessError> {
    cfg.validate()?;
    if !(step_db > 0.0) || !start_db.is_finite() {
        return Err(HarnessError::Config(format!("invalid search grid {start_db} + k·{step_db}")));
    }
    let mut out = Vec::new();
    for i in 0..max_points {
        let ebn0 = start_db + i as f64 * step_db;
        let rec = run_point(cfg, ebn0, point_seed(cfg.master_seed, i as u64))?;
        let below = rec.fer < target;
        out.push(rec);
        if below {
            break;
        }
    }
    Ok(out)
}
