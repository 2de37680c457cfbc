//! Named experiment presets, one curve per scheme.
//!
//! All presets use the running setup: `64 × 128` antennas, 16-QAM, fresh
//! Rayleigh fading per channel use, overall rate 1/4 and one codeword per
//! trellis row or column (so `M_bit = N^time`). The N^space sweep instead
//! sets `N_t = N_r / 2 = N^space`. All curves share one Eb/N0 grid that
//! spans FER from about 1 down to [`FER_FLOOR`] under the normalization of
//! [`crate::phy::ebn0_to_sigma2`].

use crate::phy::{ChannelSampler, MimoConfig};
use crate::polar::DEFAULT_DESIGN_SNR_DB;
use crate::st2d::{Mode, St2dConfig};

use super::config_file::parse_points;
use super::{HarnessError, SimConfig};

pub const PRESET_NAMES: &[&str] = &[
    "fig_1d_lengths",
    "fig_2d_gain",
    "fig_nspace_sweep",
    "fig_rspace_sweep",
    "fig_ts_vs_st",
];

const Q: usize = 4;
const TX: usize = 64;
const RX: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub config: SimConfig,
}

fn mimo(tx: usize, rx: usize) -> Result<MimoConfig, HarnessError> {
    Ok(MimoConfig::new(tx, rx, Q)?.with_sampler(ChannelSampler::Gram))
}

fn sim(st2d: St2dConfig, mimo: MimoConfig, range: &str) -> Result<SimConfig, HarnessError> {
    let points = parse_points(range).map_err(HarnessError::Config)?;
    let mut cfg = SimConfig::new(st2d, mimo, points)?;
    cfg.fer_floor = Some(FER_FLOOR);
    Ok(cfg)
}

/// 1-D parallel mapping, one length-`ns` codeword per layer at rate 1/4.
pub fn one_d(ns: usize, range: &str) -> Result<Curve, HarnessError> {
    let st2d = St2dConfig::parallel_1d(TX, ns, Q, TX * ns / 4, DEFAULT_DESIGN_SNR_DB)?;
    Ok(Curve {
        label: format!("1d_ns{ns}"),
        config: sim(st2d, mimo(TX, RX)?, range)?,
    })
}

/// Lowest-latency 2-D scheme with `N^time = ntime`, `N^space = nspace`
/// and `R^space = rs_num / rs_den`, overall rate 1/4.
pub fn two_d(
    mode: Mode,
    ntime: usize,
    nspace: usize,
    rs: (usize, usize),
    range: &str,
) -> Result<Curve, HarnessError> {
    let info = ntime * nspace / 4;
    let k_space = nspace * rs.0 / rs.1;
    let st2d = match mode {
        Mode::TimeSpace => St2dConfig::lowest_latency_2d(mode, nspace, ntime, Q, k_space, info, DEFAULT_DESIGN_SNR_DB)?,
        Mode::SpaceTime => {
            let k_time = info / k_space;
            St2dConfig::lowest_latency_2d(mode, nspace, ntime, Q, k_time, info, DEFAULT_DESIGN_SNR_DB)?
        }
        _ => return Err(HarnessError::Config(format!("{} is not a 2-D mode", mode.name()))),
    };
    let tag = match mode {
        Mode::TimeSpace => "ts",
        _ => "st",
    };
    let rt = rate_label(info, ntime * k_space);
    Ok(Curve {
        label: format!("2d_{tag}_ntime{ntime}_nspace{nspace}_rt{rt}_rs{}/{}", rs.0, rs.1),
        config: sim(st2d, mimo(nspace, 2 * nspace)?, range)?,
    })
}

fn rate_label(num: usize, den: usize) -> String {
    let g = gcd(num, den);
    format!("{}/{}", num / g, den / g)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn preset(name: &str) -> Result<Vec<Curve>, HarnessError> {
    const HALF: (usize, usize) = (1, 2);
    let ts = Mode::TimeSpace;
    match name {
        "fig_1d_lengths" => [16, 32, 64, 128].iter().map(|&ns| one_d(ns, GRID)).collect(),
        "fig_2d_gain" => {
            let mut curves: Vec<Curve> = [16, 32, 64].iter().map(|&ns| one_d(ns, GRID)).collect::<Result<_, _>>()?;
            for nt in [16, 32, 64] {
                curves.push(two_d(ts, nt, 64, HALF, GRID)?);
            }
            Ok(curves)
        }
        "fig_nspace_sweep" => {
            let mut curves = Vec::new();
            for nt in [16, 32, 64] {
                for ns in [32, 64, 128] {
                    curves.push(two_d(ts, nt, ns, HALF, GRID)?);
                }
            }
            Ok(curves)
        }
        "fig_rspace_sweep" => {
            let mut curves = Vec::new();
            for nt in [16, 32, 64] {
                for rs in [(3, 4), (1, 2), (3, 8)] {
                    curves.push(two_d(ts, nt, 64, rs, GRID)?);
                }
            }
            Ok(curves)
        }
        "fig_ts_vs_st" => Ok(vec![
            one_d(16, GRID)?,
            two_d(ts, 16, 64, HALF, GRID)?,
            two_d(Mode::SpaceTime, 16, 64, HALF, GRID)?,
        ]),
        other => Err(HarnessError::Config(format!(
            "unknown preset `{other}` (expected one of {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}

/// Eb/N0 grid of every curve; each sweep stops after its first point below
/// [`FER_FLOOR`].
pub const GRID: &str = "-16:0.5:-4";
pub const FER_FLOOR: f64 = 1e-4;
