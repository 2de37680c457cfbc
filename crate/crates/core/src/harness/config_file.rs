//! Flat `key = value` simulation config files.
//!
//! Blank lines and `#` comments are ignored; unknown or repeated keys are
//! errors. Component codes are given either explicitly,
//!
//! ```text
//! time_codes  = 16:4x10, 16:8x12, 16:12x10   # length:info[xcount]
//! space_codes = 64:32x16
//! ```
//!
//! or through the shorthand layouts of [`St2dConfig`]: `info_bits` plus
//! `inner_info_len` (2-D modes) or `codeword_len` (folded mode). Eb/N0
//! points are a comma list or an inclusive `start:step:stop` range.

use std::collections::BTreeMap;

use crate::phy::{ChannelSampler, Demapper, FadingUnit, MimoConfig};
use crate::polar::{BoxPlus, PolarCode, DEFAULT_DESIGN_SNR_DB};
use crate::st2d::{Mode, St2dConfig, StageLlr};

use super::{HarnessError, SimConfig, StopRule};

pub const KEYS: &[&str] = &[
    "mode",
    "layers",
    "width",
    "modulation_q",
    "rx_antennas",
    "info_bits",
    "inner_info_len",
    "codeword_len",
    "time_codes",
    "space_codes",
    "design_snr_db",
    "scan_iterations",
    "boxplus",
    "stage_llr",
    "fading",
    "sampler",
    "demapper",
    "ebn0_db",
    "min_frame_errors",
    "max_frames",
    "master_seed",
    "workers",
    "fer_floor",
    "noiseless",
];

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, HarnessError>
    where
        T::Err: std::fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|e| HarnessError::Parse {
                line,
                message: format!("{key}: {e}"),
            }),
        }
    }

    fn require<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, HarnessError>
    where
        T::Err: std::fmt::Display,
    {
        self.parse(key)?
            .ok_or_else(|| HarnessError::Config(format!("missing key `{key}`")))
    }

    fn choice<T: Copy>(&mut self, key: &str, options: &[(&str, T)]) -> Result<Option<T>, HarnessError> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => options
                .iter()
                .find(|(name, _)| *name == v)
                .map(|&(_, t)| Some(t))
                .ok_or_else(|| HarnessError::Parse {
                    line,
                    message: format!(
                        "{key}: `{v}` is not one of {}",
                        options.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
                    ),
                }),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        line,
        message: message.into(),
    }
}

/// `start:step:stop` (inclusive) or a comma list.
pub fn parse_points(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    match parts.as_slice() {
        [start, step, stop] => {
            let (a, d, b) = (num(start)?, num(step)?, num(stop)?);
            if !(d > 0.0) || b < a {
                return Err(format!("bad range `{text}`"));
            }
            let n = ((b - a) / d + 1e-9).floor() as usize + 1;
            Ok((0..n).map(|i| ((a + i as f64 * d) * 1e9).round() / 1e9).collect())
        }
        [_] => text.split(',').map(|s| num(s.trim())).collect(),
        _ => Err(format!("bad range `{text}`")),
    }
}

/// `length:info[xcount]` items, comma separated.
fn parse_codes(text: &str, design_snr_db: f64, line: usize) -> Result<Vec<PolarCode>, HarnessError> {
    let mut codes = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (desc, count) = match item.split_once('x') {
            Some((s, c)) => (s, c.trim().parse::<usize>().map_err(|e| parse_err(line, format!("`{item}`: {e}")))?),
            None => (item, 1),
        };
        let (n, k) = desc
            .split_once(':')
            .ok_or_else(|| parse_err(line, format!("`{item}` is not length:info")))?;
        let n: usize = n.trim().parse().map_err(|e| parse_err(line, format!("`{item}`: {e}")))?;
        let k: usize = k.trim().parse().map_err(|e| parse_err(line, format!("`{item}`: {e}")))?;
        let code = PolarCode::construct(n.next_power_of_two(), k, n, design_snr_db)
            .map_err(|e| parse_err(line, format!("`{item}`: {e}")))?;
        codes.extend(std::iter::repeat_n(code, count));
    }
    Ok(codes)
}

pub fn parse_config(text: &str) -> Result<SimConfig, HarnessError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected `key = value`, got `{content}`")))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(parse_err(line, format!("unknown key `{key}`")));
        }
        if map.insert(key.to_string(), (line, value.trim().to_string())).is_some() {
            return Err(parse_err(line, format!("repeated key `{key}`")));
        }
    }
    let mut e = Entries { map };

    let mode: Mode = e.require("mode")?;
    let layers: usize = e.require("layers")?;
    let width: usize = e.require("width")?;
    let q: usize = e.require("modulation_q")?;
    let rx: usize = e.parse("rx_antennas")?.unwrap_or(2 * layers);
    let design: f64 = e.parse("design_snr_db")?.unwrap_or(DEFAULT_DESIGN_SNR_DB);
    let info_bits: Option<usize> = e.parse("info_bits")?;
    let inner_info_len: Option<usize> = e.parse("inner_info_len")?;
    let codeword_len: Option<usize> = e.parse("codeword_len")?;
    let time_codes = e.take("time_codes");
    let space_codes = e.take("space_codes");

    let st2d = if time_codes.is_some() || space_codes.is_some() {
        if info_bits.is_some() || inner_info_len.is_some() || codeword_len.is_some() {
            return Err(HarnessError::Config(
                "explicit code lists exclude info_bits, inner_info_len and codeword_len".into(),
            ));
        }
        let codes = |entry: Option<(usize, String)>| match entry {
            Some((line, v)) => parse_codes(&v, design, line),
            None => Ok(Vec::new()),
        };
        St2dConfig::new(mode, layers, width, q, codes(time_codes)?, codes(space_codes)?)?
    } else {
        let info = info_bits.ok_or_else(|| HarnessError::Config("missing key `info_bits`".into()))?;
        match mode {
            Mode::TimeSpace | Mode::SpaceTime => {
                let inner = inner_info_len
                    .ok_or_else(|| HarnessError::Config("missing key `inner_info_len`".into()))?;
                St2dConfig::lowest_latency_2d(mode, layers, width, q, inner, info, design)?
            }
            Mode::TimeOnlyParallel => St2dConfig::parallel_1d(layers, width, q, info, design)?,
            Mode::TimeOnlyFolded => {
                St2dConfig::folded_1d(layers, width, q, codeword_len.unwrap_or(width), info, design)?
            }
        }
    };
    let mut st2d = st2d;
    if let Some(n) = e.parse::<usize>("scan_iterations")? {
        st2d = st2d.with_scan_iterations(n)?;
    }
    if let Some(b) = e.choice("boxplus", &[("min_sum", BoxPlus::MinSum), ("exact", BoxPlus::Exact)])? {
        st2d = st2d.with_boxplus(b);
    }
    if let Some(s) = e.choice(
        "stage_llr",
        &[("posterior", StageLlr::Posterior), ("extrinsic", StageLlr::Extrinsic)],
    )? {
        st2d = st2d.with_stage_llr(s);
    }

    let mut mimo = MimoConfig::new(layers, rx, q)?;
    if let Some(f) = e.choice(
        "fading",
        &[("per_channel_use", FadingUnit::PerChannelUse), ("per_frame", FadingUnit::PerFrame)],
    )? {
        mimo = mimo.with_fading(f);
    }
    if let Some(s) = e.choice("sampler", &[("full", ChannelSampler::Full), ("gram", ChannelSampler::Gram)])? {
        mimo = mimo.with_sampler(s);
    }

    let (line, points) = e
        .take("ebn0_db")
        .ok_or_else(|| HarnessError::Config("missing key `ebn0_db`".into()))?;
    let points = parse_points(&points).map_err(|m| parse_err(line, m))?;

    let mut cfg = SimConfig::new(st2d, mimo, points)?;
    if let Some(d) = e.choice("demapper", &[("max_log", Demapper::MaxLog), ("exact", Demapper::Exact)])? {
        cfg.demapper = d;
    }
    let default = StopRule::default();
    cfg.stop_rule = StopRule {
        min_frame_errors: e.parse("min_frame_errors")?.unwrap_or(default.min_frame_errors),
        max_frames: e.parse("max_frames")?.unwrap_or(default.max_frames),
    };
    cfg.master_seed = e.parse("master_seed")?.unwrap_or(0);
    cfg.workers = e.parse("workers")?;
    cfg.fer_floor = e.parse("fer_floor")?;
    cfg.noiseless = e.parse("noiseless")?.unwrap_or(false);
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_points("-1:0.5:0.5").unwrap(), vec![-1.0, -0.5, 0.0, 0.5]);
        assert_eq!(parse_points("1, 2.5,3").unwrap(), vec![1.0, 2.5, 3.0]);
        assert_eq!(parse_points("0:0.1:0.3").unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
        assert!(parse_points("3:1:1").is_err());
        assert!(parse_points("1:x:2").is_err());
    }

    #[test]
    fn shorthand_two_dimensional() {
        let cfg = parse_config(
            "# T-S at 1/2 x 1/2\nmode = time_space\nlayers = 64\nwidth = 16\nmodulation_q = 4\n\
             info_bits = 256\ninner_info_len = 32\nebn0_db = -12:1:-10\nsampler = gram\nmaster_seed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.st2d.mode(), Mode::TimeSpace);
        assert_eq!(cfg.st2d.time_codes().len(), 32);
        assert_eq!(cfg.mimo.rx_antennas, 128);
        assert_eq!(cfg.mimo.sampler, ChannelSampler::Gram);
        assert_eq!(cfg.ebn0_points_db, vec![-12.0, -11.0, -10.0]);
        assert_eq!(cfg.master_seed, 7);
        assert_eq!(cfg.stop_rule, StopRule::default());
    }

    #[test]
    fn explicit_code_lists() {
        let cfg = parse_config(
            "mode = time_space\nlayers = 64\nwidth = 16\nmodulation_q = 4\n\
             time_codes = 16:4x10, 16:8x12, 16:12x10\nspace_codes = 64:32x16\nebn0_db = 0\n",
        )
        .unwrap();
        assert_eq!(cfg.st2d.info_bits(), 256);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "mode = time_space\nlayers = 4\ncolour = blue\n";
        match parse_config(bad) {
            Err(HarnessError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let dup = "mode = time_space\nmode = space_time\n";
        assert!(matches!(parse_config(dup), Err(HarnessError::Parse { line: 2, .. })));
        let missing = "mode = time_only_parallel\nlayers = 4\nwidth = 8\nmodulation_q = 2\ninfo_bits = 8\n";
        assert!(matches!(parse_config(missing), Err(HarnessError::Config(_))));
        let bad_choice = "mode = time_only_parallel\nlayers = 4\nwidth = 8\nmodulation_q = 2\n\
                          info_bits = 8\nebn0_db = 1\nfading = sometimes\n";
        assert!(matches!(parse_config(bad_choice), Err(HarnessError::Parse { line: 7, .. })));
    }
}
