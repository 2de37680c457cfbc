//! End-to-end link: modulation, fading, noise, MMSE detection, demapping.

use num_complex::Complex64;
use rand::Rng;

use super::channel::{complex_normal, draw_channel, ChannelRealization};
use super::gram::GramChannel;
use super::mmse::{MmseOutput, MmseWorkspace};
use super::qam::{Constellation, Demapper};
use super::{ChannelSampler, FadingUnit, MimoConfig, PhyError};
use crate::polar::LLR_SATURATION;
use crate::st2d::{CodewordTrellis, LlrTrellis};

/// Noise variance used by the noiseless debug mode (the MMSE regularizer
/// must stay positive).
pub const NOISELESS_SIGMA2: f64 = 1e-10;

/// `σ² = 1 / (R · q · 10^(Eb/N0 / 10))`, for unit-energy symbols on every
/// transmit antenna and `σ²` the complex noise variance per receive antenna.
pub fn ebn0_to_sigma2(ebn0_db: f64, modulation_q: usize, overall_rate: f64) -> Result<f64, PhyError> {
    if !(overall_rate > 0.0 && overall_rate <= 1.0) {
        return Err(PhyError::InvalidRate(overall_rate));
    }
    if !ebn0_db.is_finite() {
        return Err(PhyError::InvalidEbN0);
    }
    Ok(1.0 / (overall_rate * modulation_q as f64 * 10f64.powf(ebn0_db / 10.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisePoint {
    pub ebn0_db: f64,
    pub sigma2: f64,
    /// Skip the additive noise entirely (debug mode).
    pub noiseless: bool,
}

impl NoisePoint {
    pub fn new(ebn0_db: f64, modulation_q: usize, overall_rate: f64) -> Result<Self, PhyError> {
        Ok(NoisePoint {
            ebn0_db,
            sigma2: ebn0_to_sigma2(ebn0_db, modulation_q, overall_rate)?,
            noiseless: false,
        })
    }

    pub fn noiseless() -> Self {
        NoisePoint {
            ebn0_db: f64::INFINITY,
            sigma2: NOISELESS_SIGMA2,
            noiseless: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LinkOptions {
    pub demapper: Demapper,
}

enum Fade {
    Full(ChannelRealization),
    Gram(GramChannel),
}

impl Fade {
    fn draw<R: Rng + ?Sized>(cfg: &MimoConfig, sigma2: f64, rng: &mut R) -> Result<Self, PhyError> {
        Ok(match cfg.sampler {
            ChannelSampler::Full => Fade::Full(draw_channel(cfg, sigma2, rng)?),
            ChannelSampler::Gram => Fade::Gram(GramChannel::draw(cfg.tx_antennas, cfg.rx_antennas, rng)?),
        })
    }

    fn detect<R: Rng + ?Sized>(
        &self,
        x: &[Complex64],
        noise: &NoisePoint,
        ws: &mut MmseWorkspace,
        rng: &mut R,
    ) -> Result<MmseOutput, PhyError> {
        match self {
            Fade::Full(ch) => {
                let mut y = ch.apply(x);
                if !noise.noiseless {
                    let sigma = noise.sigma2.sqrt();
                    for v in y.iter_mut() {
                        *v += complex_normal(rng) * sigma;
                    }
                }
                ws.detect(&y, ch)
            }
            Fade::Gram(g) => {
                let z = g.matched(x, noise.sigma2, !noise.noiseless, rng);
                g.detect(ws, &z, noise.sigma2)
            }
        }
    }
}

/// Sends one codeword trellis over the MIMO link and returns coded-bit LLRs
/// in the same layout. Row `l` of the trellis is transmitted on antenna `l`;
/// symbol position `m` of every layer forms channel use `m`.
pub fn transmit_frame<R: Rng + ?Sized>(
    trellis: &CodewordTrellis,
    cfg: &MimoConfig,
    noise: &NoisePoint,
    opts: LinkOptions,
    rng: &mut R,
) -> Result<LlrTrellis, PhyError> {
    cfg.validate()?;
    let (layers, width) = trellis.dims();
    let q = cfg.modulation_q;
    if layers != cfg.tx_antennas {
        return Err(PhyError::DimensionMismatch {
            expected: cfg.tx_antennas,
            actual: layers,
        });
    }
    if width % q != 0 {
        return Err(PhyError::IndivisibleBits { bits: width, q });
    }
    let constellation = Constellation::new(q)?;
    let symbols: Vec<Vec<Complex64>> = (0..layers)
        .map(|l| constellation.modulate(trellis.row(l)))
        .collect::<Result<_, _>>()?;
    let uses = width / q;

    let mut out = LlrTrellis::filled(layers, width, 0.0);
    let mut ws = MmseWorkspace::new(layers);
    let mut fade = None;
    let mut x = vec![Complex64::default(); layers];
    let mut llr = vec![0.0; q];
    for m in 0..uses {
        if fade.is_none() || cfg.fading == FadingUnit::PerChannelUse {
            fade = Some(Fade::draw(cfg, noise.sigma2, rng)?);
        }
        for (xl, row) in x.iter_mut().zip(&symbols) {
            *xl = row[m];
        }
        let det = fade.as_ref().expect("drawn above").detect(&x, noise, &mut ws, rng)?;
        for (l, (sym, &sinr)) in det.unbiased().into_iter().zip(&det.sinr).enumerate() {
            constellation.llrs(sym, sinr, opts.demapper, &mut llr)?;
            let row = out.row_mut(l);
            for (dst, &v) in row[m * q..(m + 1) * q].iter_mut().zip(&llr) {
                *dst = v.clamp(-LLR_SATURATION, LLR_SATURATION);
            }
        }
    }
    Ok(out)
}
