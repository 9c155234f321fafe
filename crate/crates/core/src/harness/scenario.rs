use super::config::{ChannelProfileConfig, InterfererPowers, ScenarioConfig};
use crate::error::Result;
use crate::linalg::CVector;
use crate::signal::{
    isi_span, noise_variance_from_ebn0, random_three_path, synthesize_with_parts,
    ChannelRealization, DopplerDesign, PathProfile, SpreadingSet, SymbolStream,
};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use std::sync::Arc;

/// One received vector with its ground truth.
#[derive(Debug, Clone)]
pub struct Observation {
    pub r: CVector,
    /// Noiseless contribution of the desired user's current symbol.
    pub desired: CVector,
    /// Desired user's current symbol.
    pub b: f64,
    /// Channel gains in effect for this symbol.
    pub gains: CVector,
}

/// A drawn realization of a scenario: codes, powers, channel and symbol
/// history.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub spreading: SpreadingSet,
    pub channel: ChannelRealization,
    pub amplitudes: Vec<f64>,
    pub sigma2: f64,
    stream: SymbolStream,
}

impl Scenario {
    pub fn draw<R: Rng + ?Sized>(
        cfg: &ScenarioConfig,
        design: Option<&Arc<DopplerDesign>>,
        rng: &mut R,
    ) -> Result<Self> {
        cfg.validate()?;
        let spreading = SpreadingSet::gold(cfg.gold_degree()?, cfg.k)?;
        let mut amplitudes = vec![1.0];
        match &cfg.interferer_powers {
            InterfererPowers::Fixed { db } => {
                for j in 0..cfg.k - 1 {
                    let p = if db.len() == 1 { db[0] } else { db[j] };
                    amplitudes.push(10f64.powf(p / 20.0));
                }
            }
            InterfererPowers::LogNormal { sigma_db } => {
                let normal = Normal::new(0.0, *sigma_db)
                    .map_err(|e| crate::Error::Config(format!("log-normal sigma: {e}")))?;
                for _ in 1..cfg.k {
                    amplitudes.push(10f64.powf(normal.sample(rng) / 20.0));
                }
            }
        }
        let profile = match &cfg.channel_profile {
            ChannelProfileConfig::Fixed { delays, powers_db } => {
                PathProfile::from_delays_db(cfg.lp, delays, powers_db)?
            }
            ChannelProfileConfig::Random { powers_db } => {
                random_three_path(rng, cfg.lp, *powers_db)?
            }
        };
        let channel = match cfg.fd_t {
            None => ChannelRealization::fixed(profile),
            Some(fd) => ChannelRealization::fading(profile, fd, design, rng)?,
        };
        let ls = isi_span(cfg.lp, cfg.n);
        let stream = SymbolStream::new(amplitudes.clone(), ls, rng);
        Ok(Self {
            spreading,
            channel,
            amplitudes,
            sigma2: noise_variance_from_ebn0(cfg.ebn0_db),
            stream,
        })
    }

    /// Desired user's code.
    pub fn code(&self) -> CVector {
        self.spreading.code(0)
    }

    /// Produces the received vector for the current symbol, then advances
    /// the symbol history and the channel.
    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Observation> {
        let frame = self.stream.frame();
        let b = frame.current(0);
        let parts =
            synthesize_with_parts(&self.spreading, &self.channel, &frame, 0, self.sigma2, rng)?;
        let gains = self.channel.gains.clone();
        self.stream.advance(rng);
        self.channel.step(rng);
        Ok(Observation {
            r: parts.total.samples,
            desired: parts.desired,
            b,
            gains,
        })
    }
}
