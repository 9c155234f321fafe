use crate::error::{Error, Result};
use crate::interp::Decimation;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    Lms,
    Rls,
    CmvSg,
    CmvRls,
}

impl AlgorithmKind {
    pub fn is_blind(self) -> bool {
        matches!(self, AlgorithmKind::CmvSg | AlgorithmKind::CmvRls)
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Lms => "lms",
            AlgorithmKind::Rls => "rls",
            AlgorithmKind::CmvSg => "cmv_sg",
            AlgorithmKind::CmvRls => "cmv_rls",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReceiverKind {
    /// Jointly adapted interpolator and reduced-rank filter.
    Int,
    /// Interpolator frozen to a triangular kernel.
    FixedInt,
    FullRank,
    /// Partial despreading with `pd_dim` segments.
    Pd,
    Rake,
}

impl ReceiverKind {
    pub fn name(self) -> &'static str {
        match self {
            ReceiverKind::Int => "int",
            ReceiverKind::FixedInt => "fixed_int",
            ReceiverKind::FullRank => "full_rank",
            ReceiverKind::Pd => "pd",
            ReceiverKind::Rake => "rake",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Training,
    DecisionDirected,
    Blind,
}

/// Interferer amplitudes relative to the desired user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InterfererPowers {
    /// dB offsets; a single value applies to every interferer.
    Fixed { db: Vec<f64> },
    /// Log-normal powers with the given standard deviation in dB.
    LogNormal { sigma_db: f64 },
}

impl Default for InterfererPowers {
    fn default() -> Self {
        InterfererPowers::Fixed { db: vec![0.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ChannelProfileConfig {
    /// Paths at the given chip delays with the given relative powers.
    Fixed {
        delays: Vec<usize>,
        powers_db: Vec<f64>,
    },
    /// Three paths with random delays, redrawn every run.
    Random { powers_db: [f64; 3] },
}

impl Default for ChannelProfileConfig {
    fn default() -> Self {
        ChannelProfileConfig::Random {
            powers_db: [0.0, -6.0, -10.0],
        }
    }
}

/// Channel knowledge used by blind receivers and the RAKE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelEstimation {
    #[default]
    Tracked,
    Known,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepConfig {
    /// `true`: `mu`, `eta` are the normalized factors `mu0`, `eta0`.
    #[serde(default = "default_true")]
    pub normalized: bool,
    pub mu: f64,
    pub eta: f64,
}

fn default_true() -> bool {
    true
}

impl Default for StepConfig {
    fn default() -> Self {
        Self {
            normalized: true,
            mu: 0.05,
            eta: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Spreading gain (31 or 63).
    pub n: usize,
    /// Number of users; user 0 is desired.
    pub k: usize,
    /// Channel length bound in chips.
    pub lp: usize,
    pub l: usize,
    pub ni: usize,
    pub algorithm: AlgorithmKind,
    pub receiver: ReceiverKind,
    pub mode: Mode,
    pub n_tr: usize,
    pub ebn0_db: f64,
    pub interferer_powers: InterfererPowers,
    /// Normalized Doppler; `None` keeps the profile gains real and fixed.
    pub fd_t: Option<f64>,
    pub channel_profile: ChannelProfileConfig,
    pub symbols: usize,
    pub runs: usize,
    pub seed: u64,
    pub step: StepConfig,
    /// RLS forgetting factor.
    pub alpha: f64,
    /// RLS initialization `P(0) = delta I`.
    pub delta: f64,
    /// PD projected dimension.
    pub pd_dim: usize,
    pub channel_estimation: ChannelEstimation,
    /// Forgetting factor of the blind channel tracker.
    pub tracker_alpha: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n: 31,
            k: 8,
            lp: 6,
            l: 2,
            ni: 3,
            algorithm: AlgorithmKind::Rls,
            receiver: ReceiverKind::Int,
            mode: Mode::DecisionDirected,
            n_tr: 200,
            ebn0_db: 12.0,
            interferer_powers: InterfererPowers::default(),
            fd_t: None,
            channel_profile: ChannelProfileConfig::default(),
            symbols: 1500,
            runs: 50,
            seed: 1,
            step: StepConfig::default(),
            alpha: 0.998,
            delta: 10.0,
            pd_dim: 12,
            channel_estimation: ChannelEstimation::default(),
            tracker_alpha: 0.998,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Observation length `M = N + L_p - 1`.
    pub fn m(&self) -> usize {
        self.n + self.lp - 1
    }

    pub fn gold_degree(&self) -> Result<u32> {
        match self.n {
            31 => Ok(5),
            63 => Ok(6),
            n => Err(Error::Config(format!(
                "spreading gain must be 31 or 63, got {n}"
            ))),
        }
    }

    /// Decimation factor and interpolator length actually used by the
    /// configured receiver.
    pub fn effective_structure(&self) -> (usize, usize) {
        match self.receiver {
            ReceiverKind::Int | ReceiverKind::FixedInt => (self.l, self.ni),
            _ => (1, 1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        self.gold_degree()?;
        if self.k == 0 || self.lp == 0 || self.l == 0 || self.ni == 0 {
            return bad("k, lp, l and ni must be positive".into());
        }
        if self.symbols == 0 || self.runs == 0 {
            return bad("symbols and runs must be positive".into());
        }
        if self.k > self.n + 2 {
            return bad(format!("at most {} users for N = {}", self.n + 2, self.n));
        }
        let m = self.m();
        if self.l > m {
            return bad(format!("L = {} exceeds M = {m}", self.l));
        }
        let dec = Decimation::new(m, self.l)?;
        if self.ni > dec.m_red {
            return bad(format!("N_I = {} exceeds M/L = {}", self.ni, dec.m_red));
        }
        if self.algorithm.is_blind() != (self.mode == Mode::Blind) {
            return bad(format!(
                "algorithm {} is incompatible with mode {:?}",
                self.algorithm.name(),
                self.mode
            ));
        }
        if self.receiver == ReceiverKind::Pd && (self.pd_dim == 0 || self.pd_dim > m) {
            return bad(format!("pd_dim must be in 1..={m}"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0)
            || !(self.tracker_alpha > 0.0 && self.tracker_alpha <= 1.0)
        {
            return bad("forgetting factors must lie in (0, 1]".into());
        }
        if !(self.delta > 0.0) {
            return bad("delta must be positive".into());
        }
        if !(self.step.mu >= 0.0 && self.step.eta >= 0.0) {
            return bad("step sizes must be non-negative".into());
        }
        if let Some(fd) = self.fd_t {
            if !(0.0..0.5).contains(&fd) {
                return bad(format!("f_d T = {fd} must lie in [0, 0.5)"));
            }
        }
        match &self.channel_profile {
            ChannelProfileConfig::Fixed { delays, powers_db } => {
                if delays.is_empty() || delays.len() != powers_db.len() {
                    return bad("fixed profile needs matching, non-empty delays and powers".into());
                }
                if delays.iter().any(|&d| d >= self.lp) {
                    return bad(format!("path delays must be < L_p = {}", self.lp));
                }
            }
            ChannelProfileConfig::Random { .. } => {
                if self.lp < 6 {
                    return bad("the random three-path profile needs L_p >= 6".into());
                }
            }
        }
        if let InterfererPowers::Fixed { db } = &self.interferer_powers {
            if db.len() > 1 && db.len() != self.k - 1 {
                return bad(format!(
                    "{} interferer powers given for {} interferers",
                    db.len(),
                    self.k - 1
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_round_trip() {
        let cfg = ScenarioConfig::default();
        cfg.validate().unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ScenarioConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_document_uses_defaults() {
        let cfg = ScenarioConfig::from_json(r#"{"k": 4, "algorithm": "lms", "mode": "training"}"#)
            .unwrap();
        assert_eq!(cfg.k, 4);
        assert_eq!(cfg.n, 31);
    }

    #[test]
    fn rejects_bad_configs() {
        for doc in [
            r#"{"n": 32}"#,
            r#"{"k": 0}"#,
            r#"{"l": 40}"#,
            r#"{"ni": 30}"#,
            r#"{"algorithm": "cmv_sg"}"#,
            r#"{"unknown": 1}"#,
        ] {
            assert!(ScenarioConfig::from_json(doc).is_err(), "{doc}");
        }
    }
}
