use super::config::{Mode, ScenarioConfig};
use super::receivers::build_receiver;
use super::scenario::Scenario;
use crate::adaptive::Reference;
use crate::error::Result;
use crate::interp::detect;
use crate::signal::DopplerDesign;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Forgetting factor of the SINR power estimates.
pub const SINR_WINDOW: f64 = 0.98;

const SINR_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    /// Mean MSE over the last tenth of the symbols.
    pub final_mse: f64,
    /// Mean SINR (dB) over the last tenth of the symbols.
    pub final_sinr_db: f64,
    /// Standard error of `final_sinr_db` across runs.
    pub sinr_std_err: f64,
    /// Bit error rate after the training period.
    pub ber: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub algorithm: String,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "N_I")]
    pub ni: usize,
    pub seed: u64,
    pub mse: Vec<f64>,
    pub sinr_db: Vec<f64>,
    /// Cumulative bit error rate.
    pub ber: Vec<f64>,
    pub summary: Summary,
}

impl MetricSeries {
    pub fn len(&self) -> usize {
        self.mse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mse.is_empty()
    }
}

/// `receiver-algorithm` label used in exports.
pub fn label(cfg: &ScenarioConfig) -> String {
    format!("{}-{}", cfg.receiver.name(), cfg.algorithm.name())
}

fn tail_mean(x: &[f64]) -> f64 {
    let n = (x.len() / 10).max(1).min(x.len());
    x[x.len() - n..].iter().sum::<f64>() / n as f64
}

fn doppler_design(cfg: &ScenarioConfig) -> Option<Arc<DopplerDesign>> {
    cfg.fd_t.filter(|&fd| fd > 0.0).map(DopplerDesign::new)
}

fn rng_for(cfg: &ScenarioConfig, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(run);
    rng
}

/// Single Monte-Carlo trial; `run` selects an independent random stream.
pub fn run_trial(cfg: &ScenarioConfig, run: u64) -> Result<MetricSeries> {
    run_trial_with(cfg, run, doppler_design(cfg).as_ref())
}

fn run_trial_with(
    cfg: &ScenarioConfig,
    run: u64,
    design: Option<&Arc<DopplerDesign>>,
) -> Result<MetricSeries> {
    cfg.validate()?;
    let mut rng = rng_for(cfg, run);
    let mut scenario = Scenario::draw(cfg, design, &mut rng)?;
    let mut rx = build_receiver(cfg, &scenario.code())?;
    let (l, ni) = cfg.effective_structure();

    let mut mse = Vec::with_capacity(cfg.symbols);
    let mut sinr_db = Vec::with_capacity(cfg.symbols);
    let mut ber = Vec::with_capacity(cfg.symbols);
    let (mut sig, mut intf) = (0.0, 0.0);
    let (mut errors, mut scored_errors, mut scored) = (0usize, 0usize, 0usize);
    let score_from = if cfg.mode == Mode::Blind || cfg.symbols <= cfg.n_tr {
        0
    } else {
        cfg.n_tr
    };

    for i in 0..cfg.symbols {
        let obs = scenario.next(&mut rng)?;
        rx.observe_channel(&obs.gains);
        let x_des = rx.output(&obs.desired);
        let reference = match cfg.mode {
            Mode::Training => Reference::Symbol(obs.b),
            Mode::DecisionDirected if i < cfg.n_tr => Reference::Symbol(obs.b),
            Mode::DecisionDirected => Reference::Symbol(detect(rx.output(&obs.r))),
            Mode::Blind => Reference::Blind,
        };
        let x = rx.update(&obs.r, reference);

        mse.push((obs.b - x).norm_sqr());
        sig = SINR_WINDOW * sig + x_des.norm_sqr();
        intf = SINR_WINDOW * intf + (x - x_des).norm_sqr();
        sinr_db.push(10.0 * ((sig + SINR_FLOOR) / (intf + SINR_FLOOR)).log10());
        let wrong = detect(x) != obs.b;
        errors += usize::from(wrong);
        if i >= score_from {
            scored += 1;
            scored_errors += usize::from(wrong);
        }
        ber.push(errors as f64 / (i + 1) as f64);
    }

    let summary = Summary {
        runs: 1,
        final_mse: tail_mean(&mse),
        final_sinr_db: tail_mean(&sinr_db),
        sinr_std_err: 0.0,
        ber: scored_errors as f64 / scored.max(1) as f64,
    };
    Ok(MetricSeries {
        algorithm: label(cfg),
        l,
        ni,
        seed: cfg.seed,
        mse,
        sinr_db,
        ber,
        summary,
    })
}

/// Aggregated result of `runs` independent trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Campaign {
    pub mean: MetricSeries,
    pub runs: Vec<Summary>,
}

/// Runs `cfg.runs` trials in parallel and averages them in run order.
pub fn run_campaign(cfg: &ScenarioConfig) -> Result<Campaign> {
    cfg.validate()?;
    let design = doppler_design(cfg);
    let trials: Vec<MetricSeries> = (0..cfg.runs as u64)
        .into_par_iter()
        .map(|run| run_trial_with(cfg, run, design.as_ref()))
        .collect::<Result<_>>()?;
    Ok(aggregate(trials))
}

fn aggregate(trials: Vec<MetricSeries>) -> Campaign {
    let n = trials.len() as f64;
    let mut mean = trials[0].clone();
    if trials.len() > 1 {
        let avg = |get: fn(&MetricSeries) -> &Vec<f64>| -> Vec<f64> {
            (0..get(&trials[0]).len())
                .map(|i| trials.iter().map(|t| get(t)[i]).sum::<f64>() / n)
                .collect()
        };
        mean.mse = avg(|t| &t.mse);
        mean.sinr_db = avg(|t| &t.sinr_db);
        mean.ber = avg(|t| &t.ber);
        let finals: Vec<f64> = trials.iter().map(|t| t.summary.final_sinr_db).collect();
        let m = finals.iter().sum::<f64>() / n;
        let var = finals.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        mean.summary = Summary {
            runs: trials.len(),
            final_mse: trials.iter().map(|t| t.summary.final_mse).sum::<f64>() / n,
            final_sinr_db: m,
            sinr_std_err: (var / n).sqrt(),
            ber: trials.iter().map(|t| t.summary.ber).sum::<f64>() / n,
        };
    }
    Campaign {
        runs: trials.iter().map(|t| t.summary).collect(),
        mean,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "axis", content = "values")]
pub enum SweepAxis {
    EbN0Db(Vec<f64>),
    Users(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub summary: Summary,
}

/// Repeats the campaign for every value on the axis.
pub fn run_sweep(cfg: &ScenarioConfig, axis: &SweepAxis) -> Result<Vec<SweepPoint>> {
    let points: Vec<(f64, ScenarioConfig)> = match axis {
        SweepAxis::EbN0Db(vals) => vals
            .iter()
            .map(|&v| {
                (
                    v,
                    ScenarioConfig {
                        ebn0_db: v,
                        ..cfg.clone()
                    },
                )
            })
            .collect(),
        SweepAxis::Users(vals) => vals
            .iter()
            .map(|&k| (k as f64, ScenarioConfig { k, ..cfg.clone() }))
            .collect(),
    };
    points
        .into_iter()
        .map(|(value, c)| {
            Ok(SweepPoint {
                value,
                summary: run_campaign(&c)?.mean.summary,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{AlgorithmKind, ChannelProfileConfig, ReceiverKind};

    fn small() -> ScenarioConfig {
        ScenarioConfig {
            k: 3,
            symbols: 300,
            runs: 3,
            algorithm: AlgorithmKind::Lms,
            mode: Mode::Training,
            receiver: ReceiverKind::Int,
            channel_profile: ChannelProfileConfig::Fixed {
                delays: vec![0, 2],
                powers_db: vec![0.0, -6.0],
            },
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn trial_is_deterministic() {
        let cfg = small();
        assert_eq!(run_trial(&cfg, 2).unwrap(), run_trial(&cfg, 2).unwrap());
        assert_ne!(
            run_trial(&cfg, 1).unwrap().mse,
            run_trial(&cfg, 2).unwrap().mse
        );
    }

    #[test]
    fn single_run_campaign_equals_trial() {
        let cfg = ScenarioConfig { runs: 1, ..small() };
        assert_eq!(
            run_campaign(&cfg).unwrap().mean,
            run_trial(&cfg, 0).unwrap()
        );
    }

    #[test]
    fn series_lengths_and_ber_range() {
        let s = run_campaign(&small()).unwrap().mean;
        assert_eq!(s.len(), 300);
        assert_eq!(s.sinr_db.len(), 300);
        assert!(s.ber.iter().all(|b| (0.0..=1.0).contains(b)));
        assert!(s.sinr_db.iter().all(|x| x.is_finite()));
    }
}
