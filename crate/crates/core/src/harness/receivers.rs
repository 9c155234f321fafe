//! Construction of the configured receiver and the baseline structures.

use super::config::{AlgorithmKind, ChannelEstimation, ReceiverKind, ScenarioConfig};
use crate::adaptive::{
    AdaptiveReceiver, BlindRls, BlindSg, ChannelTracker, Reference, StepRule, TrainedRls, TrainedSg,
};
use crate::cmv::{build_constraints, constraints_from_parts, shifted_code_matrix, ConstraintSet};
use crate::error::Result;
use crate::interp::{Decimation, ReceiverState};
use crate::linalg::{CMatrix, CVector, C64};

/// Boxed receiver usable from worker threads.
pub type DynReceiver = Box<dyn AdaptiveReceiver + Send>;

/// RAKE: matched filter to the effective signature `C g`.
#[derive(Debug, Clone)]
pub struct Rake {
    c: CMatrix,
    g: CVector,
    tracker: Option<ChannelTracker>,
}

impl Rake {
    pub fn new(code: &CVector, lp: usize, tracker_alpha: Option<(f64, f64)>) -> Self {
        let c = shifted_code_matrix(code, lp);
        let tracker =
            tracker_alpha.map(|(alpha, delta)| ChannelTracker::new(c.clone(), alpha, delta));
        let mut g = CVector::zeros(lp);
        g[0] = C64::from(1.0);
        Self { c, g, tracker }
    }
}

/// `x = (C g)^H r`.
pub fn rake_output(r: &CVector, g: &CVector, c: &CMatrix) -> C64 {
    (c * g).dotc(r)
}

impl AdaptiveReceiver for Rake {
    fn output(&self, r: &CVector) -> C64 {
        rake_output(r, &self.g, &self.c)
    }

    fn update(&mut self, r: &CVector, _reference: Reference) -> C64 {
        let x = self.output(r);
        if let Some(t) = self.tracker.as_mut() {
            self.g = t.update(r).clone();
        }
        x
    }

    fn observe_channel(&mut self, gains: &CVector) {
        match self.tracker.as_mut() {
            Some(t) => t.set_reference_phase(gains.iter().next().copied()),
            None => self.g = gains.clone(),
        }
    }
}

/// Receiver operating on `F^H r` for a fixed `M x D` front end `F`.
pub struct Projected {
    pub front: CMatrix,
    pub inner: DynReceiver,
}

impl AdaptiveReceiver for Projected {
    fn output(&self, r: &CVector) -> C64 {
        self.inner.output(&self.front.ad_mul(r))
    }

    fn update(&mut self, r: &CVector, reference: Reference) -> C64 {
        let y = self.front.ad_mul(r);
        self.inner.update(&y, reference)
    }

    fn observe_channel(&mut self, gains: &CVector) {
        self.inner.observe_channel(gains);
    }
}

/// Partial-despreading projection: `d` non-overlapping contiguous segments
/// of the code cyclically extended to length `m`, each column normalized.
pub fn pd_projection(code: &CVector, m: usize, d: usize) -> CMatrix {
    let n = code.len();
    let seg = m.div_ceil(d);
    let mut p = CMatrix::zeros(m, d);
    for j in 0..d {
        let rows = (j * seg)..((j + 1) * seg).min(m);
        for t in rows {
            p[(t, j)] = code[t % n];
        }
        let norm = p.column(j).norm();
        if norm > 0.0 {
            p.column_mut(j).unscale_mut(norm);
        }
    }
    p
}

/// Triangular interpolation kernel `(N_I - j) / N_I`, unit norm.
pub fn triangular_kernel(ni: usize) -> CVector {
    let mut v = CVector::from_fn(ni, |j, _| C64::from((ni - j) as f64 / ni as f64));
    v.unscale_mut(v.norm());
    v
}

fn step_rule(cfg: &ScenarioConfig) -> StepRule {
    if cfg.step.normalized {
        StepRule::Normalized {
            mu0: cfg.step.mu,
            eta0: cfg.step.eta,
        }
    } else {
        StepRule::Fixed {
            mu: cfg.step.mu,
            eta: cfg.step.eta,
        }
    }
}

fn tracker(cfg: &ScenarioConfig, code: &CVector) -> Option<ChannelTracker> {
    (cfg.channel_estimation == ChannelEstimation::Tracked).then(|| {
        ChannelTracker::new(
            shifted_code_matrix(code, cfg.lp),
            cfg.tracker_alpha,
            cfg.delta,
        )
    })
}

/// Adaptive core on an arbitrary front end: `dec` and the constraint set
/// describe the reduced space, `v0` the initial interpolator.
fn adaptive_core(
    cfg: &ScenarioConfig,
    code: &CVector,
    dec: Decimation,
    cons: impl FnOnce() -> Result<ConstraintSet>,
    v0: CVector,
    adapt_v: bool,
) -> Result<DynReceiver> {
    let ni = v0.len();
    let mut g0 = CVector::zeros(cfg.lp);
    g0[0] = C64::from(1.0);
    Ok(match cfg.algorithm {
        AlgorithmKind::Lms => {
            let state = ReceiverState::new(v0, CVector::zeros(dec.m_red), &dec)?;
            let mut s = TrainedSg::new(state, dec, step_rule(cfg));
            s.adapt_interpolator = adapt_v;
            Box::new(s)
        }
        AlgorithmKind::Rls => {
            let state = ReceiverState::new(v0, CVector::zeros(dec.m_red), &dec)?;
            let mut s = TrainedRls::new(state, dec, cfg.alpha, cfg.delta);
            s.adapt_interpolator = adapt_v;
            Box::new(s)
        }
        AlgorithmKind::CmvSg => {
            let mut s = BlindSg::new(ni, dec, cons()?, step_rule(cfg), g0, tracker(cfg, code));
            s.state.v = v0;
            s.adapt_interpolator = adapt_v;
            Box::new(s)
        }
        AlgorithmKind::CmvRls => {
            let mut s = BlindRls::new(
                ni,
                dec,
                cons()?,
                cfg.alpha,
                cfg.delta,
                g0,
                tracker(cfg, code),
            );
            s.state.v = v0;
            s.adapt_interpolator = adapt_v;
            Box::new(s)
        }
    })
}

/// Builds the receiver for user 0 described by `cfg`.
pub fn build_receiver(cfg: &ScenarioConfig, code: &CVector) -> Result<DynReceiver> {
    let m = cfg.m();
    let impulse = |ni: usize| {
        let mut v = CVector::zeros(ni);
        v[0] = C64::from(1.0);
        v
    };
    match cfg.receiver {
        ReceiverKind::Int => {
            let dec = Decimation::new(m, cfg.l)?;
            adaptive_core(
                cfg,
                code,
                dec,
                || build_constraints(code, cfg.lp, &dec),
                impulse(cfg.ni),
                true,
            )
        }
        ReceiverKind::FixedInt => {
            let dec = Decimation::new(m, cfg.l)?;
            adaptive_core(
                cfg,
                code,
                dec,
                || build_constraints(code, cfg.lp, &dec),
                triangular_kernel(cfg.ni),
                false,
            )
        }
        ReceiverKind::FullRank => {
            let dec = Decimation::new(m, 1)?;
            adaptive_core(
                cfg,
                code,
                dec,
                || build_constraints(code, cfg.lp, &dec),
                impulse(1),
                false,
            )
        }
        ReceiverKind::Pd => {
            let front = pd_projection(code, m, cfg.pd_dim);
            let dec = Decimation::new(cfg.pd_dim, 1)?;
            let c = shifted_code_matrix(code, cfg.lp);
            let dc = front.ad_mul(&c);
            let inner = adaptive_core(
                cfg,
                code,
                dec,
                || constraints_from_parts(c, dc),
                impulse(1),
                false,
            )?;
            Ok(Box::new(Projected { front, inner }))
        }
        ReceiverKind::Rake => {
            let track = (cfg.channel_estimation == ChannelEstimation::Tracked)
                .then_some((cfg.tracker_alpha, cfg.delta));
            Ok(Box::new(Rake::new(code, cfg.lp, track)))
        }
    }
}
