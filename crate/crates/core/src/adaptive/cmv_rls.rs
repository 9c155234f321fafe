use super::rls::InverseCorrelation;
use super::{normalize, state_output, AdaptiveReceiver, ChannelTracker, Reference};
use crate::cmv::{shift_step, ConstraintSet};
use crate::interp::{interpolate_then_decimate, interpolator_regressor, Decimation, ReceiverState};
use crate::linalg::{inverse_hpd, make_hermitian, trace_re, CMatrix, CVector, C64};

pub const GAMMA_RESYNC_PERIOD: u64 = 64;

/// Blind constrained minimum variance RLS receiver.
///
/// `P ~ R_bar^{-1}` and `Gamma^{-1} = (C^H D^H P D C)^{-1}` are both updated
/// by rank-one recursions; `w = P D C Gamma^{-1} g_hat`. The interpolator
/// takes one shift iteration per symbol on the running estimate of `R_u`.
/// The `Gamma^{-1}` recursion amplifies rounding errors by `1/alpha` per
/// step, so it is recomputed from `P` every [`GAMMA_RESYNC_PERIOD`] steps.
#[derive(Debug, Clone)]
pub struct BlindRls {
    pub state: ReceiverState,
    pub dec: Decimation,
    pub cons: ConstraintSet,
    pub adapt_interpolator: bool,
    pub breakdowns: usize,
    inv: InverseCorrelation,
    gamma_inv: CMatrix,
    steps: u64,
    r_u: CMatrix,
    g_hat: CVector,
    tracker: Option<ChannelTracker>,
}

impl BlindRls {
    pub fn new(
        ni: usize,
        dec: Decimation,
        cons: ConstraintSet,
        alpha: f64,
        delta: f64,
        g_hat: CVector,
        tracker: Option<ChannelTracker>,
    ) -> Self {
        let g_hat = tracker.as_ref().map_or(g_hat, |t| t.estimate().clone());
        let inv = InverseCorrelation::new(dec.m_red, alpha, delta);
        let gamma_inv = &cons.gram_inv / C64::from(delta);
        let r_u = CMatrix::identity(ni, ni) / C64::from(delta);
        let mut s = Self {
            state: ReceiverState::impulse(ni, CVector::zeros(dec.m_red)),
            dec,
            cons,
            adapt_interpolator: true,
            breakdowns: 0,
            inv,
            gamma_inv,
            steps: 0,
            r_u,
            g_hat,
            tracker,
        };
        s.state.w = s.filter();
        s
    }

    pub fn channel_estimate(&self) -> &CVector {
        &self.g_hat
    }

    pub fn set_channel(&mut self, g: CVector) {
        if self.tracker.is_none() {
            self.g_hat = g;
        }
    }

    pub fn tracker_mut(&mut self) -> Option<&mut ChannelTracker> {
        self.tracker.as_mut()
    }

    pub fn p(&self) -> &CMatrix {
        &self.inv.p
    }

    fn filter(&self) -> CVector {
        &self.inv.p * (&self.cons.dc * (&self.gamma_inv * &self.g_hat))
    }

    fn reset_gamma(&mut self) {
        let gamma = self.cons.dc.ad_mul(&(&self.inv.p * &self.cons.dc));
        self.gamma_inv = inverse_hpd(&gamma, 0.0, "constrained correlation")
            .unwrap_or_else(|_| &self.cons.gram_inv / C64::from(self.inv.delta));
    }

    /// One step; returns the pre-update output.
    pub fn step(&mut self, r: &CVector) -> C64 {
        let rbar = interpolate_then_decimate(&self.state.v, r, &self.dec);
        let x = self.state.w.dotc(&rbar);

        if self.adapt_interpolator {
            let u = interpolator_regressor(&self.state.w, r, self.state.v.len(), &self.dec);
            self.r_u *= C64::from(self.inv.alpha);
            self.r_u
                .ger(C64::from(1.0), &u, &u.conjugate(), C64::from(1.0));
            let tr = trace_re(&self.r_u);
            if tr > 0.0 {
                self.state.v = shift_step(&self.r_u, &self.state.v, 1.0 / tr);
                normalize(&mut self.state.v);
            }
        }

        let up = self.inv.update(&rbar);
        if up.reset {
            self.breakdowns += 1;
            self.reset_gamma();
        } else {
            // Gamma(i) = alpha^{-1} (Gamma - gamma gamma^H / denom)
            let gamma = self.cons.dc.ad_mul(&up.pi);
            let gi_gamma = &self.gamma_inv * &gamma;
            let d = up.denom - gamma.dotc(&gi_gamma).re;
            if d > 0.0 && d.is_finite() {
                self.gamma_inv.ger(
                    C64::from(1.0 / d),
                    &gi_gamma,
                    &gi_gamma.conjugate(),
                    C64::from(1.0),
                );
                self.gamma_inv *= C64::from(self.inv.alpha);
                make_hermitian(&mut self.gamma_inv);
            } else {
                self.breakdowns += 1;
                self.reset_gamma();
            }
        }

        self.steps += 1;
        if self.steps.is_multiple_of(GAMMA_RESYNC_PERIOD) {
            self.reset_gamma();
        }

        if let Some(t) = self.tracker.as_mut() {
            self.g_hat = t.update(r).clone();
        }
        self.state.w = self.filter();
        x
    }
}

impl AdaptiveReceiver for BlindRls {
    fn output(&self, r: &CVector) -> C64 {
        state_output(&self.state, &self.dec, r)
    }

    fn update(&mut self, r: &CVector, _reference: Reference) -> C64 {
        self.step(r)
    }

    fn observe_channel(&mut self, gains: &CVector) {
        match self.tracker.as_mut() {
            Some(t) => t.set_reference_phase(gains.iter().next().copied()),
            None => self.g_hat = gains.clone(),
        }
    }
}
