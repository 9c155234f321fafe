use super::{normalize, state_output, AdaptiveReceiver, ChannelTracker, Reference, StepRule};
use crate::cmv::ConstraintSet;
use crate::interp::{interpolate_then_decimate, interpolator_regressor, Decimation, ReceiverState};
use crate::linalg::{CVector, C64};

/// Blind constrained minimum variance stochastic-gradient receiver.
///
/// `w <- Pi (w - mu x* r_bar) + D C (C^H D^H D C)^{-1} g_hat`,
/// `v <- v - eta x* u`, then `v` is renormalized.
#[derive(Debug, Clone)]
pub struct BlindSg {
    pub state: ReceiverState,
    pub dec: Decimation,
    pub cons: ConstraintSet,
    pub step: StepRule,
    pub adapt_interpolator: bool,
    g_hat: CVector,
    tracker: Option<ChannelTracker>,
}

impl BlindSg {
    /// Starts from `v = [1, 0, ...]` and the quiescent filter for `g_hat`.
    pub fn new(
        ni: usize,
        dec: Decimation,
        cons: ConstraintSet,
        step: StepRule,
        g_hat: CVector,
        tracker: Option<ChannelTracker>,
    ) -> Self {
        let g_hat = tracker.as_ref().map_or(g_hat, |t| t.estimate().clone());
        let w = cons.quiescent(&g_hat);
        Self {
            state: ReceiverState::impulse(ni, w),
            dec,
            cons,
            step,
            adapt_interpolator: true,
            g_hat,
            tracker,
        }
    }

    pub fn channel_estimate(&self) -> &CVector {
        &self.g_hat
    }

    /// Replaces the channel vector used in the constraint (known-channel
    /// operation); ignored while a tracker is attached.
    pub fn set_channel(&mut self, g: CVector) {
        if self.tracker.is_none() {
            self.g_hat = g;
        }
    }

    pub fn tracker_mut(&mut self) -> Option<&mut ChannelTracker> {
        self.tracker.as_mut()
    }

    /// One step; returns the pre-update output.
    pub fn step(&mut self, r: &CVector) -> C64 {
        let rbar = interpolate_then_decimate(&self.state.v, r, &self.dec);
        let x = self.state.w.dotc(&rbar);

        if self.adapt_interpolator {
            let u = interpolator_regressor(&self.state.w, r, self.state.v.len(), &self.dec);
            if let Some(eta) = self.step.eta(u.norm_squared()) {
                self.state.v.axpy(-x.conj() * eta, &u, C64::from(1.0));
                normalize(&mut self.state.v);
            }
        }
        if let Some(t) = self.tracker.as_mut() {
            self.g_hat = t.update(r).clone();
        }
        let projected = &self.cons.pi * &rbar;
        if let Some(mu) = self.step.mu(rbar.dotc(&projected).re) {
            let mut w = &self.state.w - rbar * (x.conj() * mu);
            w = &self.cons.pi * w;
            w += self.cons.quiescent(&self.g_hat);
            self.state.w = w;
        }
        x
    }
}

impl AdaptiveReceiver for BlindSg {
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
