//! Online algorithms that update an interpolated receiver one received
//! vector at a time.
//!
//! Within a step the output and error are computed with the pre-update
//! filters, and both the interpolator and the reduced-rank filter are then
//! updated from those pre-update values (Jacobi-style).

mod cmv_rls;
mod cmv_sg;
mod lms;
mod rls;
mod tracker;

pub use cmv_rls::BlindRls;
pub use cmv_sg::BlindSg;
pub use lms::{StepRule, TrainedSg};
pub use rls::TrainedRls;
pub use tracker::ChannelTracker;

use crate::interp::{interpolate_then_decimate, Decimation, ReceiverState};
use crate::linalg::{CVector, C64};

/// What drives an update: a known (or decided) symbol, or nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    Symbol(f64),
    Blind,
}

/// Common surface of every adaptive receiver.
pub trait AdaptiveReceiver {
    /// Output of the current filter for `r`, without adapting.
    fn output(&self, r: &CVector) -> C64;

    /// Adapts on `r` and returns the pre-update output.
    fn update(&mut self, r: &CVector, reference: Reference) -> C64;

    /// Supplies the true channel gains for the current symbol. Receivers
    /// with known channels use them directly; blind trackers only take the
    /// phase of the first path as reference.
    fn observe_channel(&mut self, _gains: &CVector) {}
}

pub(crate) fn state_output(state: &ReceiverState, dec: &Decimation, r: &CVector) -> C64 {
    state.w.dotc(&interpolate_then_decimate(&state.v, r, dec))
}

pub(crate) fn normalize(v: &mut CVector) {
    let n = v.norm();
    if n > 0.0 {
        *v /= C64::from(n);
    }
}
