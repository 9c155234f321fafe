use super::{state_output, AdaptiveReceiver, Reference};
use crate::interp::{interpolate_then_decimate, interpolator_regressor, Decimation, ReceiverState};
use crate::linalg::{CVector, C64};

/// Step sizes for the stochastic-gradient recursions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `mu = mu0 / (r_bar^H r_bar)`, `eta = eta0 / (u^H u)`.
    Normalized { mu0: f64, eta0: f64 },
    /// Constant steps.
    Fixed { mu: f64, eta: f64 },
}

impl StepRule {
    /// Step for `w` given the regressor energy; `None` when the normalized
    /// denominator vanishes.
    pub(crate) fn mu(&self, energy: f64) -> Option<f64> {
        match *self {
            StepRule::Normalized { mu0, .. } => (energy > 0.0).then(|| mu0 / energy),
            StepRule::Fixed { mu, .. } => Some(mu),
        }
    }

    pub(crate) fn eta(&self, energy: f64) -> Option<f64> {
        match *self {
            StepRule::Normalized { eta0, .. } => (energy > 0.0).then(|| eta0 / energy),
            StepRule::Fixed { eta, .. } => Some(eta),
        }
    }
}

/// Trained (N)LMS for the interpolated receiver.
#[derive(Debug, Clone)]
pub struct TrainedSg {
    pub state: ReceiverState,
    pub dec: Decimation,
    pub step: StepRule,
    /// `false` freezes `v` (full-rank and fixed-interpolator baselines).
    pub adapt_interpolator: bool,
}

/// Output and a-priori error of one trained step.
#[derive(Debug, Clone, Copy)]
pub struct TrainedStep {
    pub output: C64,
    pub error: C64,
}

impl TrainedSg {
    pub fn new(state: ReceiverState, dec: Decimation, step: StepRule) -> Self {
        Self {
            state,
            dec,
            step,
            adapt_interpolator: true,
        }
    }

    /// `e = b - w^H r_bar`; `v += eta e* u`; `w += mu e* r_bar`.
    pub fn step(&mut self, r: &CVector, b: f64) -> TrainedStep {
        let rbar = interpolate_then_decimate(&self.state.v, r, &self.dec);
        let x = self.state.w.dotc(&rbar);
        let e = C64::from(b) - x;

        if self.adapt_interpolator {
            let u = interpolator_regressor(&self.state.w, r, self.state.v.len(), &self.dec);
            if let Some(eta) = self.step.eta(u.norm_squared()) {
                self.state.v.axpy(e.conj() * eta, &u, C64::from(1.0));
            }
        }
        if let Some(mu) = self.step.mu(rbar.norm_squared()) {
            self.state.w.axpy(e.conj() * mu, &rbar, C64::from(1.0));
        }
        TrainedStep {
            output: x,
            error: e,
        }
    }
}

impl AdaptiveReceiver for TrainedSg {
    fn output(&self, r: &CVector) -> C64 {
        state_output(&self.state, &self.dec, r)
    }

    fn update(&mut self, r: &CVector, reference: Reference) -> C64 {
        match reference {
            Reference::Symbol(b) => self.step(r, b).output,
            Reference::Blind => self.output(r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn setup() -> (TrainedSg, CVector) {
        let dec = Decimation::new(4, 2).unwrap();
        let state = ReceiverState::impulse(2, CVector::from_element(2, C64::new(0.1, 0.2)));
        let r = CVector::from_vec(vec![ONE, C64::new(0.5, -0.5), -ONE, C64::new(0.0, 1.0)]);
        (
            TrainedSg::new(
                state,
                dec,
                StepRule::Normalized {
                    mu0: 0.5,
                    eta0: 0.5,
                },
            ),
            r,
        )
    }

    #[test]
    fn zero_error_leaves_state_unchanged() {
        let (mut s, r) = setup();
        s.state.w = CVector::zeros(2);
        s.state.w[0] = C64::new(0.7, 0.0);
        let x0 = s.output(&r);
        assert_eq!(x0.im, 0.0);
        let before = s.state.clone();
        let out = s.step(&r, x0.re);
        assert_eq!(out.error, C64::from(0.0));
        assert_eq!(s.state, before);
    }

    #[test]
    fn zero_mu_freezes_filter() {
        let (mut s, r) = setup();
        s.step = StepRule::Normalized {
            mu0: 0.0,
            eta0: 0.5,
        };
        let w0 = s.state.w.clone();
        let v0 = s.state.v.clone();
        s.step(&r, 1.0);
        assert_eq!(s.state.w, w0);
        assert_ne!(s.state.v, v0);
    }

    #[test]
    fn zero_regressor_skips_update_but_reports_error() {
        let (mut s, _) = setup();
        let r = CVector::zeros(4);
        let before = s.state.clone();
        let out = s.step(&r, 1.0);
        assert_eq!(out.error, ONE);
        assert_eq!(s.state, before);
    }
}
