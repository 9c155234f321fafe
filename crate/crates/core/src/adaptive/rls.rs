use super::{state_output, AdaptiveReceiver, Reference};
use crate::interp::{interpolate_then_decimate, interpolator_regressor, Decimation, ReceiverState};
use crate::linalg::{make_hermitian, CMatrix, CVector, C64};

/// Exponentially weighted inverse-correlation estimate updated by the matrix
/// inversion lemma.
#[derive(Debug, Clone)]
pub(crate) struct InverseCorrelation {
    pub p: CMatrix,
    pub alpha: f64,
    pub delta: f64,
}

/// Result of a rank-one update of `P`.
pub(crate) struct RankOne {
    /// `P(i-1) x`.
    pub pi: CVector,
    /// `alpha + x^H P(i-1) x`.
    pub denom: f64,
    /// The update hit a non-positive denominator and `P` was reset.
    pub reset: bool,
}

impl InverseCorrelation {
    pub fn new(dim: usize, alpha: f64, delta: f64) -> Self {
        Self {
            p: CMatrix::identity(dim, dim) * C64::from(delta),
            alpha,
            delta,
        }
    }

    pub fn reset(&mut self) {
        let n = self.p.nrows();
        self.p = CMatrix::identity(n, n) * C64::from(self.delta);
    }

    /// `P <- alpha^{-1} (P - P x x^H P / (alpha + x^H P x))`.
    pub fn update(&mut self, x: &CVector) -> RankOne {
        let pi = &self.p * x;
        let denom = self.alpha + x.dotc(&pi).re;
        if !(denom > 0.0) || !denom.is_finite() {
            self.reset();
            let pi = &self.p * x;
            let denom = self.alpha + x.dotc(&pi).re;
            self.apply(&pi, denom);
            return RankOne {
                pi,
                denom,
                reset: true,
            };
        }
        self.apply(&pi, denom);
        RankOne {
            pi,
            denom,
            reset: false,
        }
    }

    fn apply(&mut self, pi: &CVector, denom: f64) {
        self.p
            .ger(C64::from(-1.0 / denom), pi, &pi.conjugate(), C64::from(1.0));
        self.p /= C64::from(self.alpha);
        make_hermitian(&mut self.p);
    }
}

/// Trained exponentially weighted RLS for the interpolated receiver.
#[derive(Debug, Clone)]
pub struct TrainedRls {
    pub state: ReceiverState,
    pub dec: Decimation,
    pub adapt_interpolator: bool,
    /// Count of numerical breakdowns that forced a reset of `P`.
    pub breakdowns: usize,
    pw: InverseCorrelation,
    pv: InverseCorrelation,
}

impl TrainedRls {
    /// `P(0) = delta I` for both recursions.
    pub fn new(state: ReceiverState, dec: Decimation, alpha: f64, delta: f64) -> Self {
        let ni = state.v.len();
        Self {
            pw: InverseCorrelation::new(dec.m_red, alpha, delta),
            pv: InverseCorrelation::new(ni, alpha, delta),
            state,
            dec,
            adapt_interpolator: true,
            breakdowns: 0,
        }
    }

    pub fn p(&self) -> &CMatrix {
        &self.pw.p
    }

    /// One step; returns the pre-update output.
    pub fn step(&mut self, r: &CVector, b: f64) -> C64 {
        let rbar = interpolate_then_decimate(&self.state.v, r, &self.dec);
        let x = self.state.w.dotc(&rbar);
        let xi = C64::from(b) - x;

        if self.adapt_interpolator {
            let u = interpolator_regressor(&self.state.w, r, self.state.v.len(), &self.dec);
            let up = self.pv.update(&u);
            self.breakdowns += usize::from(up.reset);
            self.state
                .v
                .axpy(xi.conj() / up.denom, &up.pi, C64::from(1.0));
        }
        let up = self.pw.update(&rbar);
        self.breakdowns += usize::from(up.reset);
        self.state
            .w
            .axpy(xi.conj() / up.denom, &up.pi, C64::from(1.0));
        x
    }
}

impl AdaptiveReceiver for TrainedRls {
    fn output(&self, r: &CVector) -> C64 {
        state_output(&self.state, &self.dec, r)
    }

    fn update(&mut self, r: &CVector, reference: Reference) -> C64 {
        match reference {
            Reference::Symbol(b) => self.step(r, b),
            Reference::Blind => self.output(r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_tracks_weighted_correlation() {
        let xs: Vec<CVector> = (0..12)
            .map(|i| {
                CVector::from_fn(3, |j, _| {
                    C64::new(
                        ((i * 7 + j * 3) % 5) as f64 - 2.0,
                        ((i + 2 * j) % 3) as f64 - 1.0,
                    )
                })
            })
            .collect();
        let (alpha, delta) = (0.95, 10.0);
        let mut inv = InverseCorrelation::new(3, alpha, delta);
        let mut r = CMatrix::identity(3, 3) * C64::from(1.0 / delta);
        for x in &xs {
            inv.update(x);
            r = r * C64::from(alpha) + x * x.adjoint();
        }
        let err = (&inv.p * &r - CMatrix::identity(3, 3)).norm();
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn negative_denominator_resets() {
        let mut inv = InverseCorrelation::new(2, 0.9, 1.0);
        inv.p = -CMatrix::identity(2, 2) * C64::from(5.0);
        let up = inv.update(&CVector::from_element(2, C64::from(1.0)));
        assert!(up.reset);
        assert!(inv.p[(0, 0)].re > 0.0);
    }
}
