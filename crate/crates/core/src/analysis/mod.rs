//! Convergence theory: stability bounds, steady-state and transient excess
//! MSE, mean tap-error trajectories, the RLS learning curve and operation
//! counts.

mod blind;
mod complexity;
mod trajectory;
mod transient;

pub use blind::{blind_t_matrix, excess_mse_blind, excess_mse_blind_dense, BlindExcessInputs};
pub use complexity::{complexity_count, Algorithm, ComplexityParams};
pub use trajectory::{mean_trajectory, TrajectoryMode, TrajectoryModel, TrajectoryReport};
pub use transient::{initial_modes, sg_transient, ExcessMseReport};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, trace_re, CMatrix};
use serde::{Deserialize, Serialize};

/// Step-size bounds for unnormalized SG adaptation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityBound {
    /// `2 / lambda_max`.
    pub eigen: f64,
    /// `2 / tr(R)`, the conservative estimate.
    pub trace: f64,
}

pub fn sg_stability_bound(r_bar: &CMatrix) -> Result<StabilityBound> {
    let (eigs, _) = hermitian_eigen(r_bar);
    let lmax = *eigs
        .last()
        .ok_or_else(|| Error::InvalidParameter("empty matrix".into()))?;
    if !(lmax > 0.0) {
        return Err(Error::InvalidParameter(
            "covariance has no positive eigenvalue".into(),
        ));
    }
    Ok(StabilityBound {
        eigen: 2.0 / lmax,
        trace: 2.0 / trace_re(r_bar),
    })
}

fn excess_closed_form(step: f64, r: &CMatrix, eps_min: f64) -> Result<f64> {
    let half = 0.5 * step * trace_re(r);
    if !(half < 1.0) || step < 0.0 {
        return Err(Error::Unstable(format!(
            "step * tr(R) / 2 = {half} violates the stability condition"
        )));
    }
    Ok(half / (1.0 - half) * eps_min)
}

/// Steady-state excess MSE of trained SG adaptation of `w`:
/// `(mu/2 tr R) / (1 - mu/2 tr R) * eps_min`.
pub fn excess_mse_trained(mu: f64, r_bar: &CMatrix, eps_min: f64) -> Result<f64> {
    excess_closed_form(mu, r_bar, eps_min)
}

/// The interpolator-side counterpart with `(eta, R_u)`.
pub fn excess_mse_interpolator(eta: f64, r_u: &CMatrix, eps_min: f64) -> Result<f64> {
    excess_closed_form(eta, r_u, eps_min)
}

/// RLS learning curve with `alpha = 1`: `sigma2 * M_red / (i - M_red - 1)`.
pub fn rls_learning_curve(sigma2: f64, m_red: usize, i: usize) -> Result<f64> {
    if i <= m_red + 1 {
        return Err(Error::InvalidParameter(format!(
            "learning curve needs i > M_red + 1 (i = {i}, M_red = {m_red})"
        )));
    }
    Ok(sigma2 * m_red as f64 / (i - m_red - 1) as f64)
}

/// `lambda_max / lambda_min`; infinite for a singular matrix.
pub fn eigen_spread(r: &CMatrix) -> f64 {
    let (eigs, _) = hermitian_eigen(r);
    match (eigs.first(), eigs.last()) {
        (Some(&lo), Some(&hi)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn stability_bound_examples() {
        let mut r = CMatrix::zeros(2, 2);
        r[(0, 0)] = C64::from(2.0);
        r[(1, 1)] = C64::from(1.0);
        let b = sg_stability_bound(&r).unwrap();
        assert!((b.eigen - 1.0).abs() < 1e-12);
        assert!((b.trace - 2.0 / 3.0).abs() < 1e-12);
        let c = CMatrix::identity(4, 4) * C64::from(0.5);
        assert!((sg_stability_bound(&c).unwrap().eigen - 4.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_excess() {
        let r = CMatrix::identity(4, 4);
        // mu tr = 0.5 -> eps / 3; mu tr = 1 -> eps
        assert!((excess_mse_trained(0.125, &r, 0.3).unwrap() - 0.1).abs() < 1e-12);
        assert!((excess_mse_trained(0.25, &r, 0.3).unwrap() - 0.3).abs() < 1e-12);
        assert!(excess_mse_trained(1e-12, &r, 0.3).unwrap() < 1e-11);
        assert!(matches!(
            excess_mse_trained(0.5, &r, 0.3),
            Err(Error::Unstable(_))
        ));
    }

    #[test]
    fn learning_curve() {
        assert!((rls_learning_curve(0.1, 18, 37).unwrap() - 0.1).abs() < 1e-15);
        assert!(rls_learning_curve(0.1, 18, 1_000_000_000).unwrap() < 1e-8);
        assert!(rls_learning_curve(0.1, 18, 19).is_err());
    }

    #[test]
    fn spread_of_diagonal() {
        let mut r = CMatrix::identity(3, 3);
        r[(2, 2)] = C64::from(8.0);
        assert!((eigen_spread(&r) - 8.0).abs() < 1e-12);
    }
}
