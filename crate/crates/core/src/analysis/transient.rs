//! Modal decomposition of the SG excess-MSE learning curve.

use super::excess_mse_trained;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix, CVector};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcessMseReport {
    pub eps_min: f64,
    pub xi_inf: f64,
    /// Eigenvalues `lambda_n` of the covariance, ascending.
    pub lambdas: Vec<f64>,
    /// Modal weights `gamma_n`.
    pub gammas: Vec<f64>,
    /// Modal decay factors `c_n` (eigenvalues of the coupling matrix).
    pub decays: Vec<f64>,
}

impl ExcessMseReport {
    /// Transient part `sum_n gamma_n c_n^i`.
    pub fn transient(&self, i: usize) -> f64 {
        self.gammas
            .iter()
            .zip(&self.decays)
            .map(|(g, c)| g * c.powi(i as i32))
            .sum()
    }

    pub fn excess(&self, i: usize) -> f64 {
        self.transient(i) + self.xi_inf
    }
}

/// Per-mode initial error energies `|q_n^H e_w(0)|^2` in the eigenbasis of
/// `r_bar` (ascending eigenvalue order).
pub fn initial_modes(r_bar: &CMatrix, e_w0: &CVector) -> Vec<f64> {
    let (_, vecs) = hermitian_eigen(r_bar);
    (0..vecs.ncols())
        .map(|n| vecs.column(n).dotc(e_w0).norm_sqr())
        .collect()
}

/// Evolves the mode energies `x(i+1) = T x(i) + mu^2 eps_min lambda` with
/// `T_nn = (1 - mu lambda_n)^2`, `T_nj = mu^2 lambda_n lambda_j`.
pub fn sg_transient(r_bar: &CMatrix, mu: f64, x0: &[f64], eps_min: f64) -> Result<ExcessMseReport> {
    let (lambdas, _) = hermitian_eigen(r_bar);
    let n = lambdas.len();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            context: "initial mode energies",
            expected: n,
            got: x0.len(),
        });
    }
    let xi_inf = excess_mse_trained(mu, r_bar, eps_min)?;
    let lam = DVector::from_column_slice(&lambdas);
    let mut t = &lam * lam.transpose() * (mu * mu);
    for k in 0..n {
        t[(k, k)] = (1.0 - mu * lambdas[k]).powi(2);
    }
    // x(inf) solves (I - T) x = mu^2 eps lambda; it is constant across modes.
    let tr: f64 = lambdas.iter().sum();
    let x_inf = mu * eps_min / (2.0 - mu * tr);
    let diff = DVector::from_iterator(n, x0.iter().map(|x| x - x_inf));
    let eig = SymmetricEigen::new(DMatrix::from(t));
    let mut gammas = Vec::with_capacity(n);
    let mut decays = Vec::with_capacity(n);
    for k in 0..n {
        let g = eig.eigenvectors.column(k);
        gammas.push(lam.dot(&g) * g.dot(&diff));
        decays.push(eig.eigenvalues[k]);
    }
    Ok(ExcessMseReport {
        eps_min,
        xi_inf,
        lambdas,
        gammas,
        decays,
    })
}
