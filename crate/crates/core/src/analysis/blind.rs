//! Steady-state excess output variance of blind CMV-SG adaptation.
//!
//! The tap error stays in the feasible subspace `range(Pi)`. With `Q` an
//! orthonormal basis of it and `q = Q^H r_bar`, the steady-state error
//! correlation `Z` solves
//! `R~ Z + Z R~ - mu E[q q^H Z q q^H] = mu E[|x_opt|^2 q q^H]`
//! and the excess is `tr(R~ Z)`.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, inverse, CMatrix, CVector, C64, ZERO};

/// Largest reduced dimension for which the dense Kronecker system is built.
pub const DENSE_MAX_DIM: usize = 20;

/// Sample snapshot for the blind excess-MSE model.
#[derive(Debug, Clone, Copy)]
pub struct BlindExcessInputs<'a> {
    pub mu: f64,
    /// Interpolated observations `r_bar` (with the converged interpolator).
    pub samples: &'a [CVector],
    pub pi: &'a CMatrix,
    pub w_opt: &'a CVector,
}

struct Reduced {
    /// `d x n` matrix of projected regressors `q`.
    q: CMatrix,
    /// `|x_opt|^2` per sample.
    power: Vec<f64>,
    r_tilde: CMatrix,
    drive: CMatrix,
}

fn reduce(inp: &BlindExcessInputs<'_>) -> Result<Reduced> {
    if inp.samples.is_empty() {
        return Err(Error::InvalidParameter("no samples".into()));
    }
    let m = inp.pi.nrows();
    let (eigs, vecs) = hermitian_eigen(inp.pi);
    let cols: Vec<usize> = (0..m).filter(|&j| eigs[j] > 0.5).collect();
    let basis = CMatrix::from_fn(m, cols.len(), |i, j| vecs[(i, cols[j])]);
    let n = inp.samples.len();
    let mut q = CMatrix::zeros(cols.len(), n);
    let mut power = Vec::with_capacity(n);
    for (s, r) in inp.samples.iter().enumerate() {
        if r.len() != m {
            return Err(Error::DimensionMismatch {
                context: "blind excess sample length",
                expected: m,
                got: r.len(),
            });
        }
        q.set_column(s, &basis.ad_mul(r));
        power.push(inp.w_opt.dotc(r).norm_sqr());
    }
    let scale = C64::from(1.0 / n as f64);
    let r_tilde = (&q * q.adjoint()) * scale;
    let weighted = CMatrix::from_fn(q.nrows(), n, |i, j| q[(i, j)] * power[j]);
    let drive = (&weighted * q.adjoint()) * scale;
    Ok(Reduced {
        q,
        power,
        r_tilde,
        drive,
    })
}

impl Reduced {
    fn apply(&self, mu: f64, z: &CMatrix) -> CMatrix {
        let n = self.q.ncols();
        let zq = z * &self.q;
        let mut scaled = self.q.clone();
        for j in 0..n {
            let c = self.q.column(j).dotc(&zq.column(j));
            scaled.column_mut(j).scale_mut(c.re);
        }
        let fourth = (&scaled * self.q.adjoint()) * C64::from(mu / n as f64);
        &self.r_tilde * z + z * &self.r_tilde - fourth
    }
}

fn frob(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Solves the steady-state equation by conjugate gradients on the
/// (self-adjoint) Lyapunov-type operator.
pub fn excess_mse_blind(inp: &BlindExcessInputs<'_>) -> Result<f64> {
    let red = reduce(inp)?;
    let d = red.r_tilde.nrows();
    if d == 0 || red.power.iter().all(|&p| p == 0.0) {
        return Ok(0.0);
    }
    let rhs = &red.drive * C64::from(inp.mu);
    let mut z = CMatrix::zeros(d, d);
    let mut res = rhs.clone();
    let mut dir = res.clone();
    let mut rr = frob(&res, &res);
    let target = 1e-26 * rr;
    for _ in 0..(4 * d * d).max(50) {
        let ad = red.apply(inp.mu, &dir);
        let curv = frob(&dir, &ad);
        if !(curv > 0.0) {
            return Err(Error::Unstable(
                "step size too large: steady-state operator is not positive definite".into(),
            ));
        }
        let a = rr / curv;
        z += &dir * C64::from(a);
        res -= &ad * C64::from(a);
        let rr_new = frob(&res, &res);
        if rr_new <= target {
            break;
        }
        dir = &res + &dir * C64::from(rr_new / rr);
        rr = rr_new;
    }
    let xi = frob(&red.r_tilde, &z);
    Ok(xi)
}

/// Dense form `(T, a, vec(R_bar))` with `xi = mu vec(R_bar)^H T^{-1} a`.
///
/// `T` is `M_red^2 x M_red^2`; on the orthogonal complement of the feasible
/// subspace (where the tap error never lives) it is the identity, which
/// keeps it invertible without changing the solution.
pub fn blind_t_matrix(inp: &BlindExcessInputs<'_>) -> Result<(CMatrix, CVector, CVector)> {
    let m = inp.pi.nrows();
    if m > DENSE_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "dense Kronecker model limited to M_red <= {DENSE_MAX_DIM} (got {m})"
        )));
    }
    if inp.samples.is_empty() {
        return Err(Error::InvalidParameter("no samples".into()));
    }
    let n = inp.samples.len() as f64;
    let mm = m * m;
    let mut r_bar = CMatrix::zeros(m, m);
    let mut rp = CMatrix::zeros(m, m);
    let mut fourth = CMatrix::zeros(mm, mm);
    let mut a = CVector::zeros(mm);
    for r in inp.samples {
        r_bar += r * r.adjoint();
        let p = inp.pi * r;
        let ppt = &p * p.adjoint();
        rp += &ppt;
        fourth += ppt.transpose().kronecker(&ppt);
        let pw = inp.w_opt.dotc(r).norm_sqr();
        for (k, v) in ppt.iter().enumerate() {
            a[k] += v * pw;
        }
    }
    let s = C64::from(1.0 / n);
    r_bar *= s;
    rp *= s;
    fourth *= s;
    a *= s;
    let eye = CMatrix::identity(m, m);
    let proj = inp.pi.transpose().kronecker(inp.pi);
    let t = eye.kronecker(&rp) + rp.transpose().kronecker(&eye) - fourth * C64::from(inp.mu)
        + CMatrix::identity(mm, mm)
        - proj;
    let vec_r = CVector::from_iterator(mm, r_bar.iter().copied());
    Ok((t, a, vec_r))
}

/// Excess output variance through the dense Kronecker system.
pub fn excess_mse_blind_dense(inp: &BlindExcessInputs<'_>) -> Result<f64> {
    let (t, a, vec_r) = blind_t_matrix(inp)?;
    if a.iter().all(|&z| z == ZERO) {
        return Ok(0.0);
    }
    let t_inv = inverse(&t, "blind excess T matrix")?;
    Ok((vec_r.dotc(&(t_inv * a)) * inp.mu).re)
}
