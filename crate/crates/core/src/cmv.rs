//! Batch constrained minimum variance (CMV) design and blind channel
//! estimation.
//!
//! The reduced-rank filter minimizes the output variance `w^H R_bar w`
//! subject to `C^H D^H w = g`, where the columns of `C` are one-chip shifts of
//! the desired signature and `g` is the channel; the interpolator minimizes
//! `v^H R_u v` subject to `||v|| = 1`.

use crate::error::{Error, Result};
use crate::interp::Decimation;
use crate::linalg::{
    fix_phase_first, fix_phase_largest, hermitian_eigen, inverse, inverse_hpd, trace_re, CMatrix,
    CVector, C64, RIDGE,
};

/// Constraint matrices for one user.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    /// `M x L_p`, column `j` is the code delayed by `j` chips.
    pub c: CMatrix,
    /// `D C`, `M_red x L_p`.
    pub dc: CMatrix,
    /// `(C^H D^H D C)^{-1}`.
    pub gram_inv: CMatrix,
    /// `I - D C (C^H D^H D C)^{-1} C^H D^H`.
    pub pi: CMatrix,
    /// `D C (C^H D^H D C)^{-1}`; times `g` gives the minimum-norm feasible filter.
    pub anchor: CMatrix,
}

/// `M x L_p` matrix of one-chip shifted copies of `code`.
pub fn shifted_code_matrix(code: &CVector, lp: usize) -> CMatrix {
    let n = code.len();
    let m = n + lp - 1;
    let mut c = CMatrix::zeros(m, lp);
    for j in 0..lp {
        c.view_mut((j, j), (n, 1)).copy_from(code);
    }
    c
}

pub fn build_constraints(code: &CVector, lp: usize, dec: &Decimation) -> Result<ConstraintSet> {
    if lp == 0 {
        return Err(Error::InvalidParameter("L_p must be positive".into()));
    }
    let m = code.len() + lp - 1;
    if dec.m != m {
        return Err(Error::DimensionMismatch {
            context: "decimation length vs N + L_p - 1",
            expected: m,
            got: dec.m,
        });
    }
    let c = shifted_code_matrix(code, lp);
    let dc = dec.apply_rows(&c);
    constraints_from_parts(c, dc)
}

/// Constraint set for an arbitrary linear front end `dc = F^H C` (e.g. a
/// projection instead of decimation).
pub fn constraints_from_parts(c: CMatrix, dc: CMatrix) -> Result<ConstraintSet> {
    let gram = dc.adjoint() * &dc;
    let (eigs, _) = hermitian_eigen(&gram);
    let (lo, hi) = (eigs[0], *eigs.last().unwrap());
    if !(lo > 1e-12 * hi) {
        return Err(Error::Singular(
            "constraint Gram matrix C^H D^H D C is rank deficient",
        ));
    }
    let gram_inv = inverse_hpd(&gram, 0.0, "constraint Gram matrix")?;
    let anchor = &dc * &gram_inv;
    let m_red = dc.nrows();
    let pi = CMatrix::identity(m_red, m_red) - &anchor * dc.adjoint();
    Ok(ConstraintSet {
        c,
        dc,
        gram_inv,
        pi,
        anchor,
    })
}

impl ConstraintSet {
    pub fn paths(&self) -> usize {
        self.c.ncols()
    }

    /// Minimum-norm filter meeting `C^H D^H w = g`.
    pub fn quiescent(&self, g: &CVector) -> CVector {
        &self.anchor * g
    }

    /// `C^H D^H w - g`.
    pub fn residual(&self, w: &CVector, g: &CVector) -> CVector {
        self.dc.ad_mul(w) - g
    }
}

/// `(C^H D^H R_bar^{-1} D C)` and `R_bar^{-1} D C`.
fn constrained_parts(r_bar: &CMatrix, cons: &ConstraintSet) -> Result<(CMatrix, CMatrix)> {
    let r_inv = inverse_hpd(r_bar, RIDGE, "reduced-rank covariance")?;
    let rinv_dc = r_inv * &cons.dc;
    let inner = cons.dc.ad_mul(&rinv_dc);
    Ok((inner, rinv_dc))
}

/// `w = R_bar^{-1} D C (C^H D^H R_bar^{-1} D C)^{-1} g`.
pub fn cmv_receiver(r_bar: &CMatrix, cons: &ConstraintSet, g: &CVector) -> Result<CVector> {
    let (inner, rinv_dc) = constrained_parts(r_bar, cons)?;
    let lam = inner
        .lu()
        .solve(g)
        .ok_or(Error::Singular("C^H D^H R^-1 D C"))?;
    Ok(rinv_dc * lam)
}

/// Minimum output variance `g^H (C^H D^H R_bar^{-1} D C)^{-1} g`.
pub fn cmv_min_variance(r_bar: &CMatrix, cons: &ConstraintSet, g: &CVector) -> Result<f64> {
    let (inner, _) = constrained_parts(r_bar, cons)?;
    let x = inner
        .lu()
        .solve(g)
        .ok_or(Error::Singular("C^H D^H R^-1 D C"))?;
    Ok(g.dotc(&x).re)
}

/// Unit-norm eigenvector of the smallest eigenvalue of `R_u`, phase-fixed so
/// the largest entry is real positive. With a repeated smallest eigenvalue
/// any vector of that eigenspace is returned.
pub fn cmv_interpolator(r_u: &CMatrix) -> CVector {
    let (_, vecs) = hermitian_eigen(r_u);
    let mut v = vecs.column(0).into_owned();
    fix_phase_largest(&mut v);
    v
}

/// One shift iteration `v <- (I - nu R) v`, normalized. When the iterate
/// vanishes (e.g. a scalar `R` with `nu = 1/R`) `v` is returned unchanged.
pub fn shift_step(r: &CMatrix, v: &CVector, nu: f64) -> CVector {
    let next = v - (r * v) * C64::from(nu);
    let n = next.norm();
    if n > 1e-300 {
        next / C64::from(n)
    } else {
        v.clone()
    }
}

/// Power method on `I - nu R`, `nu = 1/tr(R)`, converging to the eigenvector
/// of the smallest eigenvalue of a Hermitian PSD `R` (if it is unique and
/// `v0` is not orthogonal to it).
pub fn shift_iteration_min_eigvec(r: &CMatrix, v0: &CVector, iters: usize) -> Result<CVector> {
    let tr = trace_re(r);
    if !(tr > 0.0) {
        return Err(Error::InvalidParameter(
            "shift iteration needs tr(R) > 0".into(),
        ));
    }
    let n0 = v0.norm();
    if n0 == 0.0 {
        return Err(Error::InvalidParameter(
            "initial vector must be non-zero".into(),
        ));
    }
    let nu = 1.0 / tr;
    let mut v = v0 / C64::from(n0);
    for _ in 0..iters {
        v = shift_step(r, &v, nu);
    }
    Ok(v)
}

/// Blind channel estimate: unit-norm eigenvector of the smallest eigenvalue
/// of `C^H R^{-m} C`, with the first entry rotated to be real positive.
pub fn blind_channel_estimate(r: &CMatrix, c: &CMatrix, m: u32) -> Result<CVector> {
    if m == 0 {
        return Err(Error::InvalidParameter("power m must be >= 1".into()));
    }
    let r_inv = inverse(r, "received covariance")?;
    let mut r_pow = r_inv.clone();
    for _ in 1..m {
        r_pow = &r_pow * &r_inv;
    }
    let phi = c.adjoint() * r_pow * c;
    let (_, vecs) = hermitian_eigen(&phi);
    let mut g = vecs.column(0).into_owned();
    fix_phase_first(&mut g);
    Ok(g)
}

/// Rotates `estimate` so the phase of its first entry matches that of
/// `reference` (removes the blind-estimation phase ambiguity).
pub fn align_phase(estimate: &mut CVector, reference: &CVector) {
    if estimate.is_empty() || reference.is_empty() {
        return;
    }
    let e = estimate[0];
    let r = reference[0];
    if e.norm() > 0.0 && r.norm() > 0.0 {
        let rot = (r / r.norm()) * (e.conj() / e.norm());
        estimate.iter_mut().for_each(|z| *z *= rot);
    }
}
