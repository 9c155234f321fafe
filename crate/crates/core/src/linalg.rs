//! Complex dense linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Relative ridge added to batch covariances before inversion.
pub const RIDGE: f64 = 1e-8;

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Real part of the trace.
pub fn trace_re(m: &CMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Replace `m` by `(m + m^H) / 2` in place.
pub fn make_hermitian(m: &mut CMatrix) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)] = real(m[(i, i)].re);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

/// `m + delta * I` with `delta = rel * tr(m) / dim`.
pub fn ridge(m: &CMatrix, rel: f64) -> CMatrix {
    let n = m.nrows();
    let scale = (trace_re(m) / n.max(1) as f64).abs();
    let delta = if scale > 0.0 { rel * scale } else { rel };
    let mut out = m.clone();
    for i in 0..n {
        out[(i, i)] += delta;
    }
    out
}

/// Solves `A x = b` for Hermitian positive (semi-)definite `A` after a
/// relative ridge. Falls back to LU when Cholesky fails.
pub fn solve_hpd(a: &CMatrix, b: &CVector, rel: f64, context: &'static str) -> Result<CVector> {
    let reg = ridge(a, rel);
    if let Some(ch) = reg.clone().cholesky() {
        return Ok(ch.solve(b));
    }
    reg.lu().solve(b).ok_or(Error::Singular(context))
}

/// Inverse of a Hermitian positive (semi-)definite matrix after a relative ridge.
pub fn inverse_hpd(a: &CMatrix, rel: f64, context: &'static str) -> Result<CMatrix> {
    let reg = ridge(a, rel);
    let inv = match reg.clone().cholesky() {
        Some(ch) => ch.inverse(),
        None => reg.try_inverse().ok_or(Error::Singular(context))?,
    };
    let mut inv = inv;
    make_hermitian(&mut inv);
    Ok(inv)
}

/// General square inverse without regularization.
pub fn inverse(a: &CMatrix, context: &'static str) -> Result<CMatrix> {
    a.clone().try_inverse().ok_or(Error::Singular(context))
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let mut h = m.clone();
    make_hermitian(&mut h);
    let eig = SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn lambda_max(m: &CMatrix) -> f64 {
    *hermitian_eigen(m).0.last().expect("non-empty matrix")
}

/// Rotates `v` so its largest-magnitude entry is real and positive.
pub fn fix_phase_largest(v: &mut CVector) {
    let Some((idx, _)) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
    else {
        return;
    };
    let mag = v[idx].norm();
    if mag > 0.0 {
        let rot = v[idx].conj() / mag;
        v.iter_mut().for_each(|z| *z *= rot);
    }
}

/// Rotates `v` so its first entry is real and non-negative.
pub fn fix_phase_first(v: &mut CVector) {
    if v.is_empty() {
        return;
    }
    let mag = v[0].norm();
    if mag > 0.0 {
        let rot = v[0].conj() / mag;
        v.iter_mut().for_each(|z| *z *= rot);
    }
}

/// `|<a, b>| / (|a| |b|)`, the cosine of the principal angle between two lines.
pub fn alignment(a: &CVector, b: &CVector) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (a.dotc(b).norm() / (na * nb)).min(1.0)
}

/// Principal angle in radians, computed from the orthogonal residual so it
/// stays accurate for tiny angles.
pub fn principal_angle(a: &CVector, b: &CVector) -> f64 {
    let ua = a / C64::from(a.norm());
    let ub = b / C64::from(b.norm());
    let proj = ub.dotc(&ua);
    let resid = &ua - &ub * proj;
    resid.norm().atan2(proj.norm())
}

/// Circular complex Gaussian sample with `E|z|^2 = var`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> C64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

/// Quadratic form `x^H A x` (real part).
pub fn quad_form(a: &CMatrix, x: &CVector) -> f64 {
    x.dotc(&(a * x)).re
}
