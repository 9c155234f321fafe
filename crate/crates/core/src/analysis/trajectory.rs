//! Mean tap-error trajectory of the joint SG recursions, linearized about
//! the optimum `(w_opt, v_opt)`.

use crate::cmv::ConstraintSet;
use crate::error::{Error, Result};
use crate::interp::{interpolate_then_decimate, interpolator_regressor, Decimation, ReceiverState};
use crate::linalg::{lambda_max, CMatrix, CVector, C64};
use crate::mmse::TrainingSample;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryMode {
    Trained,
    Blind,
}

/// `[e_w; e_v] <- A [e_w; e_v] + B`.
#[derive(Debug, Clone)]
pub struct TrajectoryModel {
    pub a: CMatrix,
    pub b: CVector,
    pub mode: TrajectoryMode,
    pub m_red: usize,
    pub ni: usize,
}

#[derive(Debug, Clone)]
pub struct TrajectoryReport {
    /// `E[e]` for steps `0..=steps`.
    pub path: Vec<CVector>,
    /// Largest eigenvalue of `A^H A`.
    pub spectral_radius: f64,
    pub stable: bool,
}

/// Sample averages of `r_bar_o u_o^H`, `u_o r_bar_o^H`, `R_bar`, `R_u` and the
/// per-sample optimal outputs.
struct Moments {
    r_bar: CMatrix,
    r_u: CMatrix,
    cross_wu: CMatrix,
    cross_uw: CMatrix,
}

fn accumulate(rb: &CVector, u: &CVector, m: &mut Moments) {
    m.r_bar += rb * rb.adjoint();
    m.r_u += u * u.adjoint();
    m.cross_wu += rb * u.adjoint();
    m.cross_uw += u * rb.adjoint();
}

impl Moments {
    fn new(m_red: usize, ni: usize) -> Self {
        Self {
            r_bar: CMatrix::zeros(m_red, m_red),
            r_u: CMatrix::zeros(ni, ni),
            cross_wu: CMatrix::zeros(m_red, ni),
            cross_uw: CMatrix::zeros(ni, m_red),
        }
    }

    fn scale(&mut self, n: usize) {
        let s = C64::from(1.0 / n as f64);
        self.r_bar *= s;
        self.r_u *= s;
        self.cross_wu *= s;
        self.cross_uw *= s;
    }
}

fn assemble(top: (CMatrix, CMatrix), bottom: (CMatrix, CMatrix)) -> CMatrix {
    let (m_red, ni) = (top.0.nrows(), bottom.1.nrows());
    let mut a = CMatrix::zeros(m_red + ni, m_red + ni);
    a.view_mut((0, 0), (m_red, m_red)).copy_from(&top.0);
    a.view_mut((0, m_red), (m_red, ni)).copy_from(&top.1);
    a.view_mut((m_red, 0), (ni, m_red)).copy_from(&bottom.0);
    a.view_mut((m_red, m_red), (ni, ni)).copy_from(&bottom.1);
    a
}

fn stack(top: CVector, bottom: CVector) -> CVector {
    let mut b = CVector::zeros(top.len() + bottom.len());
    b.rows_mut(0, top.len()).copy_from(&top);
    b.rows_mut(top.len(), bottom.len()).copy_from(&bottom);
    b
}

impl TrajectoryModel {
    /// Trained LMS with steps `mu` (for `w`) and `eta` (for `v`).
    pub fn trained(
        samples: &[TrainingSample],
        opt: &ReceiverState,
        dec: &Decimation,
        mu: f64,
        eta: f64,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("no samples".into()));
        }
        let ni = opt.v.len();
        let mut mo = Moments::new(dec.m_red, ni);
        let mut pw = CVector::zeros(dec.m_red);
        let mut pv = CVector::zeros(ni);
        for s in samples {
            let rb = interpolate_then_decimate(&opt.v, &s.r, dec);
            let u = interpolator_regressor(&opt.w, &s.r, ni, dec);
            let eps = C64::from(s.b) - opt.w.dotc(&rb);
            pw.axpy(eps.conj(), &rb, C64::from(1.0));
            pv.axpy(eps.conj(), &u, C64::from(1.0));
            accumulate(&rb, &u, &mut mo);
        }
        mo.scale(samples.len());
        let s = C64::from(1.0 / samples.len() as f64);
        let (mu_c, eta_c) = (C64::from(mu), C64::from(eta));
        let a = assemble(
            (
                CMatrix::identity(dec.m_red, dec.m_red) - &mo.r_bar * mu_c,
                -&mo.cross_wu * mu_c,
            ),
            (
                -&mo.cross_uw * eta_c,
                CMatrix::identity(ni, ni) - &mo.r_u * eta_c,
            ),
        );
        let b = stack(pw * (s * mu_c), pv * (s * eta_c));
        Ok(Self {
            a,
            b,
            mode: TrajectoryMode::Trained,
            m_red: dec.m_red,
            ni,
        })
    }

    /// Blind CMV-SG with exact channel knowledge.
    pub fn blind(
        samples: &[CVector],
        opt: &ReceiverState,
        dec: &Decimation,
        cons: &ConstraintSet,
        mu: f64,
        eta: f64,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("no samples".into()));
        }
        let ni = opt.v.len();
        let mut mo = Moments::new(dec.m_red, ni);
        let mut pw = CVector::zeros(dec.m_red);
        let mut pv = CVector::zeros(ni);
        for r in samples {
            let rb = interpolate_then_decimate(&opt.v, r, dec);
            let u = interpolator_regressor(&opt.w, r, ni, dec);
            let x = opt.w.dotc(&rb);
            pw.axpy(x.conj(), &rb, C64::from(1.0));
            pv.axpy(x.conj(), &u, C64::from(1.0));
            accumulate(&rb, &u, &mut mo);
        }
        mo.scale(samples.len());
        let s = C64::from(1.0 / samples.len() as f64);
        let (mu_c, eta_c) = (C64::from(mu), C64::from(eta));
        let a = assemble(
            (
                CMatrix::identity(dec.m_red, dec.m_red) - &cons.pi * &mo.r_bar * mu_c,
                -&cons.pi * &mo.cross_wu * mu_c,
            ),
            (
                -&mo.cross_uw * eta_c,
                CMatrix::identity(ni, ni) - &mo.r_u * eta_c,
            ),
        );
        let b = stack(-(&cons.pi * pw) * (s * mu_c), -pv * (s * eta_c));
        Ok(Self {
            a,
            b,
            mode: TrajectoryMode::Blind,
            m_red: dec.m_red,
            ni,
        })
    }

    /// Largest eigenvalue of `A^H A`.
    pub fn spectral_radius(&self) -> f64 {
        lambda_max(&(self.a.adjoint() * &self.a))
    }

    /// `(I - A)^{-1} B`.
    pub fn fixed_point(&self) -> Result<CVector> {
        let n = self.a.nrows();
        (CMatrix::identity(n, n) - &self.a)
            .lu()
            .solve(&self.b)
            .ok_or(Error::Singular("I - A in the mean trajectory"))
    }
}

pub fn mean_trajectory(
    model: &TrajectoryModel,
    e0: &CVector,
    steps: usize,
) -> Result<TrajectoryReport> {
    if e0.len() != model.a.nrows() {
        return Err(Error::DimensionMismatch {
            context: "initial tap error",
            expected: model.a.nrows(),
            got: e0.len(),
        });
    }
    let mut path = Vec::with_capacity(steps + 1);
    let mut e = e0.clone();
    path.push(e.clone());
    for _ in 0..steps {
        e = &model.a * e + &model.b;
        path.push(e.clone());
    }
    let spectral_radius = model.spectral_radius();
    Ok(TrajectoryReport {
        path,
        spectral_radius,
        stable: spectral_radius < 1.0,
    })
}
