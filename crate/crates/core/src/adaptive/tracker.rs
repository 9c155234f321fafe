use super::rls::InverseCorrelation;
use crate::cmv::shift_step;
use crate::linalg::{fix_phase_first, make_hermitian, trace_re, CMatrix, CVector, C64};

/// Blind channel tracker: keeps `P ~ R^{-1}` of the full received vector by
/// the matrix inversion lemma, maintains `Phi = C^H P C` and refines the
/// minimum eigenvector of `Phi` with one shift iteration per symbol.
#[derive(Debug, Clone)]
pub struct ChannelTracker {
    c: CMatrix,
    inv: InverseCorrelation,
    phi: CMatrix,
    g: CVector,
    reference_phase: Option<C64>,
}

impl ChannelTracker {
    pub fn new(c: CMatrix, alpha: f64, delta: f64) -> Self {
        let lp = c.ncols();
        let inv = InverseCorrelation::new(c.nrows(), alpha, delta);
        let phi = c.adjoint() * &inv.p * &c;
        let mut g = CVector::zeros(lp);
        g[0] = C64::from(1.0);
        Self {
            c,
            inv,
            phi,
            g,
            reference_phase: None,
        }
    }

    /// Phase the first entry of the estimate is rotated to; by default it is
    /// kept real positive.
    pub fn set_reference_phase(&mut self, phase: Option<C64>) {
        self.reference_phase = phase;
    }

    pub fn estimate(&self) -> &CVector {
        &self.g
    }

    pub fn update(&mut self, r: &CVector) -> &CVector {
        let up = self.inv.update(r);
        if up.reset {
            self.phi = self.c.adjoint() * &self.inv.p * &self.c;
        } else {
            let q = self.c.ad_mul(&up.pi);
            self.phi.ger(
                C64::from(-1.0 / up.denom),
                &q,
                &q.conjugate(),
                C64::from(1.0),
            );
            self.phi /= C64::from(self.inv.alpha);
            make_hermitian(&mut self.phi);
        }
        let tr = trace_re(&self.phi);
        if tr > 0.0 {
            self.g = shift_step(&self.phi, &self.g, 1.0 / tr);
        }
        match self.reference_phase {
            Some(p) if self.g[0].norm() > 0.0 && p.norm() > 0.0 => {
                let rot = (p / p.norm()) * (self.g[0].conj() / self.g[0].norm());
                self.g.iter_mut().for_each(|z| *z *= rot);
            }
            _ => fix_phase_first(&mut self.g),
        }
        &self.g
    }
}
