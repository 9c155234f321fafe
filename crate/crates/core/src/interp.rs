//! Interpolation/decimation algebra of the interpolated FIR receiver.
//!
//! Conjugation convention, used everywhere in the crate:
//!
//! * `R` is the `N_I x M_red` matrix whose column `s` is the length-`N_I`
//!   segment of `r` starting at sample `s L` (zero past the end of `r`);
//! * `r_bar = R^T v*` is the interpolated, decimated observation;
//! * `u = R w*` is the interpolator regressor;
//! * the output is `x = v^H R w* = w^H r_bar = v^H u`.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64, ONE, ZERO};
use crate::signal::ReceivedVector;

/// Decimation by `L` of a length-`M` vector (selection matrix `D`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decimation {
    pub m: usize,
    pub l: usize,
    pub m_red: usize,
}

impl Decimation {
    /// `M_red` is `M/L` rounded to the nearest integer, capped so every
    /// selected index `(M_red - 1) L` stays inside the vector.
    pub fn new(m: usize, l: usize) -> Result<Self> {
        if l == 0 || m == 0 {
            return Err(Error::InvalidParameter("M and L must be positive".into()));
        }
        if l > m {
            return Err(Error::InvalidParameter(format!(
                "decimation factor L = {l} exceeds M = {m}"
            )));
        }
        let rounded = ((m as f64) / (l as f64)).round() as usize;
        let cap = (m - 1) / l + 1;
        Ok(Self {
            m,
            l,
            m_red: rounded.clamp(1, cap),
        })
    }

    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m_red).map(move |row| row * self.l)
    }

    /// Dense `M_red x M` selection matrix.
    pub fn matrix(&self) -> CMatrix {
        let mut d = CMatrix::zeros(self.m_red, self.m);
        for (row, idx) in self.selected().enumerate() {
            d[(row, idx)] = ONE;
        }
        d
    }

    /// `D x` for a length-`M` vector.
    pub fn apply(&self, x: &CVector) -> CVector {
        CVector::from_iterator(self.m_red, self.selected().map(|i| x[i]))
    }

    /// `D X` for an `M x c` matrix.
    pub fn apply_rows(&self, x: &CMatrix) -> CMatrix {
        CMatrix::from_fn(self.m_red, x.ncols(), |r, c| x[(r * self.l, c)])
    }
}

/// The `N_I x M_red` matrix `R(i)`.
pub fn build_re_matrix(r: &CVector, ni: usize, dec: &Decimation) -> CMatrix {
    let m = r.len();
    CMatrix::from_fn(ni, dec.m_red, |n, s| {
        let idx = s * dec.l + n;
        if idx < m {
            r[idx]
        } else {
            ZERO
        }
    })
}

/// `r_bar = R^T v*`.
pub fn interpolate_then_decimate(v: &CVector, r: &CVector, dec: &Decimation) -> CVector {
    let m = r.len();
    CVector::from_fn(dec.m_red, |s, _| {
        let base = s * dec.l;
        v.iter()
            .enumerate()
            .take_while(|(n, _)| base + n < m)
            .fold(ZERO, |acc, (n, vn)| acc + r[base + n] * vn.conj())
    })
}

/// `u = R w*`.
pub fn interpolator_regressor(w: &CVector, r: &CVector, ni: usize, dec: &Decimation) -> CVector {
    let m = r.len();
    CVector::from_fn(ni, |n, _| {
        w.iter()
            .enumerate()
            .filter(|(s, _)| s * dec.l + n < m)
            .fold(ZERO, |acc, (s, ws)| acc + r[s * dec.l + n] * ws.conj())
    })
}

/// Interpolator `v` (length `N_I`) and reduced-rank filter `w` (length `M_red`).
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverState {
    pub v: CVector,
    pub w: CVector,
}

impl ReceiverState {
    pub fn new(v: CVector, w: CVector, dec: &Decimation) -> Result<Self> {
        if v.is_empty() || v.len() > dec.m_red {
            return Err(Error::InvalidParameter(format!(
                "interpolator length {} invalid for M_red = {}",
                v.len(),
                dec.m_red
            )));
        }
        if v.norm() == 0.0 {
            return Err(Error::InvalidParameter(
                "interpolator must be non-zero".into(),
            ));
        }
        if w.len() != dec.m_red {
            return Err(Error::DimensionMismatch {
                context: "reduced-rank filter",
                expected: dec.m_red,
                got: w.len(),
            });
        }
        Ok(Self { v, w })
    }

    /// `v = [1, 0, ..., 0]` (pure decimation) with the given `w`.
    pub fn impulse(ni: usize, w: CVector) -> Self {
        let mut v = CVector::zeros(ni);
        v[0] = ONE;
        Self { v, w }
    }

    pub fn ni(&self) -> usize {
        self.v.len()
    }
}

/// `x = w^H r_bar`, evaluated through the decimated observation.
pub fn receiver_output(state: &ReceiverState, r: &ReceivedVector, dec: &Decimation) -> C64 {
    let rbar = interpolate_then_decimate(&state.v, &r.samples, dec);
    state.w.dotc(&rbar)
}

/// `x = v^H R w*`, the bilinear evaluation order.
pub fn receiver_output_bilinear(
    state: &ReceiverState,
    r: &ReceivedVector,
    dec: &Decimation,
) -> C64 {
    let re = build_re_matrix(&r.samples, state.ni(), dec);
    state.v.dotc(&(re * state.w.conjugate()))
}

/// `sgn(Re x)` with `sgn(0) = +1`.
pub fn detect(x: C64) -> f64 {
    if x.re < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(xs: &[f64]) -> CVector {
        CVector::from_iterator(xs.len(), xs.iter().map(|&x| C64::new(x, 0.0)))
    }

    #[test]
    fn decimation_rows() {
        let d = Decimation::new(4, 2).unwrap();
        assert_eq!(d.selected().collect::<Vec<_>>(), vec![0, 2]);
        let d = Decimation::new(5, 1).unwrap();
        assert_eq!(d.matrix(), CMatrix::identity(5, 5));
        let d = Decimation::new(36, 4).unwrap();
        assert_eq!(d.m_red, 9);
        assert_eq!(d.selected().last(), Some(32));
        assert!(Decimation::new(3, 4).is_err());
    }

    #[test]
    fn non_integer_ratio_rounds() {
        // 36/8 = 4.5 rounds to 5 (round half away from zero), index 32 < 36
        let d = Decimation::new(36, 8).unwrap();
        assert_eq!(d.m_red, 5);
        // 37/3 = 12.33 -> 12
        assert_eq!(Decimation::new(37, 3).unwrap().m_red, 12);
        // 10/4 = 2.5 -> 3, last index 8 < 10
        assert_eq!(Decimation::new(10, 4).unwrap().m_red, 3);
    }

    #[test]
    fn re_matrix_layout() {
        let r = cv(&[0.0, 1.0, 2.0, 3.0]);
        let d = Decimation::new(4, 2).unwrap();
        let re = build_re_matrix(&r, 2, &d);
        assert_eq!(
            re,
            CMatrix::from_row_slice(2, 2, &[0.0, 2.0, 1.0, 3.0].map(|x| C64::new(x, 0.0)))
        );
        let d1 = Decimation::new(4, 1).unwrap();
        assert_eq!(build_re_matrix(&r, 1, &d1), r.transpose());
        // zero padding past the end
        let re3 = build_re_matrix(&r, 3, &d);
        assert_eq!(re3[(2, 1)], ZERO);
    }

    #[test]
    fn impulse_interpolator_is_pure_decimation() {
        let r = cv(&[1.0, -2.0, 3.0, 4.0, 5.0]);
        let d = Decimation::new(5, 2).unwrap();
        let v = cv(&[1.0, 0.0, 0.0]);
        assert_eq!(interpolate_then_decimate(&v, &r, &d), d.apply(&r));
        let d1 = Decimation::new(5, 1).unwrap();
        assert_eq!(interpolate_then_decimate(&cv(&[1.0]), &r, &d1), r);
    }

    #[test]
    fn detector_tie_break() {
        assert_eq!(detect(C64::new(0.3, -2.0)), 1.0);
        assert_eq!(detect(C64::new(-0.1, 5.0)), -1.0);
        assert_eq!(detect(ZERO), 1.0);
    }

    #[test]
    fn zero_filter_gives_zero_output() {
        let d = Decimation::new(6, 2).unwrap();
        let state = ReceiverState::impulse(2, CVector::zeros(3));
        let r = ReceivedVector {
            samples: cv(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
            noise_variance: 0.0,
        };
        assert_eq!(receiver_output(&state, &r, &d), ZERO);
    }

    #[test]
    fn impulse_and_unit_filter_selects_first_sample() {
        // v = e_0, w = e_0: x = conj(w_0) * conj(v_0) * r[0] = r[0]
        let d = Decimation::new(4, 2).unwrap();
        let mut w = CVector::zeros(2);
        w[0] = ONE;
        let state = ReceiverState::impulse(2, w);
        let r = ReceivedVector {
            samples: CVector::from_vec(vec![
                C64::new(0.5, -1.5),
                C64::new(2.0, 0.0),
                C64::new(3.0, 1.0),
                C64::new(0.0, 0.0),
            ]),
            noise_variance: 0.0,
        };
        assert_eq!(receiver_output(&state, &r, &d), C64::new(0.5, -1.5));
    }
}
