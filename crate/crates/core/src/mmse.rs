//! Batch interpolated MMSE design on sample averages.
//!
//! For a fixed interpolator the optimal reduced-rank filter is the Wiener
//! solution `w = R_bar^{-1} p_bar`; for a fixed filter the optimal
//! interpolator is `v = R_u^{-1} p_u`. Neither is closed form for the pair,
//! so the two are alternated.

use crate::error::{Error, Result};
use crate::interp::{build_re_matrix, Decimation, ReceiverState};
use crate::linalg::{quad_form, solve_hpd, CMatrix, CVector, C64, RIDGE};

/// One received vector with its (known) desired symbol.
#[derive(Debug, Clone)]
pub struct TrainingSample {
    pub r: CVector,
    pub b: f64,
}

#[derive(Debug, Clone)]
pub struct MmseStatistics {
    pub r_bar: CMatrix,
    pub p_bar: CVector,
    pub r_u: CMatrix,
    pub p_u: CVector,
    pub sigma_b2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Receiver,
    Interpolator,
}

/// Sample averages of the reduced-rank and interpolator statistics of the
/// current state, from precomputed `R` matrices.
fn statistics_from_re(res: &[CMatrix], bs: &[f64], state: &ReceiverState) -> MmseStatistics {
    let m_red = state.w.len();
    let ni = state.v.len();
    let mut r_bar = CMatrix::zeros(m_red, m_red);
    let mut p_bar = CVector::zeros(m_red);
    let mut r_u = CMatrix::zeros(ni, ni);
    let mut p_u = CVector::zeros(ni);
    let mut sigma_b2 = 0.0;
    let vc = state.v.conjugate();
    let wc = state.w.conjugate();
    for (re, &b) in res.iter().zip(bs) {
        let rbar = re.tr_mul(&vc);
        let u = re * &wc;
        r_bar.ger(C64::from(1.0), &rbar, &rbar.conjugate(), C64::from(1.0));
        r_u.ger(C64::from(1.0), &u, &u.conjugate(), C64::from(1.0));
        p_bar.axpy(C64::from(b), &rbar, C64::from(1.0));
        p_u.axpy(C64::from(b), &u, C64::from(1.0));
        sigma_b2 += b * b;
    }
    let inv_n = 1.0 / res.len().max(1) as f64;
    MmseStatistics {
        r_bar: r_bar * C64::from(inv_n),
        p_bar: p_bar * C64::from(inv_n),
        r_u: r_u * C64::from(inv_n),
        p_u: p_u * C64::from(inv_n),
        sigma_b2: sigma_b2 * inv_n,
    }
}

impl MmseStatistics {
    pub fn from_samples(
        samples: &[TrainingSample],
        state: &ReceiverState,
        dec: &Decimation,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("no samples".into()));
        }
        let res: Vec<CMatrix> = samples
            .iter()
            .map(|s| build_re_matrix(&s.r, state.ni(), dec))
            .collect();
        let bs: Vec<f64> = samples.iter().map(|s| s.b).collect();
        Ok(statistics_from_re(&res, &bs, state))
    }
}

/// `w = R_bar^{-1} p_bar`.
pub fn wiener_receiver(stats: &MmseStatistics) -> Result<CVector> {
    solve_hpd(&stats.r_bar, &stats.p_bar, RIDGE, "reduced-rank covariance")
}

/// `v = R_u^{-1} p_u`.
pub fn wiener_interpolator(stats: &MmseStatistics) -> Result<CVector> {
    solve_hpd(&stats.r_u, &stats.p_u, RIDGE, "interpolator covariance")
}

/// `J = sigma_b^2 - p^H R^{-1} p` for the selected Wiener pair.
pub fn mse_value(stats: &MmseStatistics, which: Which) -> Result<f64> {
    let (r, p) = match which {
        Which::Receiver => (&stats.r_bar, &stats.p_bar),
        Which::Interpolator => (&stats.r_u, &stats.p_u),
    };
    let x = solve_hpd(r, p, RIDGE, "MSE covariance")?;
    let j = stats.sigma_b2 - p.dotc(&x).re;
    debug_assert!(j > -1e-9 * stats.sigma_b2.max(1.0), "negative MSE {j}");
    Ok(j.max(0.0))
}

/// Sample mean of `|b - w^H r_bar|^2`.
pub fn sample_mse(samples: &[TrainingSample], state: &ReceiverState, dec: &Decimation) -> f64 {
    let vc = state.v.conjugate();
    let wc = state.w.conjugate();
    let total: f64 = samples
        .iter()
        .map(|s| {
            let re = build_re_matrix(&s.r, state.ni(), dec);
            let x = vc.dot(&(re * &wc));
            (C64::from(s.b) - x).norm_sqr()
        })
        .sum();
    total / samples.len().max(1) as f64
}

#[derive(Debug, Clone, Copy)]
pub struct AlternatingOptions {
    pub max_iter: usize,
    /// Relative tolerance on the change of `J` between sweeps.
    pub tol: f64,
}

impl Default for AlternatingOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlternatingResult {
    pub state: ReceiverState,
    /// Final sample MSE.
    pub j: f64,
    /// Sample MSE after every half-step (receiver, interpolator, receiver, ...).
    pub history: Vec<f64>,
    /// `sigma_b^2 - p_bar^H R_bar^{-1} p_bar` at the final interpolator.
    pub j_receiver: f64,
    /// `sigma_b^2 - p_u^H R_u^{-1} p_u` at the final filter.
    pub j_interpolator: f64,
    pub sweeps: usize,
}

/// Alternates the two Wiener solutions on sample averages starting from
/// `v0` until the relative change of `J` drops below `tol`.
pub fn alternate_mmse(
    samples: &[TrainingSample],
    dec: &Decimation,
    v0: CVector,
    opts: AlternatingOptions,
) -> Result<AlternatingResult> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no samples".into()));
    }
    if v0.norm() == 0.0 {
        return Err(Error::InvalidParameter(
            "interpolator initialization must be non-zero".into(),
        ));
    }
    let ni = v0.len();
    let res: Vec<CMatrix> = samples
        .iter()
        .map(|s| build_re_matrix(&s.r, ni, dec))
        .collect();
    let bs: Vec<f64> = samples.iter().map(|s| s.b).collect();
    let norm = v0.norm();
    let mut state = ReceiverState {
        v: v0 / C64::from(norm),
        w: CVector::zeros(dec.m_red),
    };

    let mse = |st: &ReceiverState| -> f64 {
        let vc = st.v.conjugate();
        let wc = st.w.conjugate();
        res.iter()
            .zip(&bs)
            .map(|(re, &b)| (C64::from(b) - vc.dot(&(re * &wc))).norm_sqr())
            .sum::<f64>()
            / res.len() as f64
    };

    let mut history = Vec::new();
    let mut prev = f64::INFINITY;
    let mut sweeps = 0;
    for _ in 0..opts.max_iter {
        sweeps += 1;
        let stats = statistics_from_re(&res, &bs, &state);
        state.w = wiener_receiver(&stats)?;
        history.push(mse(&state));

        let stats = statistics_from_re(&res, &bs, &state);
        let v = wiener_interpolator(&stats)?;
        let vn = v.norm();
        if vn == 0.0 {
            return Err(Error::Singular("interpolator collapsed to zero"));
        }
        // (t v, w / t) leaves every output unchanged
        state.v = v / C64::from(vn);
        state.w *= C64::from(vn);
        let j = mse(&state);
        history.push(j);

        if prev.is_finite() && (prev - j).abs() <= opts.tol * prev.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        prev = j;
    }

    let stats_v = statistics_from_re(&res, &bs, &state);
    let j_receiver = mse_value(&stats_v, Which::Receiver)?;
    let j_interpolator = mse_value(&stats_v, Which::Interpolator)?;
    let j = *history.last().expect("at least one sweep");
    Ok(AlternatingResult {
        state,
        j,
        history,
        j_receiver,
        j_interpolator,
        sweeps,
    })
}

/// `J(v, w)` of a state on given statistics, `sigma_b^2 - 2 Re(w^H p) + w^H R w`.
pub fn mse_at(stats: &MmseStatistics, w: &CVector) -> f64 {
    stats.sigma_b2 - 2.0 * w.dotc(&stats.p_bar).re + quad_form(&stats.r_bar, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    #[test]
    fn identity_statistics() {
        let mut p = CVector::zeros(3);
        p[0] = ONE;
        let stats = MmseStatistics {
            r_bar: CMatrix::identity(3, 3),
            p_bar: p.clone(),
            r_u: CMatrix::identity(3, 3),
            p_u: CVector::from_element(3, C64::from(0.0)),
            sigma_b2: 1.0,
        };
        let w = wiener_receiver(&stats).unwrap();
        assert!((w - &p).norm() < 1e-7);
        assert!((mse_value(&stats, Which::Interpolator).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_interpolator() {
        let stats = MmseStatistics {
            r_bar: CMatrix::identity(1, 1),
            p_bar: CVector::zeros(1),
            r_u: CMatrix::from_element(1, 1, C64::from(4.0)),
            p_u: CVector::from_element(1, C64::new(2.0, 1.0)),
            sigma_b2: 1.0,
        };
        let v = wiener_interpolator(&stats).unwrap();
        assert!((v[0] - C64::new(0.5, 0.25)).norm() < 1e-7);
    }

    #[test]
    fn zero_interpolator_rejected() {
        let dec = Decimation::new(4, 2).unwrap();
        let s = vec![TrainingSample {
            r: CVector::from_element(4, ONE),
            b: 1.0,
        }];
        assert!(
            alternate_mmse(&s, &dec, CVector::zeros(2), AlternatingOptions::default()).is_err()
        );
    }
}
