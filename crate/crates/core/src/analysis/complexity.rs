use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rows of the per-symbol operation-count tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    LmsFull,
    LmsInt,
    LmsPd,
    RlsFull,
    RlsInt,
    RlsPd,
    CmvSgFull,
    CmvSgInt,
    CmvRlsFull,
    CmvRlsInt,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::LmsFull,
        Algorithm::LmsInt,
        Algorithm::LmsPd,
        Algorithm::RlsFull,
        Algorithm::RlsInt,
        Algorithm::RlsPd,
        Algorithm::CmvSgFull,
        Algorithm::CmvSgInt,
        Algorithm::CmvRlsFull,
        Algorithm::CmvRlsInt,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityParams {
    /// Observation length `M`.
    pub m: u64,
    /// Decimation factor `L`.
    pub l: u64,
    /// Interpolator length `N_I`.
    pub ni: u64,
    /// Projected dimension `D` (PD rows).
    pub d: u64,
    /// Number of channel paths `L_p`.
    pub lp: u64,
}

/// `(additions, multiplications)` per symbol. `M/L` is rounded to the
/// nearest integer.
pub fn complexity_count(alg: Algorithm, p: ComplexityParams) -> Result<(u64, u64)> {
    if p.m == 0 || p.l == 0 || p.ni == 0 || p.d == 0 || p.lp == 0 {
        return Err(Error::InvalidParameter(
            "complexity parameters must be positive".into(),
        ));
    }
    let m = p.m as i128;
    let ni = p.ni as i128;
    let d = p.d as i128;
    let lp = p.lp as i128;
    let mr = ((p.m as f64 / p.l as f64).round() as i128).max(1);
    let sq = |x: i128| x * x;
    let (add, mul) = match alg {
        Algorithm::LmsFull => (2 * m, 2 * m + 1),
        Algorithm::LmsInt => (
            2 * mr + 2 * ni + ni * m + mr * ni + 2,
            3 * mr + 2 * ni + mr * ni,
        ),
        Algorithm::LmsPd => (sq(d - 1) + 2 * d + 1, sq(d) + 2 * d + 2),
        Algorithm::RlsFull => (3 * sq(m - 1) + sq(m) + 2 * m, 6 * sq(m) + 2 * m + 2),
        Algorithm::RlsInt => (
            3 * sq(mr - 1)
                + 3 * sq(ni - 1)
                + (mr - 1) * ni
                + ni * m
                + sq(mr)
                + sq(ni)
                + 2 * mr
                + 2 * ni,
            6 * sq(mr) + 6 * sq(ni) + mr * ni + 3 * mr + ni + 2,
        ),
        Algorithm::RlsPd => (4 * sq(d - 1) + sq(d) + 2 * d, 7 * sq(d) + 2 * d + 2),
        Algorithm::CmvSgFull => (sq(m) + m * lp + 2 * m + 1, sq(m) + m * lp + 3 * m),
        Algorithm::CmvSgInt => (
            sq(mr) + mr * lp + ni * m + mr * ni + 2 * mr + ni + 2,
            sq(mr) + mr * lp + mr * ni + 4 * mr + ni,
        ),
        Algorithm::CmvRlsFull => (
            4 * sq(m - 1) + sq(m) + 3 * sq(lp - 1) - 1 + sq(lp) + 2 * lp + m * lp,
            7 * sq(m) + m + sq(lp) + m * lp + lp + 4,
        ),
        Algorithm::CmvRlsInt => (
            4 * sq(mr - 1) + sq(mr) + sq(lp) + 3 * sq(lp - 1) + 2 * mr * lp + ni * m + 3 * lp - 1
                + (mr - 1) * ni
                + sq(ni - 1),
            7 * sq(mr) + 2 * mr + sq(lp) + mr * lp + lp + 2 + sq(ni) + mr * ni + ni,
        ),
    };
    Ok((add as u64, mul as u64))
}
