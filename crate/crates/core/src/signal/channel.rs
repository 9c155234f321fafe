use std::sync::Arc;

use rand::Rng;

use super::fading::{DopplerDesign, FadingProcess};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64, ZERO};

/// ISI span for a channel of `lp` chip-spaced paths and spreading gain `n`:
/// 1 without multipath, 2 for `1 < lp <= n`, 3 for `n < lp <= 2n`, ...
pub fn isi_span(lp: usize, n: usize) -> usize {
    if lp <= 1 {
        1
    } else {
        1 + lp.div_ceil(n)
    }
}

/// `M x ((2 L_s - 1) N)` convolution matrix.
///
/// Column `j*N + c` carries chip `c` of symbol block `j` of the stacked
/// symbol vector `[b(i+L_s-1), ..., b(i), ..., b(i-L_s+1)]`, which sits at
/// chip position `(L_s-1-j)*N + c` relative to the start of the current
/// symbol. Row `m` (received sample `m`) collects `h_l` from the chip at
/// position `m - l`.
pub fn build_channel_matrix(gains: &[C64], n: usize, ls: usize) -> CMatrix {
    let lp = gains.len();
    let m = n + lp - 1;
    let cols = (2 * ls - 1) * n;
    let mut h = CMatrix::zeros(m, cols);
    for col in 0..cols {
        let (block, chip) = (col / n, col % n);
        let pos = (ls as isize - 1 - block as isize) * n as isize + chip as isize;
        for (l, &g) in gains.iter().enumerate() {
            let row = pos + l as isize;
            if (0..m as isize).contains(&row) {
                h[(row as usize, col)] = g;
            }
        }
    }
    h
}

/// Delay/power profile of the multipath channel.
#[derive(Debug, Clone)]
pub struct PathProfile {
    /// Linear amplitudes `p_l` per chip delay `0..L_p`, normalized so that
    /// `sum p_l^2 = 1`.
    pub amplitudes: Vec<f64>,
}

impl PathProfile {
    pub fn new(mut amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter(
                "channel needs at least one path".into(),
            ));
        }
        let power: f64 = amplitudes.iter().map(|p| p * p).sum();
        if power <= 0.0 {
            return Err(Error::InvalidParameter("channel has zero power".into()));
        }
        let s = power.sqrt().recip();
        amplitudes.iter_mut().for_each(|p| *p *= s);
        Ok(Self { amplitudes })
    }

    /// Paths at the given chip delays with the given powers in dB, embedded
    /// in a profile of length `lp`.
    pub fn from_delays_db(lp: usize, delays: &[usize], powers_db: &[f64]) -> Result<Self> {
        if delays.len() != powers_db.len() {
            return Err(Error::InvalidParameter(
                "delays and powers must have equal length".into(),
            ));
        }
        let mut amps = vec![0.0; lp];
        for (&d, &db) in delays.iter().zip(powers_db) {
            if d >= lp {
                return Err(Error::InvalidParameter(format!(
                    "path delay {d} does not fit in L_p = {lp}"
                )));
            }
            amps[d] += 10f64.powf(db / 20.0);
        }
        Self::new(amps)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

/// Time-varying channel `h_l(i) = p_l alpha_l(i)`.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub profile: PathProfile,
    pub gains: CVector,
    pub doppler: f64,
    fading: Option<Vec<FadingProcess>>,
}

impl ChannelRealization {
    /// Fixed channel with real gains equal to the profile amplitudes.
    pub fn fixed(profile: PathProfile) -> Self {
        let gains = CVector::from_iterator(
            profile.len(),
            profile.amplitudes.iter().map(|&p| C64::new(p, 0.0)),
        );
        Self {
            profile,
            gains,
            doppler: 0.0,
            fading: None,
        }
    }

    /// Rayleigh-faded channel. With `doppler == 0` each active path gets a
    /// single complex Gaussian draw that is held constant.
    pub fn fading<R: Rng + ?Sized>(
        profile: PathProfile,
        doppler: f64,
        design: Option<&Arc<DopplerDesign>>,
        rng: &mut R,
    ) -> Result<Self> {
        if !(doppler >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "f_d T = {doppler} must be >= 0"
            )));
        }
        let mut procs: Vec<FadingProcess> = profile
            .amplitudes
            .iter()
            .map(|_| FadingProcess::new(doppler, design, rng))
            .collect();
        let gains = CVector::from_iterator(
            profile.len(),
            profile
                .amplitudes
                .iter()
                .zip(procs.iter_mut())
                .map(|(&p, proc)| if p == 0.0 { ZERO } else { proc.next(rng) * p }),
        );
        Ok(Self {
            profile,
            gains,
            doppler,
            fading: Some(procs),
        })
    }

    pub fn paths(&self) -> usize {
        self.gains.len()
    }

    pub fn is_fading(&self) -> bool {
        self.fading.is_some()
    }

    /// Advances the channel by one symbol interval.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let Some(procs) = self.fading.as_mut() else {
            return;
        };
        for (l, proc) in procs.iter_mut().enumerate() {
            let p = self.profile.amplitudes[l];
            let a = proc.next(rng);
            self.gains[l] = if p == 0.0 { ZERO } else { a * p };
        }
    }

    pub fn matrix(&self, n: usize, ls: usize) -> CMatrix {
        build_channel_matrix(self.gains.as_slice(), n, ls)
    }
}

/// The randomized profile used for the analytical MSE experiments: three
/// paths at 0, -6 and -10 dB, the second at a uniform delay in 1..=4 chips,
/// the third a further uniform 1..=(5 - tau_2) chips later.
pub fn random_three_path<R: Rng + ?Sized>(
    rng: &mut R,
    lp: usize,
    powers_db: [f64; 3],
) -> Result<PathProfile> {
    let tau2 = rng.random_range(1..=4usize);
    let tau3 = tau2 + rng.random_range(1..=(5 - tau2));
    PathProfile::from_delays_db(lp, &[0, tau2, tau3], &powers_db)
}

/// Advance a fading process without a channel (exposed for tests and tools).
pub fn fading_step<R: Rng + ?Sized>(channel: &mut ChannelRealization, rng: &mut R) {
    channel.step(rng);
}
