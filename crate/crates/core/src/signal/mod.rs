//! Synchronous DS-CDMA downlink model: spreading codes, symbol frames,
//! multipath channel and the chip-rate received vector.

pub mod channel;
pub mod fading;
pub mod gold;

pub use gold::gold_codes;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub use channel::{
    build_channel_matrix, fading_step, isi_span, random_three_path, ChannelRealization, PathProfile,
};
pub use fading::{DopplerDesign, FadingProcess};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{complex_gaussian, CMatrix, CVector, C64};

/// Per-user unit-norm signatures with entries `±1/sqrt(N)`.
#[derive(Debug, Clone)]
pub struct SpreadingSet {
    pub codes: Vec<DVector<f64>>,
}

impl SpreadingSet {
    /// Gold family of degree 5 (N = 31) or 6 (N = 63).
    pub fn gold(degree: u32, count: usize) -> Result<Self> {
        Ok(Self {
            codes: gold::gold_codes(degree, count)?,
        })
    }

    pub fn from_codes(codes: Vec<DVector<f64>>) -> Result<Self> {
        let n = codes
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty spreading set".into()))?
            .len();
        for c in &codes {
            check_dim("spreading code length", n, c.len())?;
        }
        Ok(Self { codes })
    }

    pub fn users(&self) -> usize {
        self.codes.len()
    }

    pub fn spreading_gain(&self) -> usize {
        self.codes[0].len()
    }

    pub fn code(&self, k: usize) -> CVector {
        self.codes[k].map(|a| C64::new(a, 0.0))
    }

    pub fn block_matrix(&self, k: usize, ls: usize) -> CMatrix {
        build_block_matrix(&self.code(k), ls)
    }
}

/// `((2 L_s - 1) N) x (2 L_s - 1)` block-diagonal matrix with the code
/// repeated down the diagonal.
pub fn build_block_matrix(code: &CVector, ls: usize) -> CMatrix {
    let n = code.len();
    let blocks = 2 * ls - 1;
    let mut s = CMatrix::zeros(blocks * n, blocks);
    for j in 0..blocks {
        s.view_mut((j * n, j), (n, 1)).copy_from(code);
    }
    s
}

/// Symbols seen by one received vector: row `k` holds
/// `[b_k(i+L_s-1), ..., b_k(i), ..., b_k(i-L_s+1)]`.
#[derive(Debug, Clone)]
pub struct SymbolFrame {
    pub bits: DMatrix<f64>,
    pub amplitudes: Vec<f64>,
}

impl SymbolFrame {
    pub fn new(bits: DMatrix<f64>, amplitudes: Vec<f64>) -> Result<Self> {
        check_dim("symbol frame users", bits.nrows(), amplitudes.len())?;
        if bits.ncols().is_multiple_of(2) {
            return Err(Error::InvalidParameter(
                "symbol frame needs an odd number of columns".into(),
            ));
        }
        if bits.iter().any(|&b| b != 1.0 && b != -1.0) {
            return Err(Error::InvalidParameter("symbols must be ±1".into()));
        }
        Ok(Self { bits, amplitudes })
    }

    pub fn isi_span(&self) -> usize {
        self.bits.ncols().div_ceil(2)
    }

    /// Current symbol `b_k(i)`.
    pub fn current(&self, k: usize) -> f64 {
        self.bits[(k, self.isi_span() - 1)]
    }
}

/// Chip-rate received vector of length `M = N + L_p - 1`.
#[derive(Debug, Clone)]
pub struct ReceivedVector {
    pub samples: CVector,
    pub noise_variance: f64,
}

impl ReceivedVector {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Noise variance per complex sample for a given `E_b/N_0` in dB with unit
/// desired-user energy per bit.
pub fn noise_variance_from_ebn0(ebn0_db: f64) -> f64 {
    10f64.powf(-ebn0_db / 10.0)
}

/// Stacked chip vector `sum_k A_k S_k b_k` restricted to `users`
/// (and to the current symbol only when `current_only`).
fn chip_vector(
    spreading: &SpreadingSet,
    frame: &SymbolFrame,
    users: impl Iterator<Item = usize>,
    current_only: bool,
) -> CVector {
    let n = spreading.spreading_gain();
    let blocks = frame.bits.ncols();
    let centre = frame.isi_span() - 1;
    let mut z = CVector::zeros(blocks * n);
    for k in users {
        let code = &spreading.codes[k];
        for j in 0..blocks {
            if current_only && j != centre {
                continue;
            }
            let s = frame.amplitudes[k] * frame.bits[(k, j)];
            for c in 0..n {
                z[j * n + c] += C64::new(s * code[c], 0.0);
            }
        }
    }
    z
}

fn check_consistency(
    spreading: &SpreadingSet,
    channel: &ChannelRealization,
    frame: &SymbolFrame,
) -> Result<usize> {
    let n = spreading.spreading_gain();
    check_dim("symbol frame users", spreading.users(), frame.bits.nrows())?;
    let ls = isi_span(channel.paths(), n);
    check_dim("symbol frame ISI span", 2 * ls - 1, frame.bits.ncols())?;
    Ok(ls)
}

/// `r = H sum_k A_k S_k b_k + n` with circular complex Gaussian noise of
/// variance `sigma2` per sample.
pub fn synthesize_received<R: Rng + ?Sized>(
    spreading: &SpreadingSet,
    channel: &ChannelRealization,
    frame: &SymbolFrame,
    sigma2: f64,
    rng: &mut R,
) -> Result<ReceivedVector> {
    if !(sigma2 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise variance {sigma2} < 0"
        )));
    }
    let ls = check_consistency(spreading, channel, frame)?;
    let h = channel.matrix(spreading.spreading_gain(), ls);
    let z = chip_vector(spreading, frame, 0..spreading.users(), false);
    let mut samples = h * z;
    if sigma2 > 0.0 {
        samples
            .iter_mut()
            .for_each(|s| *s += complex_gaussian(rng, sigma2));
    }
    Ok(ReceivedVector {
        samples,
        noise_variance: sigma2,
    })
}

/// Received vector together with the noiseless contribution of the desired
/// user's current symbol.
#[derive(Debug, Clone)]
pub struct ReceivedParts {
    pub total: ReceivedVector,
    pub desired: CVector,
}

pub fn synthesize_with_parts<R: Rng + ?Sized>(
    spreading: &SpreadingSet,
    channel: &ChannelRealization,
    frame: &SymbolFrame,
    desired_user: usize,
    sigma2: f64,
    rng: &mut R,
) -> Result<ReceivedParts> {
    let ls = check_consistency(spreading, channel, frame)?;
    let h = channel.matrix(spreading.spreading_gain(), ls);
    let desired = &h * chip_vector(spreading, frame, std::iter::once(desired_user), true);
    let total = synthesize_received(spreading, channel, frame, sigma2, rng)?;
    Ok(ReceivedParts { total, desired })
}

/// Rolling per-user symbol history producing consecutive [`SymbolFrame`]s.
#[derive(Debug, Clone)]
pub struct SymbolStream {
    /// Row `k`: `[b(i+L_s-1), ..., b(i-L_s+1)]`, newest first.
    window: DMatrix<f64>,
    amplitudes: Vec<f64>,
}

impl SymbolStream {
    pub fn new<R: Rng + ?Sized>(amplitudes: Vec<f64>, ls: usize, rng: &mut R) -> Self {
        let k = amplitudes.len();
        let window = DMatrix::from_fn(k, 2 * ls - 1, |_, _| random_bit(rng));
        Self { window, amplitudes }
    }

    pub fn frame(&self) -> SymbolFrame {
        SymbolFrame {
            bits: self.window.clone(),
            amplitudes: self.amplitudes.clone(),
        }
    }

    /// Shifts time forward one symbol, drawing new future symbols.
    pub fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let cols = self.window.ncols();
        for k in 0..self.window.nrows() {
            for j in (1..cols).rev() {
                self.window[(k, j)] = self.window[(k, j - 1)];
            }
            self.window[(k, 0)] = random_bit(rng);
        }
    }
}

pub fn random_bit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}
