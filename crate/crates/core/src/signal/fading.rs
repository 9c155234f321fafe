//! Rayleigh fading gains with a Clarke/Jakes Doppler spectrum.
//!
//! White circular Gaussian noise is shaped by an FIR filter whose frequency
//! response is the square root of the Clarke power spectrum
//! `1/sqrt(1 - (f/fd)^2)` on `|f| < fd`. The singularity at `|f| = fd` is
//! clipped at the value half a frequency bin inside the band. Filtering is
//! done block-wise with overlap-save so the gain process is continuous across
//! blocks. The impulse response has unit energy, so the output has unit power.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::linalg::{complex_gaussian, C64, ZERO};

/// Shared filter design for one normalized Doppler rate.
pub struct DopplerDesign {
    fd: f64,
    taps: usize,
    spectrum: Vec<C64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for DopplerDesign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DopplerDesign")
            .field("fd", &self.fd)
            .field("taps", &self.taps)
            .finish()
    }
}

/// Square-root Clarke mask sampled on a grid of `grid` bins over one
/// cycle/symbol, with the band-edge singularity clipped.
pub fn sqrt_clarke_mask(fd: f64, grid: usize) -> Vec<f64> {
    let df = 1.0 / grid as f64;
    let edge = (fd - 0.5 * df).max(0.5 * df);
    let cap = (1.0 - (edge / fd).powi(2))
        .max(f64::MIN_POSITIVE)
        .powf(-0.25);
    (0..grid)
        .map(|k| {
            let f = if k <= grid / 2 {
                k as f64 * df
            } else {
                k as f64 * df - 1.0
            };
            let x = f.abs() / fd;
            if x < 1.0 {
                (1.0 - x * x).powf(-0.25).min(cap)
            } else if f.abs() < 0.5 * df {
                cap
            } else {
                0.0
            }
        })
        .collect()
}

impl DopplerDesign {
    pub fn new(fd: f64) -> Arc<Self> {
        assert!(fd > 0.0, "Doppler design needs fd > 0");
        let grid = ((64.0 / fd).ceil() as usize)
            .clamp(256, 1 << 20)
            .next_power_of_two();
        let mask = sqrt_clarke_mask(fd, grid);

        let mut planner = FftPlanner::new();
        let ifft_grid = planner.plan_fft_inverse(grid);
        let mut h: Vec<C64> = mask.iter().map(|&m| C64::new(m, 0.0)).collect();
        ifft_grid.process(&mut h);
        // centre the (even) response so the FIR is causal
        h.rotate_right(grid / 2);
        let energy: f64 = h.iter().map(|z| z.norm_sqr()).sum();
        let scale = 1.0 / energy.sqrt();
        h.iter_mut().for_each(|z| *z *= scale);

        let fft_len = 2 * grid;
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);
        let mut spectrum = h;
        spectrum.resize(fft_len, ZERO);
        forward.process(&mut spectrum);
        Arc::new(Self {
            fd,
            taps: grid,
            spectrum,
            forward,
            inverse,
        })
    }

    pub fn doppler(&self) -> f64 {
        self.fd
    }
}

/// Per-path fading state: a unit-power complex Gaussian process.
#[derive(Debug, Clone)]
pub enum FadingProcess {
    /// `f_d T = 0`: a single draw held forever.
    Static(C64),
    Shaped {
        design: Arc<DopplerDesign>,
        history: Vec<C64>,
        ready: VecDeque<C64>,
    },
}

impl FadingProcess {
    pub fn new<R: Rng + ?Sized>(fd: f64, design: Option<&Arc<DopplerDesign>>, rng: &mut R) -> Self {
        if fd <= 0.0 {
            return Self::Static(complex_gaussian(rng, 1.0));
        }
        let design = match design {
            Some(d) if d.fd == fd => Arc::clone(d),
            _ => DopplerDesign::new(fd),
        };
        // pre-filled history makes the output stationary from the first sample
        let history = (0..design.taps - 1)
            .map(|_| complex_gaussian(rng, 1.0))
            .collect();
        Self::Shaped {
            design,
            history,
            ready: VecDeque::new(),
        }
    }

    /// Advances one symbol and returns the new gain.
    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> C64 {
        match self {
            Self::Static(g) => *g,
            Self::Shaped {
                design,
                history,
                ready,
            } => {
                if ready.is_empty() {
                    Self::refill(design, history, ready, rng);
                }
                ready.pop_front().expect("refilled")
            }
        }
    }

    fn refill<R: Rng + ?Sized>(
        design: &DopplerDesign,
        history: &mut Vec<C64>,
        ready: &mut VecDeque<C64>,
        rng: &mut R,
    ) {
        let fft_len = design.spectrum.len();
        let overlap = design.taps - 1;
        let fresh = fft_len - overlap;
        let mut buf = Vec::with_capacity(fft_len);
        buf.extend_from_slice(history);
        buf.extend((0..fresh).map(|_| complex_gaussian(rng, 1.0)));
        history.clear();
        history.extend_from_slice(&buf[fft_len - overlap..]);

        design.forward.process(&mut buf);
        buf.iter_mut()
            .zip(&design.spectrum)
            .for_each(|(x, h)| *x *= h);
        design.inverse.process(&mut buf);
        let norm = 1.0 / fft_len as f64;
        ready.extend(buf[overlap..].iter().map(|z| z * norm));
    }
}
