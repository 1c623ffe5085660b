//! Periodic pseudospectral integration of the KdV, Whitham and
//! full-dispersion shallow water models.

mod diagnostics;
mod evolve;

pub use diagnostics::{breaking_monitor, conserved_diagnostics, BreakingMonitor, BreakingThresholds, Conserved};
pub use evolve::{evolve, EvolutionConfig, Model, RunStatus, Snapshot, SnapshotDiagnostics, Trajectory, WaveState};

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid `x_j = j L / N` with cached FFT plans.
#[derive(Clone)]
pub struct SpectralGrid {
    length: f64,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("length", &self.length)
            .field("n", &self.n)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length && self.n == other.n
    }
}

impl SpectralGrid {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::domain(format!("domain length must be positive, got {length}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::domain(format!("grid size must be a power of two ≥ 16, got {n}")));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            length,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| j as f64 * self.dx()).collect()
    }

    /// Signed wavenumber of FFT bin `j`; the Nyquist bin is reported as positive.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let half = self.n / 2;
        let m = if j <= half { j as f64 } else { j as f64 - self.n as f64 };
        2.0 * PI * m / self.length
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.wavenumber(j)).collect()
    }

    /// Wavenumbers for odd symbols such as `∂x`: the Nyquist bin is zeroed so
    /// real fields stay real.
    pub fn odd_wavenumbers(&self) -> Vec<f64> {
        let mut k = self.wavenumbers();
        k[self.n / 2] = 0.0;
        k
    }

    /// 2/3-rule mask: bins with `|m| > N/3` are removed.
    pub fn dealias_mask(&self) -> Vec<f64> {
        let cutoff = self.n as f64 / 3.0;
        (0..self.n)
            .map(|j| {
                let m = if j <= self.n / 2 { j } else { self.n - j };
                if (m as f64) < cutoff {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    }

    pub fn fft(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse transform keeping the real part.
    pub fn ifft_real(&self, spectrum: &[Complex64]) -> Vec<f64> {
        let mut buf = spectrum.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter().map(|z| z.re * scale).collect()
    }

    /// Spectral derivative of a real periodic field.
    pub fn derivative(&self, values: &[f64]) -> Vec<f64> {
        let mut spec = self.fft(values);
        for (z, k) in spec.iter_mut().zip(self.odd_wavenumbers()) {
            *z *= Complex64::new(0.0, k);
        }
        self.ifft_real(&spec)
    }

    /// Trapezoid rule, which on a periodic uniform grid is `dx · Σ`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.dx() * values.iter().sum::<f64>()
    }
}
