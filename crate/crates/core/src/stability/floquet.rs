//! Hill's method for the linearization about a traveling wave.
//!
//! Perturbations `e^{λt} e^{iμz} (P, Q)(z)` with `P, Q` 2π-periodic are
//! expanded in `e^{inz}`, `n = −N..N`. The flux Jacobian about the wave is
//!
//! ```text
//! A = [ −c + u − ωη    1 + η           ]
//!     [ c²(D)          −c + ω c²(D) + u ]
//! ```
//!
//! and `λ` are the eigenvalues of `−i diag(K) A` with `K_n = k(n + μ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::squared_symbol;
use crate::error::{Error, Result};
use crate::traveling::TravelingWave;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloquetSpectrum {
    pub mu: f64,
    pub a: f64,
    pub eigenvalues: Vec<Complex64>,
}

fn check(wave: &TravelingWave, mu: f64, n_trunc: usize) -> Result<()> {
    if n_trunc < wave.truncation() {
        return Err(Error::domain(format!(
            "Floquet truncation {n_trunc} is below the wave truncation {}",
            wave.truncation()
        )));
    }
    if !(mu.abs() <= 0.5) {
        return Err(Error::domain(format!(
            "Floquet exponent must satisfy |μ| ≤ 1/2, got {mu}"
        )));
    }
    wave.params.require_normalized("Floquet analysis")
}

/// Real matrix `diag(K) A`; its eigenvalues `ν` give `λ = −iν`.
fn real_operator(wave: &TravelingWave, mu: f64, n_trunc: usize) -> DMatrix<f64> {
    let d = 2 * n_trunc + 1;
    let m = wave.truncation();
    let hat = |coeffs: &[f64], j: isize| -> f64 {
        let j = j.unsigned_abs();
        if j == 0 {
            coeffs[0]
        } else if j <= m {
            0.5 * coeffs[j]
        } else {
            0.0
        }
    };
    let omega = wave.params.omega;
    let c = wave.c;
    let kn: Vec<f64> = (0..d).map(|i| wave.k * (i as f64 - n_trunc as f64 + mu)).collect();
    let sym: Vec<f64> = kn.iter().map(|&k| squared_symbol(k.abs(), &wave.params)).collect();
    DMatrix::from_fn(2 * d, 2 * d, |row, col| {
        let (bi, i) = (row / d, row % d);
        let (bj, j) = (col / d, col % d);
        let off = i as isize - j as isize;
        let diag = if i == j { 1.0 } else { 0.0 };
        let entry = match (bi, bj) {
            (0, 0) => -c * diag + hat(&wave.u, off) - omega * hat(&wave.eta, off),
            (0, 1) => diag + hat(&wave.eta, off),
            (1, 0) => diag * sym[i],
            _ => diag * (-c + omega * sym[i]) + hat(&wave.u, off),
        };
        kn[i] * entry
    })
}

/// Complex Hill matrix `−i diag(K) A` of size `2(2N+1)`.
pub fn floquet_matrix(wave: &TravelingWave, mu: f64, n_trunc: usize) -> Result<DMatrix<Complex64>> {
    check(wave, mu, n_trunc)?;
    Ok(real_operator(wave, mu, n_trunc).map(|v| Complex64::new(0.0, -v)))
}

/// Eigenvalues `λ` at Floquet exponent `mu`.
pub fn floquet_spectrum(wave: &TravelingWave, mu: f64, n_trunc: usize) -> Result<FloquetSpectrum> {
    check(wave, mu, n_trunc)?;
    let nu = real_operator(wave, mu, n_trunc).complex_eigenvalues();
    Ok(FloquetSpectrum {
        mu,
        a: wave.a,
        eigenvalues: nu.iter().map(|z| Complex64::new(z.im, -z.re)).collect(),
    })
}

impl FloquetSpectrum {
    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues.iter().fold(f64::NEG_INFINITY, |m, z| m.max(z.re))
    }

    /// The `count` eigenvalues of smallest modulus.
    pub fn nearest_origin(&self, count: usize) -> Vec<Complex64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        v.truncate(count);
        v
    }
}

/// Continues `tracked` to the nearest unused eigenvalues of `spectrum`.
pub(crate) fn continue_branches(tracked: &[Complex64], spectrum: &[Complex64]) -> Vec<Complex64> {
    let mut used = vec![false; spectrum.len()];
    tracked
        .iter()
        .map(|z| {
            let (idx, _) = spectrum
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, w)| (i, (w - z).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("spectrum has more eigenvalues than tracked branches");
            used[idx] = true;
            spectrum[idx]
        })
        .collect()
}
