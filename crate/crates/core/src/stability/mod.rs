//! Modulational stability of small-amplitude waves of the full-dispersion
//! shallow water system.

mod floquet;
mod sweep;

pub use floquet::{floquet_matrix, floquet_spectrum, FloquetSpectrum};
pub use sweep::{resonance_curves, sweep, Curve, ResonanceOptions, ResonancePoint};

use log::debug;
use serde::{Deserialize, Serialize};

use crate::dispersion::squared_symbol;
use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::traveling::{linear_speed, traveling_wave, TravelingWave};

/// `k c(k)`, extended as an odd function.
fn frequency(k: f64, params: &PhysicalParams) -> f64 {
    k * linear_speed(k.abs().max(f64::MIN_POSITIVE), params)
}

/// `(i1, i2, i3)`: `(kc)''`, `((kc)')² − c²(0)` and `c²(k) − c²(2k)`, with
/// `c` the right-moving linear speed and `c²(·)` the squared symbol.
pub fn index_components(k: f64, params: &PhysicalParams) -> Result<(f64, f64, f64)> {
    params.validate()?;
    params.require_normalized("index components")?;
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("wavenumber must be positive, got {k}")));
    }
    let h = 1e-3 * k.max(1.0);
    let f = |x: f64| frequency(x, params);
    let (fm2, fm1, f0, fp1, fp2) = (f(k - 2.0 * h), f(k - h), f(k), f(k + h), f(k + 2.0 * h));
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    let i2 = d1 * d1 - squared_symbol(0.0, params);
    let i3 = squared_symbol(k, params) - squared_symbol(2.0 * k, params);
    Ok((d2, i2, i3))
}

/// `ω c₀(k)/c(k)` with `c₀ = sqrt(tanh k / k)` the irrotational speed.
pub fn renormalized_vorticity(k: f64, params: &PhysicalParams) -> f64 {
    let c_irr = crate::dispersion::tanh_ratio(k, 1.0).sqrt();
    params.omega * c_irr / linear_speed(k, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    Unstable,
    Indeterminate,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Stable => "STABLE",
            Verdict::Unstable => "UNSTABLE",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    }
}

/// Numerical protocol behind [`classify`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityProtocol {
    /// Three increasing amplitudes; the last two should differ by a factor 2.
    pub amplitudes: [f64; 3],
    /// Galerkin truncation of the underlying waves.
    pub truncation: usize,
    /// Extra Fourier modes in the Hill matrix beyond the wave truncation.
    pub extra_modes: usize,
    pub mu_min: f64,
    pub mu_max: f64,
    pub mu_count: usize,
    pub threshold: f64,
    /// Accepted range of `growth(2a)/growth(a)`.
    pub ratio_range: (f64, f64),
}

impl Default for StabilityProtocol {
    fn default() -> Self {
        Self {
            amplitudes: [0.005, 0.01, 0.02],
            truncation: 32,
            extra_modes: 8,
            mu_min: 1e-4,
            mu_max: 0.2,
            mu_count: 40,
            threshold: 1e-9,
            ratio_range: (3.0, 5.0),
        }
    }
}

impl StabilityProtocol {
    pub fn mu_grid(&self) -> Vec<f64> {
        let n = self.mu_count.max(2);
        let (lo, hi) = (self.mu_min.ln(), self.mu_max.ln());
        (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    /// Same protocol with `mu_count` doubled.
    pub fn refined_mu(&self) -> Self {
        Self {
            mu_count: 2 * self.mu_count,
            ..self.clone()
        }
    }

    pub fn with_truncation(&self, truncation: usize) -> Self {
        Self {
            truncation,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.amplitudes;
        if !(a[0] > 0.0 && a[0] < a[1] && a[1] < a[2]) {
            return Err(Error::InvalidParams(format!(
                "amplitudes must be positive and increasing: {a:?}"
            )));
        }
        if !(self.mu_min > 0.0 && self.mu_min < self.mu_max && self.mu_max <= 0.5) {
            return Err(Error::InvalidParams(format!(
                "Floquet range must satisfy 0 < mu_min < mu_max ≤ 1/2, got ({}, {})",
                self.mu_min, self.mu_max
            )));
        }
        if self.truncation < 8 || self.mu_count < 2 || !(self.threshold > 0.0) {
            return Err(Error::InvalidParams(
                "protocol needs truncation ≥ 8, ≥ 2 Floquet exponents and a positive threshold".into(),
            ));
        }
        Ok(())
    }
}

/// Largest real part along the four eigenvalue branches that leave the
/// origin, followed over the protocol's Floquet exponents.
pub fn modulational_growth(wave: &TravelingWave, protocol: &StabilityProtocol) -> Result<f64> {
    // Modes below 1e−13 a do not move eigenvalues at the growth threshold;
    // dropping them keeps the Hill matrix small for waves that needed a
    // long Newton truncation.
    let floor = 1e-13 * wave.a.abs();
    let significant = (0..=wave.truncation())
        .rev()
        .find(|&j| wave.eta[j].abs() > floor || wave.u[j].abs() > floor)
        .unwrap_or(0);
    let m = significant.max(protocol.truncation).min(wave.truncation());
    let wave = &wave.with_truncation(m);
    let n_trunc = m + protocol.extra_modes;
    let mut growth = f64::NEG_INFINITY;
    let mut tracked: Vec<num_complex::Complex64> = Vec::new();
    for (i, mu) in protocol.mu_grid().into_iter().enumerate() {
        let spec = floquet_spectrum(wave, mu, n_trunc)?;
        tracked = if i == 0 {
            spec.nearest_origin(4)
        } else {
            floquet::continue_branches(&tracked, &spec.eigenvalues)
        };
        growth = tracked.iter().fold(growth, |g, z| g.max(z.re));
    }
    Ok(growth.max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRecord {
    pub k: f64,
    pub omega: f64,
    pub tension: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    /// Growth at the middle protocol amplitude.
    pub growth_rate: f64,
    /// `(a, growth)` for every protocol amplitude.
    pub growth_by_amplitude: Vec<(f64, f64)>,
    pub verdict: Verdict,
    pub renorm_vorticity: f64,
    pub kc_context: Option<f64>,
    /// Set when the point could not be classified (for instance a resonance).
    pub error: Option<String>,
}

impl StabilityRecord {
    /// Decision used by bisection and index signs: the verdict, or for
    /// indeterminate points growth above threshold at the middle amplitude.
    /// Growth seen only at the largest amplitude is a finite-amplitude
    /// effect and does not count.
    pub fn leans_unstable(&self, threshold: f64) -> bool {
        match self.verdict {
            Verdict::Unstable => true,
            Verdict::Stable => false,
            Verdict::Indeterminate => self.growth_rate > threshold,
        }
    }
}

fn verdict_from(growth: &[f64; 3], protocol: &StabilityProtocol) -> Verdict {
    let thr = protocol.threshold;
    if growth.iter().all(|&g| g <= thr) {
        return Verdict::Stable;
    }
    let ratio = growth[2] / growth[1];
    let (lo, hi) = protocol.ratio_range;
    if growth[1] > thr && growth[2] > thr && (lo..=hi).contains(&ratio) {
        Verdict::Unstable
    } else {
        Verdict::Indeterminate
    }
}

/// Classifies the wave of wavenumber `k` as modulationally stable or
/// unstable by the Floquet protocol.
pub fn classify(k: f64, params: &PhysicalParams, protocol: &StabilityProtocol) -> Result<StabilityRecord> {
    protocol.validate()?;
    let (i1, i2, i3) = index_components(k, params)?;
    let mut growth = [0.0; 3];
    for (g, &a) in growth.iter_mut().zip(&protocol.amplitudes) {
        let wave = traveling_wave(k, a, params, protocol.truncation)?;
        *g = modulational_growth(&wave, protocol)?;
    }
    let verdict = verdict_from(&growth, protocol);
    debug!(
        "classify k = {k}, ω = {}, T = {}: {growth:?} -> {verdict:?}",
        params.omega, params.tension
    );
    Ok(StabilityRecord {
        k,
        omega: params.omega,
        tension: params.tension,
        i1,
        i2,
        i3,
        growth_rate: growth[1],
        growth_by_amplitude: protocol.amplitudes.iter().cloned().zip(growth).collect(),
        verdict,
        renorm_vorticity: renormalized_vorticity(k, params),
        kc_context: None,
        error: None,
    })
}

/// Record for a point whose classification failed.
pub fn failed_record(k: f64, params: &PhysicalParams, err: &Error) -> StabilityRecord {
    let (i1, i2, i3) = index_components(k, params).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    StabilityRecord {
        k,
        omega: params.omega,
        tension: params.tension,
        i1,
        i2,
        i3,
        growth_rate: f64::NAN,
        growth_by_amplitude: Vec::new(),
        verdict: Verdict::Indeterminate,
        renorm_vorticity: renormalized_vorticity(k, params),
        kc_context: None,
        error: Some(err.to_string()),
    }
}

/// Failures tied to a single wavenumber, which bracket searches step over.
fn is_point_failure(e: &Error) -> bool {
    matches!(e, Error::Resonance { .. } | Error::Convergence { .. })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalWavenumber {
    pub k_c: f64,
    /// Final bisection bracket (stable side, unstable side).
    pub bracket: (f64, f64),
    pub classifications: usize,
}

/// Scan and bisection settings of the critical-wavenumber search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KcSearch {
    /// First wavenumber of the upward scan.
    pub lo: f64,
    /// Last wavenumber the scan may reach.
    pub k_limit: f64,
    /// Ratio between consecutive scan points.
    pub scan_ratio: f64,
    pub width: f64,
}

impl Default for KcSearch {
    fn default() -> Self {
        Self {
            lo: 0.5,
            k_limit: 50.0,
            scan_ratio: 1.25,
            width: 1e-3,
        }
    }
}

/// Lowest transition wavenumber from stability (below) to instability
/// (above). A geometric scan from `search.lo` brackets the first unstable
/// point, then [`classify`] is bisected on that bracket.
pub fn critical_wavenumber(
    params: &PhysicalParams,
    protocol: &StabilityProtocol,
    search: &KcSearch,
) -> Result<CriticalWavenumber> {
    if !(search.lo > 0.0 && search.k_limit > search.lo && search.scan_ratio > 1.0 && search.width > 0.0) {
        return Err(Error::InvalidParams(format!(
            "invalid critical wavenumber search {search:?}"
        )));
    }
    let mut count = 0usize;
    let mut unstable = |k: f64| -> Result<bool> {
        count += 1;
        Ok(classify(k, params, protocol)?.leans_unstable(protocol.threshold))
    };
    let mut stable_below: Option<f64> = None;
    let mut k = search.lo;
    let hi = loop {
        match unstable(k) {
            Ok(false) => stable_below = Some(k),
            Ok(true) => match stable_below {
                Some(_) => break k,
                None => {
                    return Err(Error::NotFound(format!(
                        "no stable wavenumber below the unstable k = {k} for ω = {}, T = {}",
                        params.omega, params.tension
                    )))
                }
            },
            Err(e) if is_point_failure(&e) => {}
            Err(e) => return Err(e),
        }
        if k >= search.k_limit {
            return Err(Error::NotFound(format!(
                "no unstable wavenumber up to k = {} for ω = {}, T = {}",
                search.k_limit, params.omega, params.tension
            )));
        }
        k = (k * search.scan_ratio).min(search.k_limit);
    };
    let lo = stable_below.expect("scan stops only after a stable point");
    let (lo, hi) = crate::numerics::bisect_predicate(&mut unstable, lo, hi, search.width)?;
    Ok(CriticalWavenumber {
        k_c: 0.5 * (lo + hi),
        bracket: (lo, hi),
        classifications: count,
    })
}
