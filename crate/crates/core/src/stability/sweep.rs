use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify, failed_record, index_components, StabilityProtocol, StabilityRecord, Verdict};
use crate::error::{Error, Result};
use crate::numerics::{bisect_predicate, bracketed_roots};
use crate::params::PhysicalParams;

fn run_pooled<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

fn classify_or_record(k: f64, params: &PhysicalParams, protocol: &StabilityProtocol) -> StabilityRecord {
    classify(k, params, protocol).unwrap_or_else(|e| failed_record(k, params, &e))
}

/// Classifies every `(T, ω, k)` of the tensor grid, in that nesting order.
/// Points that cannot be classified carry their error in the record.
pub fn sweep(
    tensions: &[f64],
    omegas: &[f64],
    ks: &[f64],
    protocol: &StabilityProtocol,
    threads: Option<usize>,
) -> Result<Vec<StabilityRecord>> {
    protocol.validate()?;
    let mut points = Vec::with_capacity(tensions.len() * omegas.len() * ks.len());
    for &t in tensions {
        for &w in omegas {
            let params = PhysicalParams::normalized(w, t)?;
            points.extend(ks.iter().map(|&k| (params, k)));
        }
    }
    run_pooled(threads, || {
        points
            .par_iter()
            .map(|(p, k)| classify_or_record(*k, p, protocol))
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curve {
    /// `(kc)'' = 0`
    R1,
    /// `((kc)')² = c²(0)`
    R2,
    /// second-harmonic resonance
    R3,
    /// sign change of the modulational index
    R4,
}

impl Curve {
    pub fn label(self) -> &'static str {
        match self {
            Curve::R1 => "R1",
            Curve::R2 => "R2",
            Curve::R3 => "R3",
            Curve::R4 => "R4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonancePoint {
    pub curve: Curve,
    pub tension: f64,
    pub k: f64,
    pub k_sqrt_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceOptions {
    pub omega: f64,
    pub k_max: f64,
    /// Samples on `(0, k_max]` used to bracket the roots of `i1, i2, i3`.
    pub samples: usize,
    /// Wavenumbers classified to bracket sign changes of the index; empty
    /// skips that curve.
    pub index_grid: Vec<f64>,
    /// Bisection width for index sign changes.
    pub index_width: f64,
    pub protocol: StabilityProtocol,
}

impl Default for ResonanceOptions {
    fn default() -> Self {
        Self {
            omega: 0.0,
            k_max: 20.0,
            samples: 4000,
            index_grid: Vec::new(),
            index_width: 1e-3,
            protocol: StabilityProtocol::default(),
        }
    }
}

/// `sign(i1 i2 / i3)` times `+1` for stable, `−1` for unstable records.
fn index_sign(r: &StabilityRecord, threshold: f64) -> Option<f64> {
    if r.error.is_some() {
        return None;
    }
    let v = if r.leans_unstable(threshold) { -1.0 } else { 1.0 };
    let q = (r.i1 * r.i2 * r.i3).signum();
    q.is_finite().then_some(v * q)
}

fn index_roots(params: &PhysicalParams, opts: &ResonanceOptions, threads: Option<usize>) -> Result<Vec<f64>> {
    let protocol = &opts.protocol;
    let thr = protocol.threshold;
    let records: Vec<StabilityRecord> = run_pooled(threads, || {
        opts.index_grid
            .par_iter()
            .map(|&k| classify_or_record(k, params, protocol))
            .collect()
    })?;
    let signs: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.verdict != Verdict::Indeterminate)
        .filter_map(|r| index_sign(r, thr).map(|s| (r.k, s)))
        .collect();
    let mut roots = Vec::new();
    for w in signs.windows(2) {
        let ((k0, s0), (k1, s1)) = (w[0], w[1]);
        if s0 == s1 {
            continue;
        }
        let flipped = |k: f64| -> Result<bool> {
            let r = classify(k, params, protocol)?;
            Ok(index_sign(&r, thr).is_some_and(|s| s != s0))
        };
        match bisect_predicate(flipped, k0, k1, opts.index_width) {
            Ok((lo, hi)) => roots.push(0.5 * (lo + hi)),
            Err(Error::Resonance { .. }) => roots.push(0.5 * (k0 + k1)),
            Err(e) => return Err(e),
        }
    }
    Ok(roots)
}

/// Zero sets of `i1, i2, i3` (and optionally of the index) in `k` for each
/// surface tension.
pub fn resonance_curves(
    tensions: &[f64],
    opts: &ResonanceOptions,
    threads: Option<usize>,
) -> Result<Vec<ResonancePoint>> {
    if !(opts.k_max > 0.0) || opts.samples < 2 {
        return Err(Error::InvalidParams(
            "resonance scan needs k_max > 0 and at least 2 samples".into(),
        ));
    }
    let grid: Vec<f64> = (1..=opts.samples)
        .map(|i| opts.k_max * i as f64 / opts.samples as f64)
        .collect();
    let mut out = Vec::new();
    for &t in tensions {
        let params = PhysicalParams::normalized(opts.omega, t)?;
        let point = |curve, k: f64| ResonancePoint {
            curve,
            tension: t,
            k,
            k_sqrt_t: k * t.sqrt(),
        };
        for (curve, idx) in [(Curve::R1, 0), (Curve::R2, 1), (Curve::R3, 2)] {
            let f = |k: f64| index_components(k, &params).map_or(f64::NAN, |c| [c.0, c.1, c.2][idx]);
            out.extend(bracketed_roots(f, &grid, 1e-12).into_iter().map(|k| point(curve, k)));
        }
        if !opts.index_grid.is_empty() {
            out.extend(
                index_roots(&params, opts, threads)?
                    .into_iter()
                    .map(|k| point(Curve::R4, k)),
            );
        }
    }
    Ok(out)
}
