//! Small-amplitude periodic traveling waves of the full-dispersion shallow
//! water system (normalized `g = h0 = 1`).
//!
//! In the frame `z = k(x − ct)` the steady equations integrate once to
//!
//! ```text
//! −c η + u + u η − ω η²/2 = 0
//! −c u + ω c²(D) u + c²(D) η + u²/2 = 0
//! ```
//!
//! with `D = k|∂z|`. Profiles are even cosine series truncated at index `M`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dispersion::squared_symbol;
use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Denominators below this magnitude are treated as resonant.
pub const RESONANCE_TOLERANCE: f64 = 1e-8;

/// Largest truncation reached by automatic doubling in [`newton_refine`].
pub const MAX_TRUNCATION: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TravelingWave {
    pub k: f64,
    pub a: f64,
    pub c: f64,
    /// Cosine coefficients `0..=M`.
    pub eta: Vec<f64>,
    pub u: Vec<f64>,
    pub params: PhysicalParams,
}

impl TravelingWave {
    /// Truncation index `M`.
    pub fn truncation(&self) -> usize {
        self.eta.len() - 1
    }

    /// Flat state moving at the linear speed.
    pub fn flat(k: f64, params: &PhysicalParams, m: usize) -> Result<Self> {
        check_inputs(k, params)?;
        Ok(Self {
            k,
            a: 0.0,
            c: linear_speed(k, params),
            eta: vec![0.0; m + 1],
            u: vec![0.0; m + 1],
            params: *params,
        })
    }

    /// Same wave with coefficients zero-padded (or cut) to truncation `m`.
    pub fn with_truncation(&self, m: usize) -> Self {
        let mut w = self.clone();
        w.eta.resize(m + 1, 0.0);
        w.u.resize(m + 1, 0.0);
        w
    }

    /// Largest coefficient magnitude in the last quarter of either series.
    pub fn tail(&self) -> f64 {
        let m = self.truncation();
        let start = (3 * m) / 4 + 1;
        self.eta[start.min(m)..]
            .iter()
            .chain(&self.u[start.min(m)..])
            .fold(0.0, |t, v| t.max(v.abs()))
    }

    pub fn eta_at(&self, z: f64) -> f64 {
        cosine_sum(&self.eta, z)
    }

    pub fn u_at(&self, z: f64) -> f64 {
        cosine_sum(&self.u, z)
    }
}

fn cosine_sum(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().enumerate().map(|(m, c)| c * (m as f64 * z).cos()).sum()
}

fn check_inputs(k: f64, params: &PhysicalParams) -> Result<()> {
    params.validate()?;
    params.require_normalized("traveling waves")?;
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("wavenumber must be positive, got {k}")));
    }
    Ok(())
}

/// Right-moving linear speed of the full-dispersion system,
/// the positive root of `c² − ω C c − C = 0` with `C = c²(k)`.
///
/// Without surface tension this is the exact phase speed of the Euler
/// problem; with tension the vorticity term also carries `1 + T k²`.
pub fn linear_speed(k: f64, params: &PhysicalParams) -> f64 {
    branch_speeds(k, params).0
}

/// Both roots `(right, left)` of `c² − ω C c − C = 0`.
pub fn branch_speeds(k: f64, params: &PhysicalParams) -> (f64, f64) {
    let s = squared_symbol(k, params);
    let half = 0.5 * params.omega * s;
    let root = (s + half * half).sqrt();
    if half >= 0.0 {
        let right = half + root;
        (right, -s / right)
    } else {
        let left = half - root;
        (-s / left, left)
    }
}

/// Determinant of the linear 2×2 block of harmonic `m` at speed `c`:
/// `c² − ω C(mk) c − C(mk)`.
pub fn harmonic_denominator(m: usize, k: f64, c: f64, params: &PhysicalParams) -> f64 {
    let s = squared_symbol(m as f64 * k, params);
    c * c - params.omega * s * c - s
}

/// Explicit `O(a²)` expansion: first and second harmonics plus the mean
/// level and mean flow, at the linear speed.
pub fn stokes_wave(k: f64, a: f64, params: &PhysicalParams) -> Result<TravelingWave> {
    check_inputs(k, params)?;
    if !a.is_finite() {
        return Err(Error::domain("amplitude must be finite"));
    }
    let omega = params.omega;
    let c0 = linear_speed(k, params);
    let c2k = squared_symbol(2.0 * k, params);
    let d0 = harmonic_denominator(0, k, c0, params);
    let d2 = harmonic_denominator(2, k, c0, params);
    for (harmonic, d) in [(0, d0), (2, d2)] {
        if d.abs() < RESONANCE_TOLERANCE {
            return Err(Error::Resonance {
                k,
                harmonic,
                denominator: d,
            });
        }
    }
    let q = 0.25 * a * a;
    let eta = vec![
        q * (3.0 * c0 * c0 - 3.0 * omega * c0 + omega * omega) / d0,
        a,
        q * (3.0 * c0 * c0 - omega * c0 * (1.0 + 2.0 * c2k) + omega * omega * c2k) / d2,
    ];
    let u = vec![
        q * (c0 * c0 * c0 + 2.0 * c0 - omega) / d0,
        a * c0,
        q * (c0 * c0 * c0 + 2.0 * c2k * c0 - omega * c2k) / d2,
    ];
    Ok(TravelingWave {
        k,
        a,
        c: c0,
        eta,
        u,
        params: *params,
    })
}

/// Galerkin product matrix: `(f g)_i = Σ_m P(f)[i][m] g_m` for cosine
/// series truncated at `M`.
fn product_matrix(f: &[f64]) -> DMatrix<f64> {
    let m = f.len() - 1;
    let hat = |j: isize| -> f64 {
        let j = j.unsigned_abs();
        if j == 0 {
            f[0]
        } else if j <= m {
            0.5 * f[j]
        } else {
            0.0
        }
    };
    DMatrix::from_fn(m + 1, m + 1, |i, col| {
        let (i, col) = (i as isize, col as isize);
        match (i, col) {
            (0, 0) => f[0],
            (0, c) => 0.5 * f[c as usize],
            (i, 0) => 2.0 * hat(i),
            (i, c) => hat(i - c) + hat(i + c),
        }
    })
}

struct Galerkin {
    omega: f64,
    symbol: Vec<f64>,
    a: f64,
    m: usize,
}

impl Galerkin {
    fn new(k: f64, a: f64, params: &PhysicalParams, m: usize) -> Self {
        Self {
            omega: params.omega,
            symbol: (0..=m).map(|j| squared_symbol(j as f64 * k, params)).collect(),
            a,
            m,
        }
    }

    /// Unknowns `[η0, η2..ηM, u0..uM, c]` to full coefficient vectors.
    fn unpack(&self, x: &DVector<f64>) -> (Vec<f64>, Vec<f64>, f64) {
        let m = self.m;
        let mut eta = Vec::with_capacity(m + 1);
        eta.push(x[0]);
        eta.push(self.a);
        eta.extend(x.rows(1, m - 1).iter());
        let u: Vec<f64> = x.rows(m, m + 1).iter().cloned().collect();
        (eta, u, x[2 * m + 1])
    }

    fn pack(&self, eta: &[f64], u: &[f64], c: f64) -> DVector<f64> {
        let m = self.m;
        let mut x = DVector::zeros(2 * m + 2);
        x[0] = eta[0];
        for j in 2..=m {
            x[j - 1] = eta[j];
        }
        for j in 0..=m {
            x[m + j] = u[j];
        }
        x[2 * m + 1] = c;
        x
    }

    /// Residual coefficients and Jacobian with respect to the unknowns.
    fn system(&self, x: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let m = self.m;
        let n = m + 1;
        let (eta, u, c) = self.unpack(x);
        let pe = product_matrix(&eta);
        let pu = product_matrix(&u);
        let ev = DVector::from_column_slice(&eta);
        let uv = DVector::from_column_slice(&u);
        let ue = &pu * &ev;
        let ee = &pe * &ev;
        let uu = &pu * &uv;
        let mut r = DVector::zeros(2 * n);
        for i in 0..n {
            let s = self.symbol[i];
            r[i] = -c * eta[i] + u[i] + ue[i] - 0.5 * self.omega * ee[i];
            r[n + i] = -c * u[i] + self.omega * s * u[i] + s * eta[i] + 0.5 * uu[i];
        }

        // Full Jacobian over (η0..ηM, u0..uM, c), then drop the η1 column.
        let mut full = DMatrix::zeros(2 * n, 2 * n + 1);
        for i in 0..n {
            for j in 0..n {
                let d = if i == j { 1.0 } else { 0.0 };
                full[(i, j)] = -c * d + pu[(i, j)] - self.omega * pe[(i, j)];
                full[(i, n + j)] = d + pe[(i, j)];
                full[(n + i, j)] = d * self.symbol[i];
                full[(n + i, n + j)] = d * (-c + self.omega * self.symbol[i]) + pu[(i, j)];
            }
            full[(i, 2 * n)] = -eta[i];
            full[(n + i, 2 * n)] = -u[i];
        }
        let jac = full.remove_column(1);
        (r, jac)
    }
}

/// Sup-norm of the steady residuals
/// `−cη′ + (u(1+η))′ − ωηη′` and `−cu′ + ωc²(D)u′ + c²(D)η′ + uu′`
/// (primes are `d/dz`), evaluated pseudospectrally on `max(64, 8M)` points.
pub fn residual(wave: &TravelingWave) -> Result<f64> {
    check_inputs(wave.k, &wave.params)?;
    let m = wave.truncation();
    let nz = (8 * m).max(64);
    let z: Vec<f64> = (0..nz)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / nz as f64)
        .collect();
    let omega = wave.params.omega;
    let sample = |coeffs: &[f64], deriv: bool, weight: &dyn Fn(usize) -> f64| -> Vec<f64> {
        z.iter()
            .map(|&z| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let jf = j as f64;
                        let w = c * weight(j);
                        if deriv {
                            -w * jf * (jf * z).sin()
                        } else {
                            w * (jf * z).cos()
                        }
                    })
                    .sum()
            })
            .collect()
    };
    let one = |_: usize| 1.0;
    let sym = |j: usize| squared_symbol(j as f64 * wave.k, &wave.params);
    let eta = sample(&wave.eta, false, &one);
    let u = sample(&wave.u, false, &one);
    let deta = sample(&wave.eta, true, &one);
    let du = sample(&wave.u, true, &one);
    let c_deta = sample(&wave.eta, true, &sym);
    let c_du = sample(&wave.u, true, &sym);
    let mut sup = 0.0_f64;
    for j in 0..nz {
        let r1 = -wave.c * deta[j] + du[j] * (1.0 + eta[j]) + u[j] * deta[j] - omega * eta[j] * deta[j];
        let r2 = -wave.c * du[j] + omega * c_du[j] + c_deta[j] + u[j] * du[j];
        sup = sup.max(r1.abs()).max(r2.abs());
    }
    Ok(sup)
}

fn check_resonances(k: f64, c: f64, params: &PhysicalParams, m: usize) -> Result<()> {
    for harmonic in std::iter::once(0).chain(2..=m) {
        let d = harmonic_denominator(harmonic, k, c, params);
        if d.abs() < RESONANCE_TOLERANCE {
            return Err(Error::Resonance {
                k,
                harmonic,
                denominator: d,
            });
        }
    }
    Ok(())
}

fn solve_fixed(seed: &TravelingWave, m: usize, tol: f64) -> Result<TravelingWave> {
    const MAX_ITER: usize = 50;
    let params = seed.params;
    let sys = Galerkin::new(seed.k, seed.a, &params, m);
    let start = seed.with_truncation(m);
    let mut x = sys.pack(&start.eta, &start.u, start.c);
    let (mut r, mut jac) = sys.system(&x);
    let mut norm = r.amax();
    for _ in 0..MAX_ITER {
        if norm <= tol {
            let (eta, u, c) = sys.unpack(&x);
            return Ok(TravelingWave {
                k: seed.k,
                a: seed.a,
                c,
                eta,
                u,
                params,
            });
        }
        let step = jac
            .clone()
            .lu()
            .solve(&(-&r))
            .ok_or_else(|| Error::Numerical(format!("singular Galerkin Jacobian at k = {}", seed.k)))?;
        let mut lambda = 1.0;
        loop {
            let trial = &x + lambda * &step;
            let (rt, jt) = sys.system(&trial);
            let nt = rt.amax();
            if nt < norm || lambda < 1e-3 || (nt <= tol) {
                x = trial;
                r = rt;
                jac = jt;
                norm = nt;
                break;
            }
            lambda *= 0.5;
        }
        if !norm.is_finite() {
            break;
        }
    }
    Err(Error::Convergence {
        iterations: MAX_ITER,
        residual: norm,
    })
}

/// Damped Newton on the Galerkin system with `η1 = a` held fixed. The
/// truncation starts at `m` and doubles until the last quarter of the
/// coefficients is below `1e−12`.
pub fn newton_refine(seed: &TravelingWave, m: usize, tol: f64) -> Result<TravelingWave> {
    check_inputs(seed.k, &seed.params)?;
    if m < 8 {
        return Err(Error::domain(format!("truncation must be at least 8, got {m}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if seed.a == 0.0 {
        return TravelingWave::flat(seed.k, &seed.params, m);
    }
    check_resonances(seed.k, seed.c, &seed.params, m)?;
    let mut m = m;
    let mut wave = solve_fixed(seed, m, tol)?;
    while wave.tail() > 1e-12 && 2 * m <= MAX_TRUNCATION {
        m *= 2;
        check_resonances(seed.k, wave.c, &seed.params, m)?;
        wave = solve_fixed(&wave, m, tol)?;
    }
    check_resonances(seed.k, wave.c, &seed.params, m)?;
    Ok(wave)
}

/// Stokes seed followed by Newton refinement.
pub fn traveling_wave(k: f64, a: f64, params: &PhysicalParams, m: usize) -> Result<TravelingWave> {
    let seed = stokes_wave(k, a, params)?;
    newton_refine(&seed, m, 1e-14)
}
