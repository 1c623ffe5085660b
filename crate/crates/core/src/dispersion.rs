//! Linear theory of waves on a constant-vorticity shear flow.
//!
//! The phase speed `c` of a `2π/k`-periodic wave solves
//!
//! ```text
//! c² − ω c τ(k) − (g + T k²) τ(k) = 0,      τ(k) = tanh(k h0) / k,
//! ```
//!
//! whose two roots are the right- and left-moving branches. The same
//! quantities appear as Fourier-multiplier symbols in the Whitham and
//! full-dispersion models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Branch, PhysicalParams};

/// Below this value of `|k h0|` the ratio `tanh(k h0)/k` is evaluated by its
/// Taylor series.
const SERIES_CUTOFF: f64 = 1e-4;

/// `tanh(k h0) / k`, even in `k`, equal to `h0` at `k = 0`.
pub fn tanh_ratio(k: f64, h0: f64) -> f64 {
    let x = (k * h0).abs();
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        h0 * (1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0)
    } else {
        (x.tanh() / x) * h0
    }
}

/// Derivative of [`tanh_ratio`] with respect to `k` (for `k ≥ 0`).
fn tanh_ratio_prime(k: f64, h0: f64) -> f64 {
    let x = k * h0;
    if x.abs() < SERIES_CUTOFF {
        let h3 = h0 * h0 * h0;
        -2.0 * h3 * k / 3.0 + 8.0 * h3 * h0 * h0 * k * k * k / 15.0
    } else {
        let sech = 1.0 / x.cosh();
        (h0 * sech * sech - x.tanh() / k) / k
    }
}

fn check_wavenumber(k: f64) -> Result<()> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::domain(format!(
            "wavenumber must be finite and positive, got {k}"
        )));
    }
    Ok(())
}

/// Both roots of the dispersion quadratic, `(right, left)`.
///
/// The root of larger magnitude is formed directly and the other through the
/// product of roots, so neither suffers from cancellation.
fn roots(k: f64, p: &PhysicalParams) -> (f64, f64) {
    let tau = tanh_ratio(k, p.h0);
    let half_b = 0.5 * p.omega * tau;
    let q = (p.g + p.tension * k * k) * tau;
    let disc = (q + half_b * half_b).sqrt();
    if half_b >= 0.0 {
        let right = half_b + disc;
        (right, -q / right)
    } else {
        let left = half_b - disc;
        (-q / left, left)
    }
}

/// Linear phase speed of a `2π/k`-periodic wave.
pub fn phase_speed(k: f64, params: &PhysicalParams, branch: Branch) -> Result<f64> {
    check_wavenumber(k)?;
    let (right, left) = roots(k, params);
    Ok(match branch {
        Branch::RightMoving => right,
        Branch::LeftMoving => left,
    })
}

/// Group speed `d(k c)/dk`, from implicit differentiation of the dispersion
/// quadratic.
pub fn group_speed(k: f64, params: &PhysicalParams, branch: Branch) -> Result<f64> {
    let c = phase_speed(k, params, branch)?;
    let (g, h0, omega, t) = (params.g, params.h0, params.omega, params.tension);
    let tau = tanh_ratio(k, h0);
    let dtau = tanh_ratio_prime(k, h0);
    let dq = 2.0 * t * k * tau + (g + t * k * k) * dtau;
    // 2c − ωτ = ±2·sqrt(discriminant) never vanishes.
    let dc = (omega * dtau * c + dq) / (2.0 * c - omega * tau);
    Ok(c + k * dc)
}

/// Symbol of the unidirectional (Whitham) dispersion operator `c(|∂x|)`.
///
/// With surface tension, `g + T k²` multiplies the gravity term only; the
/// vorticity term keeps `tanh²/k²`.
pub fn whitham_symbol(k: f64, params: &PhysicalParams) -> f64 {
    let tau = tanh_ratio(k, params.h0);
    let q = (params.g + params.tension * k * k) * tau;
    let half_b = 0.5 * params.omega * tau;
    half_b + (q + half_b * half_b).sqrt()
}

/// Symbol of the squared-speed operator `c²(|∂x|)` of the full-dispersion
/// model: `(g + T k²) tanh(|k| h0)/|k|`, equal to `g h0` at `k = 0`.
pub fn squared_symbol(k: f64, params: &PhysicalParams) -> f64 {
    (params.g + params.tension * k * k) * tanh_ratio(k, params.h0)
}

/// Long-wave speed `ω h0/2 + sqrt(g h0 + ω² h0²/4)`.
pub fn long_wave_speed(params: &PhysicalParams, branch: Branch) -> f64 {
    let (g, h0, omega) = (params.g, params.h0, params.omega);
    0.5 * omega * h0 + branch.sign() * (g * h0 + 0.25 * omega * omega * h0 * h0).sqrt()
}

/// Coefficients of the vorticity-modified KdV equation
/// `η_t + c0 η_x + c2 η_xxx + n1 η η_x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdvCoefficients {
    pub c0: f64,
    pub c2: f64,
    pub n1: f64,
}

/// KdV coefficients from the long-wave expansion `c(k) ≈ c0 − c2 k²`.
/// Surface tension is ignored.
pub fn kdv_coefficients(params: &PhysicalParams) -> KdvCoefficients {
    let (g, h0, omega) = (params.g, params.h0, params.omega);
    let root = (g * h0 + 0.25 * omega * omega * h0 * h0).sqrt();
    KdvCoefficients {
        c0: 0.5 * omega * h0 + root,
        c2: h0 * h0 / 6.0 * (omega * h0 + (g * h0 + 0.5 * omega * omega * h0 * h0) / root),
        n1: (3.0 * g + omega * omega * h0) / (2.0 * root),
    }
}

/// Vorticity threshold above which a critical layer (`c = −ω y` inside the
/// fluid) appears: `g tanh(k h0) / (k h0² − h0 tanh(k h0))`.
pub fn critical_layer_threshold(k: f64, params: &PhysicalParams) -> Result<f64> {
    check_wavenumber(k)?;
    let h0 = params.h0;
    let x = k * h0;
    // x − tanh x, by series where it cancels.
    let gap = if x < 1e-2 {
        let x2 = x * x;
        x * x2 * (1.0 / 3.0 - x2 * (2.0 / 15.0 - x2 * 17.0 / 315.0))
    } else {
        x - x.tanh()
    };
    Ok(params.g * x.tanh() / (h0 * gap))
}

/// Whether the wave of wavenumber `k` has a critical layer.
pub fn critical_layer_test(k: f64, params: &PhysicalParams) -> Result<bool> {
    let threshold = critical_layer_threshold(k, params)?;
    Ok(params.omega * params.omega > threshold)
}

/// Velocity, excess pressure and surface displacement of the linear wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearField {
    pub u: f64,
    pub v: f64,
    pub p_excess: f64,
    pub eta: f64,
}

/// Evaluate the explicit linear wave with unit surface amplitude,
/// `η = cos(k(x − c t))`, at a point `(x, y)` of the fluid.
pub fn linear_field(x: f64, y: f64, t: f64, k: f64, params: &PhysicalParams, branch: Branch) -> Result<LinearField> {
    check_wavenumber(k)?;
    if params.tension != 0.0 {
        return Err(Error::Unsupported(
            "linear velocity and pressure fields are only available without surface tension".into(),
        ));
    }
    let h0 = params.h0;
    if !(y >= -h0 && y <= 0.0) {
        return Err(Error::domain(format!("y = {y} outside the fluid [-{h0}, 0]")));
    }
    let c = phase_speed(k, params, branch)?;
    let phase = k * (x - c * t);
    let (sin, cos) = phase.sin_cos();
    let sinh_depth = (k * h0).sinh();
    let kz = k * (h0 + y);
    let (ch, sh) = (kz.cosh() / sinh_depth, kz.sinh() / sinh_depth);
    Ok(LinearField {
        u: cos * c * k * ch,
        v: sin * c * k * sh,
        p_excess: cos * ((c + params.omega * y) * c * k * ch - params.omega * c * sh),
        eta: cos,
    })
}
