//! Simple waves of the vorticity-modified shallow water equations
//!
//! ```text
//! h_t + ω h0 h_x + (u h)_x − ω h h_x = 0
//! u_t + ω h0 u_x + g h_x + u u_x = 0
//! ```
//!
//! solved by characteristics, with exact breaking times.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{brent, golden_section_min, CubicSpline};
use crate::params::PhysicalParams;

/// Shape of the initial depth perturbation, `f(s) = h0 + shape(s)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileShape {
    /// `a exp(−((s − s0)/w)²)`
    GaussianBump { a: f64, s0: f64, width: f64 },
    /// `(a/2)(1 + tanh((s − s0)/w))`
    TanhFront { a: f64, s0: f64, width: f64 },
    /// `a (1 + cos(π (s − s0)/w))/2` on `|s − s0| < w`, zero elsewhere.
    CosineBump { a: f64, s0: f64, width: f64 },
    /// Natural cubic spline through tabulated `(s, shape)` nodes.
    Tabulated(CubicSpline),
}

/// Initial depth profile for the simple-wave solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationProfile {
    shape: ProfileShape,
}

fn check_shape_params(a: f64, s0: f64, width: f64) -> Result<()> {
    if !(a.is_finite() && s0.is_finite() && width.is_finite()) || width <= 0.0 {
        return Err(Error::domain(format!(
            "profile needs finite amplitude/center and positive width (a = {a}, s0 = {s0}, width = {width})"
        )));
    }
    Ok(())
}

impl ElevationProfile {
    pub fn gaussian(a: f64, s0: f64, width: f64) -> Result<Self> {
        check_shape_params(a, s0, width)?;
        Ok(Self {
            shape: ProfileShape::GaussianBump { a, s0, width },
        })
    }

    pub fn tanh_front(a: f64, s0: f64, width: f64) -> Result<Self> {
        check_shape_params(a, s0, width)?;
        Ok(Self {
            shape: ProfileShape::TanhFront { a, s0, width },
        })
    }

    pub fn cosine_bump(a: f64, s0: f64, width: f64) -> Result<Self> {
        check_shape_params(a, s0, width)?;
        Ok(Self {
            shape: ProfileShape::CosineBump { a, s0, width },
        })
    }

    pub fn tabulated(s: Vec<f64>, shape: Vec<f64>) -> Result<Self> {
        Ok(Self {
            shape: ProfileShape::Tabulated(CubicSpline::natural(s, shape)?),
        })
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    /// Perturbation and its derivative at `s`.
    pub fn shape_at(&self, s: f64) -> (f64, f64) {
        match &self.shape {
            ProfileShape::GaussianBump { a, s0, width } => {
                let z = (s - s0) / width;
                let e = a * (-z * z).exp();
                (e, -2.0 * z / width * e)
            }
            ProfileShape::TanhFront { a, s0, width } => {
                let th = ((s - s0) / width).tanh();
                (0.5 * a * (1.0 + th), 0.5 * a / width * (1.0 - th * th))
            }
            ProfileShape::CosineBump { a, s0, width } => {
                let z = (s - s0) / width;
                if z.abs() >= 1.0 {
                    (0.0, 0.0)
                } else {
                    let arg = std::f64::consts::PI * z;
                    (
                        0.5 * a * (1.0 + arg.cos()),
                        -0.5 * a * std::f64::consts::PI / width * arg.sin(),
                    )
                }
            }
            ProfileShape::Tabulated(spline) => spline.eval(s),
        }
    }

    /// `(f(s), f′(s))`.
    pub fn depth(&self, s: f64, params: &PhysicalParams) -> (f64, f64) {
        let (v, d) = self.shape_at(s);
        (params.h0 + v, d)
    }

    fn amplitude_scale(&self) -> f64 {
        match &self.shape {
            ProfileShape::GaussianBump { a, .. }
            | ProfileShape::TanhFront { a, .. }
            | ProfileShape::CosineBump { a, .. } => a.abs(),
            ProfileShape::Tabulated(spline) => spline.nodes().1.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        }
    }

    /// Interval outside which `f′` is negligible (below `1e−12·|a|` for the
    /// analytic kinds).
    pub fn support(&self) -> (f64, f64) {
        const TOL: f64 = 1e-12;
        match &self.shape {
            ProfileShape::GaussianBump { s0, width, .. } => {
                let r = width * (-(TOL.ln())).sqrt() + width;
                (s0 - r, s0 + r)
            }
            ProfileShape::TanhFront { s0, width, .. } => {
                // sech²(z) < 4e^{−2|z|}
                let r = width * 0.5 * (4.0 / TOL).ln();
                (s0 - r, s0 + r)
            }
            ProfileShape::CosineBump { s0, width, .. } => (s0 - width, s0 + width),
            ProfileShape::Tabulated(spline) => spline.range(),
        }
    }

    /// Smallest and largest depth attained by the profile.
    pub fn depth_range(&self, params: &PhysicalParams) -> (f64, f64) {
        match &self.shape {
            ProfileShape::GaussianBump { a, .. }
            | ProfileShape::TanhFront { a, .. }
            | ProfileShape::CosineBump { a, .. } => (params.h0 + a.min(0.0), params.h0 + a.max(0.0)),
            ProfileShape::Tabulated(_) => {
                let (lo, hi) = self.support();
                let n = 8192;
                (0..=n).fold((f64::INFINITY, f64::NEG_INFINITY), |(mn, mx), i| {
                    let s = lo + (hi - lo) * i as f64 / n as f64;
                    let f = self.depth(s, params).0;
                    (mn.min(f), mx.max(f))
                })
            }
        }
    }

    /// Checks `f > 0` everywhere for the given baseline.
    pub fn validate(&self, params: &PhysicalParams) -> Result<()> {
        params.validate()?;
        let (fmin, _) = self.depth_range(params);
        if !(fmin > 0.0) {
            return Err(Error::domain(format!(
                "profile depth must stay positive; minimum depth is {fmin}"
            )));
        }
        Ok(())
    }
}

/// `sqrt(g h + ω² h²/4)`
fn root_term(h: f64, p: &PhysicalParams) -> f64 {
    (p.g * h + 0.25 * p.omega * p.omega * h * h).sqrt()
}

fn small_omega(p: &PhysicalParams) -> bool {
    p.omega.abs() < 1e-6 * (p.g / p.h0).sqrt()
}

/// `(2g/ω) asinh(ω √h / (2√g))`, which equals `(g/ω) log(2g + ω²h + 2ω·root)`
/// up to an `h`-independent constant.
fn log_term(h: f64, p: &PhysicalParams) -> f64 {
    if small_omega(p) {
        (p.g * h).sqrt() - p.omega * p.omega * h.powf(1.5) / (24.0 * p.g.sqrt())
    } else {
        2.0 * p.g / p.omega * (p.omega * h.sqrt() / (2.0 * p.g.sqrt())).asinh()
    }
}

/// Riemann function `G(h)`; the invariants are `u − ωh/2 ± G(h)`.
pub fn riemann_function(h: f64, params: &PhysicalParams) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain(format!("depth must be positive, got {h}")));
    }
    Ok(root_term(h, params) + log_term(h, params))
}

/// `(ΔR⁺, ΔR⁻)`: change of the depth part of the two Riemann invariants
/// between `h_ref` and `h`.
pub fn riemann_shift(h: f64, h_ref: f64, params: &PhysicalParams) -> Result<(f64, f64)> {
    params.validate()?;
    let d = riemann_function(h, params)? - riemann_function(h_ref, params)?;
    Ok((d, -d))
}

/// Horizontal velocity carried by the right-moving simple wave at depth `f`.
pub fn simple_wave_velocity(f: f64, params: &PhysicalParams) -> Result<f64> {
    let h0 = params.h0;
    Ok(0.5 * params.omega * (f - h0) + riemann_function(f, params)? - riemann_function(h0, params)?)
}

/// Speed of the characteristic leaving a point of depth `f`.
pub fn characteristic_speed(f: f64, params: &PhysicalParams) -> Result<f64> {
    let h0 = params.h0;
    Ok(0.5 * params.omega * h0 + root_term(f, params) + riemann_function(f, params)? - riemann_function(h0, params)?)
}

/// `dλ/df = (3g + ω²f) / (2 sqrt(gf + ω²f²/4))`
fn speed_slope(f: f64, p: &PhysicalParams) -> f64 {
    (3.0 * p.g + p.omega * p.omega * f) / (2.0 * root_term(f, p))
}

/// Position at time `t` of the characteristic with label `s`.
pub fn characteristic_position(s: f64, t: f64, profile: &ElevationProfile, params: &PhysicalParams) -> Result<f64> {
    let (f, _) = profile.depth(s, params);
    Ok(s + t * characteristic_speed(f, params)?)
}

/// `∂x/∂s (t; s) = 1 + t f′(s) (3g + ω²f) / (2 sqrt(gf + ω²f²/4))`.
pub fn characteristic_jacobian(s: f64, t: f64, profile: &ElevationProfile, params: &PhysicalParams) -> f64 {
    let (f, fp) = profile.depth(s, params);
    1.0 + t * fp * speed_slope(f, params)
}

/// Breaking time of the right-moving simple wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakingReport {
    pub breaks: bool,
    /// Infinite when the wave does not break.
    pub t_star: f64,
    /// Label of the first characteristic to cross its neighbours.
    pub s_star: f64,
    /// Largest compression rate `−f′(3g + ω²f)/(2 sqrt(gf + ω²f²/4))`; `t_star` is its reciprocal.
    pub slope_factor: f64,
}

/// Number of samples used to locate the steepest compression.
pub const BREAKING_SAMPLES: usize = 8192;

pub fn breaking_time(profile: &ElevationProfile, params: &PhysicalParams) -> Result<BreakingReport> {
    profile.validate(params)?;
    let (lo, hi) = profile.support();
    let rate = |s: f64| {
        let (f, fp) = profile.depth(s, params);
        -fp * speed_slope(f, params)
    };
    let n = BREAKING_SAMPLES;
    let ds = (hi - lo) / n as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    let mut min_slope = f64::INFINITY;
    for i in 0..=n {
        let s = lo + ds * i as f64;
        min_slope = min_slope.min(profile.depth(s, params).1);
        let r = rate(s);
        if r > best.1 {
            best = (i, r);
        }
    }
    let negligible = 1e-14 * profile.amplitude_scale().max(f64::MIN_POSITIVE);
    if !(min_slope < -negligible) {
        return Ok(BreakingReport {
            breaks: false,
            t_star: f64::INFINITY,
            s_star: f64::NAN,
            slope_factor: best.1.max(0.0),
        });
    }
    let i = best.0;
    let a = lo + ds * i.saturating_sub(1) as f64;
    let b = lo + ds * (i + 1).min(n) as f64;
    let (s_ref, neg) = golden_section_min(|s| -rate(s), a, b, 1e-10);
    let (s_star, r) = if -neg >= best.1 {
        (s_ref, -neg)
    } else {
        (lo + ds * i as f64, best.1)
    };
    Ok(BreakingReport {
        breaks: true,
        t_star: 1.0 / r,
        s_star,
        slope_factor: r,
    })
}

/// The simple-wave solution `(h, u)(x, t)` valid up to the breaking time.
#[derive(Debug, Clone)]
pub struct SimpleWaveField {
    profile: ElevationProfile,
    params: PhysicalParams,
    breaking: BreakingReport,
    speed_range: (f64, f64),
}

pub fn simple_wave(profile: &ElevationProfile, params: &PhysicalParams) -> Result<SimpleWaveField> {
    let breaking = breaking_time(profile, params)?;
    let (fmin, fmax) = profile.depth_range(params);
    let speed_range = (characteristic_speed(fmin, params)?, characteristic_speed(fmax, params)?);
    Ok(SimpleWaveField {
        profile: profile.clone(),
        params: *params,
        breaking,
        speed_range,
    })
}

impl SimpleWaveField {
    pub fn breaking(&self) -> &BreakingReport {
        &self.breaking
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn profile(&self) -> &ElevationProfile {
        &self.profile
    }

    /// Label `s` of the characteristic through `(x, t)`.
    pub fn label(&self, x: f64, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !x.is_finite() {
            return Err(Error::domain(format!("need finite x and t ≥ 0, got ({x}, {t})")));
        }
        if t >= self.breaking.t_star {
            return Err(Error::MultivaluedSolution {
                t,
                t_star: self.breaking.t_star,
            });
        }
        if t == 0.0 {
            return Ok(x);
        }
        let (cmin, cmax) = self.speed_range;
        let pad = 1e-9 * (1.0 + x.abs() + t * cmax.abs().max(cmin.abs()));
        let lo = x - cmax * t - pad;
        let hi = x - cmin * t + pad;
        let tol = 1e-12 * (1.0 + x.abs());
        brent(
            |s| {
                let (f, _) = self.profile.depth(s, &self.params);
                s + t * characteristic_speed(f, &self.params).unwrap_or(f64::NAN) - x
            },
            lo,
            hi,
            tol,
        )
        .map_err(|e| Error::Numerical(format!("characteristic foot at (x = {x}, t = {t}): {e}")))
    }

    /// Depth and velocity at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let s = self.label(x, t)?;
        let (f, _) = self.profile.depth(s, &self.params);
        Ok((f, simple_wave_velocity(f, &self.params)?))
    }
}
