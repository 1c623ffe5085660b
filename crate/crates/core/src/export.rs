//! CSV and JSON serialization of results.
//!
//! Numbers are written like C's `%.11e` (12 significant digits, signed
//! two-digit exponent), fields are separated by `,` and lines end in `\n`.

use std::fmt::Write;

use serde_json::json;

use crate::spectral::Trajectory;
use crate::stability::{ResonancePoint, StabilityRecord};
use crate::traveling::TravelingWave;

/// `x` in the form `d.ddddddddddde±XX`.
pub fn format_sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn row(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

pub const SWEEP_HEADER: &str = "omega,k,T,i1,i2,i3,growth_rate,verdict,renorm_vorticity";
pub const RESONANCE_HEADER: &str = "curve,T,k,k_sqrtT";
pub const TRAJECTORY_HEADER: &str = "t,x,eta,u";
pub const DIAGNOSTICS_HEADER: &str = "t,mass,momentum,energy,min_slope,sup_eta";
pub const WAVE_HEADER: &str = "m,eta_m,u_m";

pub fn sweep_csv(records: &[StabilityRecord]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for r in records {
        let verdict = if r.error.is_some() { "ERROR" } else { r.verdict.label() };
        let mut f: Vec<String> = [r.omega, r.k, r.tension, r.i1, r.i2, r.i3, r.growth_rate]
            .iter()
            .map(|&v| format_sci(v))
            .collect();
        f.push(verdict.into());
        f.push(format_sci(r.renorm_vorticity));
        row(&mut out, &f);
    }
    out
}

pub fn resonance_csv(points: &[ResonancePoint]) -> String {
    let mut out = format!("{RESONANCE_HEADER}\n");
    for p in points {
        row(
            &mut out,
            &[
                p.curve.label().into(),
                format_sci(p.tension),
                format_sci(p.k),
                format_sci(p.k_sqrt_t),
            ],
        );
    }
    out
}

/// Long format: one line per snapshot and grid node.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = format!("{TRAJECTORY_HEADER}\n");
    for snap in &traj.snapshots {
        let n = snap.state.eta.len();
        let dx = traj.length / n as f64;
        let t = format_sci(snap.t);
        for (j, (eta, u)) in snap.state.eta.iter().zip(&snap.state.u).enumerate() {
            let _ = writeln!(
                out,
                "{t},{},{},{}",
                format_sci(j as f64 * dx),
                format_sci(*eta),
                format_sci(*u)
            );
        }
    }
    out
}

/// Per-snapshot diagnostics; `energy` is `nan` for models without one.
pub fn diagnostics_csv(traj: &Trajectory) -> String {
    let mut out = format!("{DIAGNOSTICS_HEADER}\n");
    for snap in &traj.snapshots {
        let d = &snap.diagnostics;
        let f: Vec<String> = [
            snap.t,
            d.mass,
            d.momentum,
            d.energy.unwrap_or(f64::NAN),
            d.min_slope,
            d.sup_eta,
        ]
        .iter()
        .map(|&v| format_sci(v))
        .collect();
        row(&mut out, &f);
    }
    out
}

/// Cosine coefficients of `η` and `u`.
pub fn wave_csv(wave: &TravelingWave) -> String {
    let mut out = format!("{WAVE_HEADER}\n");
    for (m, (e, u)) in wave.eta.iter().zip(&wave.u).enumerate() {
        let _ = writeln!(out, "{m},{},{}", format_sci(*e), format_sci(*u));
    }
    out
}

pub fn wave_header(wave: &TravelingWave) -> serde_json::Value {
    json!({
        "k": wave.k,
        "a": wave.a,
        "c": wave.c,
        "omega": wave.params.omega,
        "T": wave.params.tension,
        "M": wave.truncation(),
    })
}
