use serde::{Deserialize, Serialize};

use super::evolve::Trajectory;
use crate::error::{Error, Result};

/// Conserved-quantity series of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conserved {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub momentum: Vec<f64>,
    /// KdV only.
    pub energy: Option<Vec<f64>>,
}

impl Conserved {
    /// Largest relative drift `|q(t) − q(0)| / |q(0)|` of a series.
    pub fn relative_drift(series: &[f64]) -> f64 {
        let q0 = series.first().copied().unwrap_or(0.0);
        let scale = if q0 == 0.0 { 1.0 } else { q0.abs() };
        series.iter().fold(0.0, |m, q| m.max((q - q0).abs() / scale))
    }
}

/// Mass `∫η`, momentum `∫η²` and (KdV) energy
/// `∫(c0 η²/2 − c2 η_x²/2 + n1 η³/6)` at every snapshot.
pub fn conserved_diagnostics(traj: &Trajectory) -> Conserved {
    let d: Vec<_> = traj.snapshots.iter().map(|s| s.diagnostics).collect();
    let energy = d.iter().map(|d| d.energy).collect::<Option<Vec<f64>>>();
    Conserved {
        times: traj.times(),
        mass: d.iter().map(|d| d.mass).collect(),
        momentum: d.iter().map(|d| d.momentum).collect(),
        energy,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakingThresholds {
    /// Required growth of `−min η_x` relative to its initial value.
    pub slope_growth: f64,
    /// Allowed growth of `sup |η|` relative to its initial value.
    pub amplitude_bound: f64,
}

impl Default for BreakingThresholds {
    fn default() -> Self {
        Self {
            slope_growth: 10.0,
            amplitude_bound: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakingMonitor {
    pub times: Vec<f64>,
    pub min_slope: Vec<f64>,
    pub sup_eta: Vec<f64>,
    pub breaking_flag: bool,
    /// First snapshot time at which the flag condition held.
    pub flag_time: Option<f64>,
}

impl BreakingMonitor {
    /// Largest ratio `min_slope(t) / min_slope(0)` over the run (0 when the
    /// initial slope is not negative).
    pub fn max_slope_ratio(&self) -> f64 {
        let s0 = self.min_slope[0];
        if !(s0 < 0.0) {
            return 0.0;
        }
        self.min_slope.iter().fold(0.0, |m, s| m.max(s / s0))
    }
}

/// Flags breaking when the steepest negative slope grows by
/// `slope_growth` while the amplitude stays within `amplitude_bound` of
/// its initial value at every snapshot up to that point.
pub fn breaking_monitor(traj: &Trajectory, thresholds: BreakingThresholds) -> Result<BreakingMonitor> {
    if traj.snapshots.len() < 3 {
        return Err(Error::domain(format!(
            "breaking monitor needs at least 3 snapshots, got {}",
            traj.snapshots.len()
        )));
    }
    let times = traj.times();
    let min_slope: Vec<f64> = traj.snapshots.iter().map(|s| s.diagnostics.min_slope).collect();
    let sup_eta: Vec<f64> = traj.snapshots.iter().map(|s| s.diagnostics.sup_eta).collect();
    let (s0, a0) = (min_slope[0], sup_eta[0]);
    let mut flag_time = None;
    if s0 < 0.0 {
        for i in 0..times.len() {
            if sup_eta[i] > thresholds.amplitude_bound * a0 {
                break;
            }
            if min_slope[i] <= thresholds.slope_growth * s0 {
                flag_time = Some(times[i]);
                break;
            }
        }
    }
    Ok(BreakingMonitor {
        times,
        min_slope,
        sup_eta,
        breaking_flag: flag_time.is_some(),
        flag_time,
    })
}
