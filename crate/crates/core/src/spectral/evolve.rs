use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SpectralGrid;
use crate::dispersion::{kdv_coefficients, squared_symbol, whitham_symbol};
use crate::error::{Error, Result};
use crate::params::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Kdv,
    Whitham,
    WhithamCapillary,
    Fdsw,
    FdswCapillary,
}

impl Model {
    pub fn is_bidirectional(self) -> bool {
        matches!(self, Model::Fdsw | Model::FdswCapillary)
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Kdv => "kdv",
            Model::Whitham => "whitham",
            Model::WhithamCapillary => "whitham_capillary",
            Model::Fdsw => "fdsw",
            Model::FdswCapillary => "fdsw_capillary",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "kdv" => Ok(Model::Kdv),
            "whitham" => Ok(Model::Whitham),
            "whitham_capillary" => Ok(Model::WhithamCapillary),
            "fdsw" => Ok(Model::Fdsw),
            "fdsw_capillary" => Ok(Model::FdswCapillary),
            other => Err(Error::InvalidParams(format!("unknown model '{other}'"))),
        }
    }

    /// Parameters actually seen by the model: the non-capillary variants
    /// drop surface tension.
    fn effective_params(self, params: &PhysicalParams) -> PhysicalParams {
        match self {
            Model::WhithamCapillary | Model::FdswCapillary => *params,
            _ => params.without_tension(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub model: Model,
    pub dt: f64,
    pub t_max: f64,
    #[serde(default = "default_true")]
    pub dealias: bool,
    /// Steps between stored snapshots.
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
}

fn default_true() -> bool {
    true
}

fn default_stride() -> usize {
    100
}

impl EvolutionConfig {
    pub fn new(model: Model, dt: f64, t_max: f64) -> Self {
        Self {
            model,
            dt,
            t_max,
            dealias: true,
            snapshot_stride: default_stride(),
        }
    }

    pub fn with_stride(self, snapshot_stride: usize) -> Self {
        Self {
            snapshot_stride,
            ..self
        }
    }

    pub fn with_dealias(self, dealias: bool) -> Self {
        Self { dealias, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParams(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max >= self.dt) || !self.t_max.is_finite() {
            return Err(Error::InvalidParams(format!(
                "t_max must be at least dt (t_max = {}, dt = {})",
                self.t_max, self.dt
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidParams("snapshot_stride must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of steps; the step is shortened slightly so the run ends
    /// exactly at `t_max`.
    pub fn steps(&self) -> (usize, f64) {
        let n = (self.t_max / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, self.t_max / n as f64)
    }
}

/// Surface displacement and (for the bidirectional models) velocity samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveState {
    pub eta: Vec<f64>,
    pub u: Vec<f64>,
}

impl WaveState {
    pub fn new(eta: Vec<f64>, u: Vec<f64>) -> Self {
        Self { eta, u }
    }

    /// State with zero velocity.
    pub fn from_eta(eta: Vec<f64>) -> Self {
        let u = vec![0.0; eta.len()];
        Self { eta, u }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_eta(vec![0.0; n])
    }

    pub fn sample(grid: &SpectralGrid, eta: impl Fn(f64) -> f64, u: impl Fn(f64) -> f64) -> Self {
        let x = grid.nodes();
        Self {
            eta: x.iter().map(|&x| eta(x)).collect(),
            u: x.iter().map(|&x| u(x)).collect(),
        }
    }

    fn is_finite(&self) -> bool {
        self.eta.iter().chain(self.u.iter()).all(|v| v.is_finite())
    }
}

/// Per-snapshot diagnostics; `energy` is only defined for KdV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotDiagnostics {
    pub mass: f64,
    pub momentum: f64,
    pub energy: Option<f64>,
    pub min_slope: f64,
    pub sup_eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub state: WaveState,
    pub diagnostics: SnapshotDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// A non-finite value appeared during the step ending at `t`; the
    /// trajectory stops at the last finite snapshot.
    BlowupDetected {
        t: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub model: Model,
    pub params: PhysicalParams,
    pub length: f64,
    pub snapshots: Vec<Snapshot>,
    pub status: RunStatus,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots
            .last()
            .expect("trajectory always holds the initial state")
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self.status, RunStatus::BlowupDetected { .. })
    }
}

/// Fourier-space right-hand side and linear propagator for one model.
struct Operator {
    model: Model,
    /// `i k` with the Nyquist bin removed.
    ik: Vec<Complex64>,
    /// Multiplier applied to `η̂` in the linear part (`c(k)` or `c²(k)`).
    symbol: Vec<f64>,
    mask: Option<Vec<f64>>,
    /// Nonlinear coefficient of `η η_x` for the scalar models.
    n1: f64,
    omega: f64,
    /// Linear generator of KdV, `−i (c0 k − c2 k³)`.
    kdv_linear: Vec<Complex64>,
    grid: SpectralGrid,
}

impl Operator {
    fn new(grid: &SpectralGrid, config: &EvolutionConfig, params: &PhysicalParams) -> Self {
        let p = config.model.effective_params(params);
        let k = grid.odd_wavenumbers();
        let kabs: Vec<f64> = grid.wavenumbers().iter().map(|k| k.abs()).collect();
        let coeffs = kdv_coefficients(&p);
        let symbol = match config.model {
            Model::Kdv => vec![0.0; k.len()],
            Model::Whitham | Model::WhithamCapillary => kabs.iter().map(|&k| whitham_symbol(k, &p)).collect(),
            Model::Fdsw | Model::FdswCapillary => kabs.iter().map(|&k| squared_symbol(k, &p)).collect(),
        };
        let kdv_linear = k
            .iter()
            .map(|&k| Complex64::new(0.0, -(coeffs.c0 * k - coeffs.c2 * k * k * k)))
            .collect();
        Self {
            model: config.model,
            ik: k.iter().map(|&k| Complex64::new(0.0, k)).collect(),
            symbol,
            mask: config.dealias.then(|| grid.dealias_mask()),
            n1: coeffs.n1,
            omega: p.omega,
            kdv_linear,
            grid: grid.clone(),
        }
    }

    /// Spectrum of the product of two fields given by their spectra.
    fn product(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let (fa, fb) = match &self.mask {
            Some(mask) => (masked(a, mask), masked(b, mask)),
            None => (a.to_vec(), b.to_vec()),
        };
        let pa = self.grid.ifft_real(&fa);
        let pb = self.grid.ifft_real(&fb);
        let prod: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
        let mut spec = self.grid.fft(&prod);
        if let Some(mask) = &self.mask {
            for (z, m) in spec.iter_mut().zip(mask) {
                *z *= m;
            }
        }
        spec
    }

    /// Nonlinear part of the scalar models: `−n1 ∂x(η²/2)`.
    fn scalar_nonlinear(&self, eta: &[Complex64]) -> Vec<Complex64> {
        let sq = self.product(eta, eta);
        sq.iter().zip(&self.ik).map(|(s, ik)| -0.5 * self.n1 * ik * s).collect()
    }

    /// Full right-hand side for the RK4 models.
    fn rhs(&self, eta: &[Complex64], u: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        match self.model {
            Model::Kdv => (self.scalar_nonlinear(eta), vec![Complex64::new(0.0, 0.0); eta.len()]),
            Model::Whitham | Model::WhithamCapillary => {
                let mut d = self.scalar_nonlinear(eta);
                for ((d, e), (ik, c)) in d.iter_mut().zip(eta).zip(self.ik.iter().zip(&self.symbol)) {
                    *d -= ik * c * e;
                }
                (d, vec![Complex64::new(0.0, 0.0); eta.len()])
            }
            Model::Fdsw | Model::FdswCapillary => {
                let ue = self.product(u, eta);
                let ee = self.product(eta, eta);
                let uu = self.product(u, u);
                let mut deta = Vec::with_capacity(eta.len());
                let mut du = Vec::with_capacity(eta.len());
                for j in 0..eta.len() {
                    let ik = self.ik[j];
                    let c2 = self.symbol[j];
                    deta.push(-ik * (u[j] + ue[j]) + self.omega * 0.5 * ik * ee[j]);
                    du.push(-ik * (self.omega * c2 * u[j] + c2 * eta[j]) - 0.5 * ik * uu[j]);
                }
                (deta, du)
            }
        }
    }

    fn max_linear_speed(&self) -> f64 {
        match self.model {
            Model::Kdv => self
                .kdv_linear
                .iter()
                .zip(&self.ik)
                .filter(|(_, ik)| ik.im != 0.0)
                .map(|(l, ik)| (l.im / ik.im).abs())
                .fold(0.0, f64::max),
            Model::Whitham | Model::WhithamCapillary => self.symbol.iter().fold(0.0, |m, c| m.max(c.abs())),
            Model::Fdsw | Model::FdswCapillary => self
                .symbol
                .iter()
                .map(|&c2| 0.5 * self.omega.abs() * c2 + (c2 + 0.25 * self.omega * self.omega * c2 * c2).sqrt())
                .fold(0.0, f64::max),
        }
    }
}

fn masked(a: &[Complex64], mask: &[f64]) -> Vec<Complex64> {
    a.iter().zip(mask).map(|(z, m)| z * m).collect()
}

fn axpy(y: &[Complex64], a: f64, x: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

fn diagnostics(grid: &SpectralGrid, model: Model, state: &WaveState, params: &PhysicalParams) -> SnapshotDiagnostics {
    let eta = &state.eta;
    let slope = grid.derivative(eta);
    let mass = grid.integrate(eta);
    let momentum = grid.integrate(&eta.iter().map(|e| e * e).collect::<Vec<_>>());
    let energy = (model == Model::Kdv).then(|| {
        let c = kdv_coefficients(params);
        let density: Vec<f64> = eta
            .iter()
            .zip(&slope)
            .map(|(e, s)| 0.5 * c.c0 * e * e - 0.5 * c.c2 * s * s + c.n1 * e * e * e / 6.0)
            .collect();
        grid.integrate(&density)
    });
    SnapshotDiagnostics {
        mass,
        momentum,
        energy,
        min_slope: slope.iter().cloned().fold(f64::INFINITY, f64::min),
        sup_eta: eta.iter().fold(0.0, |m, e| m.max(e.abs())),
    }
}

/// Integrates `state0` to `config.t_max`, storing every
/// `config.snapshot_stride`-th step plus the final state.
pub fn evolve(
    state0: &WaveState,
    grid: &SpectralGrid,
    config: &EvolutionConfig,
    params: &PhysicalParams,
) -> Result<Trajectory> {
    config.validate()?;
    params.validate()?;
    if config.model.is_bidirectional() {
        params.require_normalized("the full-dispersion shallow water model")?;
    }
    let n = grid.len();
    if state0.eta.len() != n {
        return Err(Error::domain(format!(
            "state has {} samples but the grid has {n}",
            state0.eta.len()
        )));
    }
    let u0 = if state0.u.is_empty() {
        vec![0.0; n]
    } else if state0.u.len() == n {
        state0.u.clone()
    } else {
        return Err(Error::domain(format!(
            "velocity has {} samples but the grid has {n}",
            state0.u.len()
        )));
    };
    if !config.model.is_bidirectional() && u0.iter().any(|&v| v != 0.0) {
        warn!(
            "{} is a scalar model; the velocity field is ignored",
            config.model.name()
        );
    }
    if state0.eta.iter().any(|&e| params.h0 + e <= 0.0) {
        warn!("initial depth h0 + eta is not positive everywhere");
    }

    let model_params = config.model.effective_params(params);
    let op = Operator::new(grid, config, params);
    let (steps, dt) = config.steps();
    let sup0 = state0.eta.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let speed = op.max_linear_speed() + op.n1.max(1.0) * sup0 + u0.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if config.model != Model::Kdv && dt > 0.5 * grid.dx() / speed.max(f64::MIN_POSITIVE) {
        warn!(
            "time step {dt:e} exceeds the CFL heuristic 0.5·dx/max speed = {:e}",
            0.5 * grid.dx() / speed
        );
    }

    let mut eta = grid.fft(&state0.eta);
    let mut u = if config.model.is_bidirectional() {
        grid.fft(&u0)
    } else {
        vec![Complex64::new(0.0, 0.0); n]
    };
    let scalar_u = vec![0.0; n];
    let make_state = |eta: &[Complex64], u: &[Complex64]| -> WaveState {
        let eta = grid.ifft_real(eta);
        let u = if config.model.is_bidirectional() {
            grid.ifft_real(u)
        } else {
            scalar_u.clone()
        };
        WaveState { eta, u }
    };

    let initial = WaveState {
        eta: state0.eta.clone(),
        u: if config.model.is_bidirectional() {
            u0
        } else {
            scalar_u.clone()
        },
    };
    let mut snapshots = vec![Snapshot {
        t: 0.0,
        diagnostics: diagnostics(grid, config.model, &initial, &model_params),
        state: initial,
    }];

    // Integrating factors for KdV: exp(L dt/2) and exp(L dt).
    let (e_half, e_full): (Vec<Complex64>, Vec<Complex64>) = op
        .kdv_linear
        .iter()
        .map(|l| ((l * 0.5 * dt).exp(), (l * dt).exp()))
        .unzip();

    let mut status = RunStatus::Completed;
    for step in 1..=steps {
        if config.model == Model::Kdv {
            let a = op.scalar_nonlinear(&eta);
            let arg: Vec<Complex64> = eta
                .iter()
                .zip(&a)
                .zip(&e_half)
                .map(|((v, a), e)| e * (v + 0.5 * dt * a))
                .collect();
            let b = op.scalar_nonlinear(&arg);
            let arg: Vec<Complex64> = eta
                .iter()
                .zip(&b)
                .zip(&e_half)
                .map(|((v, b), e)| e * v + 0.5 * dt * b)
                .collect();
            let c = op.scalar_nonlinear(&arg);
            let arg: Vec<Complex64> = (0..n).map(|j| e_full[j] * eta[j] + dt * e_half[j] * c[j]).collect();
            let d = op.scalar_nonlinear(&arg);
            for j in 0..n {
                eta[j] = e_full[j] * eta[j] + dt / 6.0 * (e_full[j] * a[j] + 2.0 * e_half[j] * (b[j] + c[j]) + d[j]);
            }
        } else {
            let (k1e, k1u) = op.rhs(&eta, &u);
            let (k2e, k2u) = op.rhs(&axpy(&eta, 0.5 * dt, &k1e), &axpy(&u, 0.5 * dt, &k1u));
            let (k3e, k3u) = op.rhs(&axpy(&eta, 0.5 * dt, &k2e), &axpy(&u, 0.5 * dt, &k2u));
            let (k4e, k4u) = op.rhs(&axpy(&eta, dt, &k3e), &axpy(&u, dt, &k3u));
            for j in 0..n {
                eta[j] += dt / 6.0 * (k1e[j] + 2.0 * k2e[j] + 2.0 * k3e[j] + k4e[j]);
                u[j] += dt / 6.0 * (k1u[j] + 2.0 * k2u[j] + 2.0 * k3u[j] + k4u[j]);
            }
        }
        let finite = eta.iter().chain(u.iter()).all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            let t = step as f64 * dt;
            warn!("non-finite values at t = {t}; trajectory truncated");
            status = RunStatus::BlowupDetected { t };
            break;
        }
        if step % config.snapshot_stride == 0 || step == steps {
            let state = make_state(&eta, &u);
            if !state.is_finite() {
                status = RunStatus::BlowupDetected { t: step as f64 * dt };
                break;
            }
            snapshots.push(Snapshot {
                t: step as f64 * dt,
                diagnostics: diagnostics(grid, config.model, &state, &model_params),
                state,
            });
        }
    }

    Ok(Trajectory {
        model: config.model,
        params: *params,
        length: grid.length(),
        snapshots,
        status,
    })
}
