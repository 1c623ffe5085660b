//! Command-line driver: parses flags and an optional JSON config, runs one
//! computation and writes its outputs plus `manifest.json`.

mod output;
pub mod plot;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::json;

use wavelab::characteristics::{breaking_time, characteristic_speed, simple_wave, ElevationProfile};
use wavelab::dispersion::{group_speed, linear_field, phase_speed};
use wavelab::export::{self, format_sci};
use wavelab::spectral::{
    breaking_monitor, evolve, BreakingThresholds, EvolutionConfig, Model, SpectralGrid, WaveState,
};
use wavelab::stability::{
    classify, critical_wavenumber, resonance_curves, sweep, KcSearch, ResonanceOptions, StabilityProtocol, Verdict,
};
use wavelab::traveling::traveling_wave;
use wavelab::{Branch, PhysicalParams};

pub use output::{EmittedFile, Outputs, RunManifest};
use plot::{emit_plot, PlotData};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the number of sweep threads.
pub const THREADS_ENV: &str = "WAVELAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "wavelab",
    version,
    about = "Shallow-water waves on a constant-vorticity current"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Phase and group speeds of the linear wave
    Dispersion,
    /// Velocity and pressure of the linear wave under the surface
    Field,
    /// Breaking time of a simple wave
    Breaking,
    /// Simple-wave depth and velocity before breaking
    Simplewave,
    /// Pseudospectral evolution of KdV, Whitham or the full-dispersion system
    Evolve,
    /// Small-amplitude periodic traveling wave
    Wave,
    /// Modulational stability verdict at one wavenumber
    Stability,
    /// Critical wavenumber of modulational instability
    Kc,
    /// Stability verdicts on a (T, ω, k) grid
    Sweep,
    /// Resonance curves in the capillary plane
    Resonances,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Field => "field",
            Command::Breaking => "breaking",
            Command::Simplewave => "simplewave",
            Command::Evolve => "evolve",
            Command::Wave => "wave",
            Command::Stability => "stability",
            Command::Kc => "kc",
            Command::Sweep => "sweep",
            Command::Resonances => "resonances",
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
struct Flags {
    /// JSON file with any of the flag values; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    tension: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    g: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    h0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    amp: Option<f64>,
    /// gaussian, tanh, cosine or (evolve only) steep
    #[arg(long, global = true)]
    profile: Option<String>,
    /// kdv, whitham, whitham-capillary, fdsw or fdsw-capillary
    #[arg(long, global = true)]
    model: Option<String>,
    /// Grid size (evolve, simplewave, field)
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    /// Domain length (evolve)
    #[arg(long = "L", global = true, allow_negative_numbers = true)]
    length: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Final or evaluation time
    #[arg(long, global = true, allow_negative_numbers = true)]
    tmax: Option<f64>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Profile width
    #[arg(long, global = true, allow_negative_numbers = true)]
    width: Option<f64>,
    /// Time steps between stored snapshots (evolve)
    #[arg(long, global = true)]
    stride: Option<usize>,
    /// Galerkin truncation of traveling waves
    #[arg(long, global = true)]
    truncation: Option<usize>,
}

/// Run configuration: flag values plus list-valued sweep settings that
/// only a config file can provide.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tension: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tmax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omegas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tensions: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Wavenumbers classified to locate index sign changes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_grid: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    fn apply(&mut self, f: &Flags) {
        macro_rules! take {
            ($($field:ident),*) => {
                $( if let Some(v) = f.$field.clone() { self.$field = Some(v); } )*
            };
        }
        take!(omega, k, tension, g, h0, amp, profile, model, n, length, dt, tmax, out, width, stride, truncation);
    }

    fn params(&mut self) -> Result<PhysicalParams, CliError> {
        let p = PhysicalParams::new(
            *self.g.get_or_insert(1.0),
            *self.h0.get_or_insert(1.0),
            *self.omega.get_or_insert(0.0),
            *self.tension.get_or_insert(0.0),
        )?;
        Ok(p)
    }

    fn require_k(&self) -> Result<f64, CliError> {
        self.k.ok_or_else(|| CliError::Config("--k is required".into()))
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "{m}"),
        }
    }
}

impl From<wavelab::Error> for CliError {
    fn from(e: wavelab::Error) -> Self {
        use wavelab::Error as E;
        match e {
            E::Domain(_) | E::InvalidParams(_) | E::Unsupported(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(format!("i/o: {e}"))
    }
}

fn profile(cfg: &mut RunConfig, center: f64) -> Result<ElevationProfile, CliError> {
    let name = cfg.profile.get_or_insert_with(|| "gaussian".into()).clone();
    let a = *cfg.amp.get_or_insert(0.1);
    let w = *cfg.width.get_or_insert(1.0);
    Ok(match name.as_str() {
        "gaussian" => ElevationProfile::gaussian(a, center, w)?,
        "tanh" => ElevationProfile::tanh_front(a, center, w)?,
        "cosine" => ElevationProfile::cosine_bump(a, center, w)?,
        other => return Err(CliError::Config(format!("unknown profile '{other}'"))),
    })
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
    }
}

fn run(command: Command, cfg: &mut RunConfig, out: &mut Outputs) -> Result<String, CliError> {
    let mut msg = String::new();
    match command {
        Command::Dispersion => {
            let p = cfg.params()?;
            let k = cfg.require_k()?;
            let c = phase_speed(k, &p, Branch::RightMoving)?;
            let report = json!({
                "k": k,
                "c_right": c,
                "c_left": phase_speed(k, &p, Branch::LeftMoving)?,
                "group_right": group_speed(k, &p, Branch::RightMoving)?,
                "group_left": group_speed(k, &p, Branch::LeftMoving)?,
            });
            out.write_json("dispersion.json", &report)?;
            let _ = writeln!(msg, "c={c:.6}");
        }
        Command::Field => {
            let p = cfg.params()?;
            let k = cfg.require_k()?;
            let t = *cfg.tmax.get_or_insert(0.0);
            let n = *cfg.n.get_or_insert(64);
            let rows = 11;
            let mut csv = String::from("x,y,u,v,p_excess,eta\n");
            for j in 0..n {
                let x = 2.0 * std::f64::consts::PI / k * j as f64 / n as f64;
                for r in 0..rows {
                    let y = -p.h0 * (rows - 1 - r) as f64 / (rows - 1) as f64;
                    let f = linear_field(x, y, t, k, &p, Branch::RightMoving)?;
                    let row: Vec<String> = [x, y, f.u, f.v, f.p_excess, f.eta]
                        .iter()
                        .map(|&v| format_sci(v))
                        .collect();
                    csv.push_str(&row.join(","));
                    csv.push('\n');
                }
            }
            out.write("field.csv", csv)?;
            let _ = writeln!(msg, "c={:.6}", phase_speed(k, &p, Branch::RightMoving)?);
        }
        Command::Breaking => {
            let p = cfg.params()?;
            let prof = profile(cfg, 0.0)?;
            let report = breaking_time(&prof, &p)?;
            out.write_json("breaking.json", &report)?;
            if report.breaks {
                let _ = writeln!(msg, "t_star={:.6}", report.t_star);
            } else {
                let _ = writeln!(msg, "t_star=inf");
            }
        }
        Command::Simplewave => {
            let p = cfg.params()?;
            let prof = profile(cfg, 0.0)?;
            let field = simple_wave(&prof, &p)?;
            let t_star = field.breaking().t_star;
            let t = match cfg.tmax {
                Some(t) => t,
                None if t_star.is_finite() => *cfg.tmax.insert(0.5 * t_star),
                None => *cfg.tmax.insert(1.0),
            };
            let n = *cfg.n.get_or_insert(512);
            // Span of the disturbance: the support carried by the slowest
            // and fastest characteristics.
            let (s0, s1) = prof.support();
            let (fmin, fmax) = prof.depth_range(&p);
            let (x0, x1) = (
                s0 + t * characteristic_speed(fmin, &p)?,
                s1 + t * characteristic_speed(fmax, &p)?,
            );
            let mut csv = String::from("x,h,u\n");
            for j in 0..n {
                let x = x0 + (x1 - x0) * j as f64 / (n - 1).max(1) as f64;
                let (h, u) = field.eval(x, t)?;
                let _ = writeln!(csv, "{},{},{}", format_sci(x), format_sci(h), format_sci(u));
            }
            out.write("simplewave.csv", csv)?;
            let _ = writeln!(msg, "t_star={t_star:.6}");
        }
        Command::Evolve => {
            let p = cfg.params()?;
            let model = Model::parse(cfg.model.get_or_insert_with(|| "whitham".into()))?;
            let n = *cfg.n.get_or_insert(512);
            let length = *cfg.length.get_or_insert(40.0);
            let dt = *cfg.dt.get_or_insert(1e-3);
            let tmax = *cfg.tmax.get_or_insert(1.0);
            let grid = SpectralGrid::new(length, n)?;
            let mid = 0.5 * length;
            let state = if cfg.profile.as_deref() == Some("steep") {
                let a = *cfg.amp.get_or_insert(0.3);
                WaveState::sample(&grid, |x| -a * (x - mid) * (-(x - mid).powi(2) / 2.0).exp(), |_| 0.0)
            } else {
                let prof = profile(cfg, mid)?;
                WaveState::sample(&grid, |x| prof.shape_at(x).0, |_| 0.0)
            };
            let mut config = EvolutionConfig::new(model, dt, tmax);
            config.validate()?;
            let stride = *cfg.stride.get_or_insert((config.steps().0 / 20).max(1));
            config = config.with_stride(stride);
            let traj = evolve(&state, &grid, &config, &p)?;
            out.write("trajectory.csv", export::trajectory_csv(&traj))?;
            out.write("diagnostics.csv", export::diagnostics_csv(&traj))?;
            let monitor = if traj.snapshots.len() >= 3 {
                Some(breaking_monitor(&traj, BreakingThresholds::default())?)
            } else {
                None
            };
            out.write_json("monitor.json", &json!({ "status": traj.status, "monitor": monitor }))?;
            match traj.status {
                wavelab::spectral::RunStatus::Completed => msg.push_str("status=completed\n"),
                wavelab::spectral::RunStatus::BlowupDetected { t } => {
                    let _ = writeln!(msg, "status=blowup t={t}");
                }
            }
            if let Some(m) = monitor {
                let _ = writeln!(msg, "breaking_flag={}", m.breaking_flag);
            }
        }
        Command::Wave => {
            let p = cfg.params()?;
            let k = cfg.require_k()?;
            let a = *cfg.amp.get_or_insert(0.01);
            let m = *cfg.truncation.get_or_insert(32);
            let wave = traveling_wave(k, a, &p, m)?;
            out.write("wave.csv", export::wave_csv(&wave))?;
            out.write_json("wave.json", &export::wave_header(&wave))?;
            let _ = writeln!(msg, "c={:.12}", wave.c);
        }
        Command::Stability => {
            let p = cfg.params()?;
            let k = cfg.require_k()?;
            let record = classify(k, &p, &StabilityProtocol::default())?;
            out.write_json("stability.json", &record)?;
            let _ = writeln!(msg, "{}", record.verdict.label());
        }
        Command::Kc => {
            let p = cfg.params()?;
            let kc = critical_wavenumber(&p, &StabilityProtocol::default(), &KcSearch::default())?;
            out.write_json("kc.json", &kc)?;
            let _ = writeln!(msg, "k_c={:.6}", kc.k_c);
        }
        Command::Sweep => {
            let p = cfg.params()?;
            let omegas = cfg
                .omegas
                .get_or_insert_with(|| vec![-2.0, -1.0, 0.0, 1.0, 2.0])
                .clone();
            let ks = cfg
                .ks
                .get_or_insert_with(|| (1..=6).map(|i| 0.5 * i as f64).collect())
                .clone();
            let tensions = cfg.tensions.get_or_insert_with(|| vec![p.tension]).clone();
            let records = sweep(
                &tensions,
                &omegas,
                &ks,
                &StabilityProtocol::default(),
                threads_from_env()?,
            )?;
            out.write("sweep.csv", export::sweep_csv(&records))?;
            match emit_plot(PlotData::OmegaK(&records)) {
                Some(svg) => out.write("fig_omega_k.svg", svg)?,
                None => warn!("empty sweep; no figure written"),
            }
            let count = |v| records.iter().filter(|r| r.error.is_none() && r.verdict == v).count();
            let _ = writeln!(
                msg,
                "records={} stable={} unstable={} indeterminate={} errors={}",
                records.len(),
                count(Verdict::Stable),
                count(Verdict::Unstable),
                count(Verdict::Indeterminate),
                records.iter().filter(|r| r.error.is_some()).count()
            );
        }
        Command::Resonances => {
            let p = cfg.params()?;
            let tensions = cfg
                .tensions
                .get_or_insert_with(|| (1..=60).map(|i| 0.01 * i as f64).collect())
                .clone();
            let opts = ResonanceOptions {
                omega: p.omega,
                k_max: *cfg.k_max.get_or_insert(20.0),
                samples: *cfg.samples.get_or_insert(4000),
                index_grid: cfg.index_grid.clone().unwrap_or_default(),
                ..ResonanceOptions::default()
            };
            let points = resonance_curves(&tensions, &opts, threads_from_env()?)?;
            out.write("resonances.csv", export::resonance_csv(&points))?;
            let name = if p.omega == 0.0 {
                "fig_capillary_w0.svg".to_string()
            } else {
                format!("fig_capillary_w{}.svg", p.omega)
            };
            match emit_plot(PlotData::Capillary(&points)) {
                Some(svg) => out.write(&name, svg)?,
                None => warn!("no resonance points; no figure written"),
            }
            let _ = writeln!(msg, "points={}", points.len());
        }
    }
    Ok(msg)
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(msg) => {
            print!("{msg}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("wavelab {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let mut cfg = match &cli.flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    cfg.apply(&cli.flags);
    let dir = cfg.out.get_or_insert_with(|| PathBuf::from("wavelab-out")).clone();
    let mut out = Outputs::create(&dir)?;
    let msg = run(cli.command, &mut cfg, &mut out)?;
    let resolved = serde_json::to_value(&cfg).map_err(|e| CliError::Numerical(e.to_string()))?;
    out.finish(cli.command.name(), &resolved)?;
    Ok(msg)
}
