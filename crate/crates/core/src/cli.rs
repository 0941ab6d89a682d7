//! Run configuration and command dispatch behind the `spheroid` binary.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{domain, Error, Result};
use crate::free_particle;
use crate::geometry::{
    metric_tangent, potential_osc, sphere_measure, tangent_to_sphere, tangent_to_spheroid, Coupling, Sheet,
    SurfaceParams, TangentPoint,
};
use crate::numerics::QuadratureSpec;
use crate::oscillator::{self, OscParams};
use crate::suite::{self, Suite};
use crate::svg;
use crate::table::{fmt_sig, LevelTable, Splitting};

pub const QUAD_TOL_ENV: &str = "SPHEROID_QUAD_TOL";
pub const MAX_N: u32 = 60;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Free,
    Osc,
    Levels,
    Validate,
    Geometry,
}

/// Parameter sets of the level diagram, all at ε = 0.1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2a,
    Fig2b,
    Fig2c,
}

impl Preset {
    /// (λ, ω, ε)
    pub fn params(self) -> (f64, f64, f64) {
        match self {
            Preset::Fig2a => (0.8, 1.0, 0.1),
            Preset::Fig2b => (1.0, 1.0, 0.1),
            Preset::Fig2c => (1.0, 1.4, 0.1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig2c => "fig2c",
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2a" => Ok(Preset::Fig2a),
            "fig2b" => Ok(Preset::Fig2b),
            "fig2c" => Ok(Preset::Fig2c),
            other => Err(domain(format!("unknown preset '{other}' (expected fig2a|fig2b|fig2c)"))),
        }
    }
}

/// One layer of settings: a config file or the command line. Unset fields
/// fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub lambda: Option<f64>,
    pub eps: Option<f64>,
    pub omega: Option<f64>,
    pub n_max: Option<u32>,
    pub coupling: Option<Coupling>,
    pub preset: Option<Preset>,
    pub quad_rel_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub suite: Option<Suite>,
    pub points: Option<Vec<[f64; 2]>>,
}

impl Settings {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| domain(format!("config file: {e}")))
    }

    /// `over` wins wherever it is set.
    pub fn merge(self, over: Settings) -> Settings {
        Settings {
            lambda: over.lambda.or(self.lambda),
            eps: over.eps.or(self.eps),
            omega: over.omega.or(self.omega),
            n_max: over.n_max.or(self.n_max),
            coupling: over.coupling.or(self.coupling),
            preset: over.preset.or(self.preset),
            quad_rel_tol: over.quad_rel_tol.or(self.quad_rel_tol),
            out: over.out.or(self.out),
            svg: over.svg.or(self.svg),
            suite: over.suite.or(self.suite),
            points: over.points.or(self.points),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub lambda: f64,
    pub eps: f64,
    pub omega: f64,
    pub n_max: u32,
    pub coupling: Coupling,
    pub preset: Option<Preset>,
    pub quad: QuadratureSpec,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub suite: Suite,
    pub points: Vec<[f64; 2]>,
}

impl RunConfig {
    /// Resolve settings: defaults, then the preset, then explicit values.
    /// `env_tol` is the raw value of `SPHEROID_QUAD_TOL`, which replaces any
    /// configured tolerance.
    pub fn resolve(command: Command, s: Settings, env_tol: Option<&str>) -> Result<Self> {
        let (mut lambda, mut omega, mut eps) = (1.0, 1.0, 0.1);
        if let Some(p) = s.preset {
            (lambda, omega, eps) = p.params();
        }
        let lambda = s.lambda.unwrap_or(lambda);
        let omega = s.omega.unwrap_or(omega);
        let eps = s.eps.unwrap_or(eps);
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(domain(format!("lambda must be finite and > 0, got {lambda}")));
        }
        if !(eps > -1.0) || !eps.is_finite() {
            return Err(domain(format!("eps must be finite and > -1, got {eps}")));
        }
        if !(omega >= 0.0) || !omega.is_finite() {
            return Err(domain(format!("omega must be finite and >= 0, got {omega}")));
        }
        let n_max = s.n_max.unwrap_or(4);
        if n_max > MAX_N {
            return Err(domain(format!("n_max must be <= {MAX_N}, got {n_max}")));
        }
        let mut quad = QuadratureSpec::default();
        if let Some(t) = s.quad_rel_tol {
            quad = quad.with_rel_tol(t);
        }
        if let Some(raw) = env_tol {
            let t: f64 =
                raw.trim().parse().map_err(|_| domain(format!("{QUAD_TOL_ENV} must be a number, got '{raw}'")))?;
            quad = quad.with_rel_tol(t);
        }
        if !(quad.rel_tol > 0.0 && quad.rel_tol < 1.0) {
            return Err(domain(format!("quadrature rel_tol must lie in (0, 1), got {}", quad.rel_tol)));
        }
        let points = s.points.unwrap_or_else(|| vec![[0.0, 0.0], [0.5, 0.25], [1.0, -1.0]]);
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(domain("geometry points must be finite"));
        }
        Ok(Self {
            command,
            lambda,
            eps,
            omega,
            n_max,
            coupling: s.coupling.unwrap_or_default(),
            preset: s.preset,
            quad,
            out: s.out,
            svg: s.svg,
            suite: s.suite.unwrap_or(Suite::All),
            points,
        })
    }

    pub fn surface(&self) -> Result<SurfaceParams> {
        SurfaceParams::from_curvature(self.lambda, self.eps)
    }

    fn osc_params(&self, eps: f64) -> Result<OscParams> {
        OscParams::new(self.omega, SurfaceParams::from_curvature(self.lambda, eps)?, self.coupling)
    }
}

/// Primary output of a run and whether every gated check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::Io(_) => EXIT_USAGE,
        Error::Validation(_) | Error::Convergence { .. } | Error::Resolution { .. } => EXIT_VALIDATION,
    }
}

/// Execute a command. Writes the SVG when requested; the caller decides
/// where `Outcome::text` goes.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Free => {
            let t = free_particle::spectrum(cfg.n_max, &cfg.surface()?, &cfg.quad)?;
            write_svg(cfg, &t, &t)?;
            Ok(Outcome { text: t.to_csv(), passed: true })
        }
        Command::Osc => {
            let t = oscillator::level_table(cfg.n_max, &cfg.osc_params(cfg.eps)?, &cfg.quad)?;
            write_svg(cfg, &t, &t)?;
            Ok(Outcome { text: t.to_csv(), passed: true })
        }
        Command::Levels => {
            let reference = oscillator::level_table(cfg.n_max, &cfg.osc_params(0.0)?, &cfg.quad)?;
            let perturbed = oscillator::level_table(cfg.n_max, &cfg.osc_params(cfg.eps)?, &cfg.quad)?;
            write_svg(cfg, &reference, &perturbed)?;
            let report = LevelsReport {
                preset: cfg.preset.map(Preset::name),
                lambda: cfg.lambda,
                omega: cfg.omega,
                eps: cfg.eps,
                coupling: cfg.coupling,
                splittings: perturbed.splittings(),
                mean_width_n1_to_3: perturbed.mean_width(3),
                reference,
                perturbed,
            };
            Ok(Outcome { text: to_json(&report)?, passed: true })
        }
        Command::Validate => {
            let report = suite::run_suite(cfg.suite, &cfg.quad)?;
            Ok(Outcome { text: to_json(&report)?, passed: report.pass })
        }
        Command::Geometry => {
            let s = cfg.surface()?;
            let rows: Vec<GeometryRow> = cfg.points.iter().map(|&[x, y]| geometry_row(x, y, cfg, &s)).collect();
            Ok(Outcome { text: to_json(&rows)?, passed: true })
        }
    }
}

fn write_svg(cfg: &RunConfig, reference: &LevelTable, perturbed: &LevelTable) -> Result<()> {
    match &cfg.svg {
        Some(path) => svg::emit_level_svg(reference, perturbed, path),
        None => Ok(()),
    }
}

#[derive(Debug, Serialize)]
struct LevelsReport {
    preset: Option<&'static str>,
    lambda: f64,
    omega: f64,
    eps: f64,
    coupling: Coupling,
    splittings: Vec<Splitting>,
    mean_width_n1_to_3: f64,
    reference: LevelTable,
    perturbed: LevelTable,
}

#[derive(Debug, Serialize)]
struct GeometryRow {
    x: f64,
    y: f64,
    rho: f64,
    chi: f64,
    sphere_point: [f64; 3],
    spheroid_point: [f64; 3],
    spheroid_residual: f64,
    metric: [f64; 3],
    metric_det: f64,
    metric_eigenvalues: [f64; 2],
    sphere_measure: f64,
    potential: f64,
}

fn geometry_row(x: f64, y: f64, cfg: &RunConfig, s: &SurfaceParams) -> GeometryRow {
    let t = TangentPoint::new(x, y);
    let g = metric_tangent(&t, s);
    let (e1, e2) = g.eigenvalues();
    let sp = tangent_to_spheroid(&t, s, Sheet::Upper);
    GeometryRow {
        x,
        y,
        rho: t.rho(),
        chi: t.chi(s.lambda()),
        sphere_point: tangent_to_sphere(&t, s, Sheet::Upper).q,
        spheroid_point: sp.q,
        spheroid_residual: sp.spheroid_residual(s),
        metric: [g.g11, g.g12, g.g22],
        metric_det: g.det(),
        metric_eigenvalues: [e1, e2],
        sphere_measure: sphere_measure(t.rho(), s.lambda()),
        potential: potential_osc(&t, s, cfg.omega, cfg.coupling),
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Validation(format!("serialization: {e}")))?;
    let mut s = serde_json::to_string_pretty(&round_floats(v)).map_err(|e| Error::Validation(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            let r: f64 = fmt_sig(x).parse().unwrap_or(x);
            serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}
