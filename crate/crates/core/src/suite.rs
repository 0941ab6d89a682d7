//! Invariant checks run by `spheroid validate`.
//!
//! Each check reduces to one number compared against a bound. Statements
//! about trends in the level diagram are reported under `claims` and do not
//! affect `pass`.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::free_particle::{self, FreeState};
use crate::geometry::{
    classical_hamiltonians, classical_momenta, metric_fd, metric_tangent, ClassicalState, Coupling, SurfaceParams,
    TangentPoint,
};
use crate::numerics::{central_diff, DiffOrder, QuadratureSpec};
use crate::oracle::{self, OracleReport, RadialProblem, ShiftTarget};
use crate::oscillator::{self, OscEigenstate, OscParams, OscState};

/// (λ, ω, ε) of the three level-diagram parameter sets.
pub const PRESETS: [(&str, f64, f64, f64); 3] =
    [("fig2a", 0.8, 1.0, 0.1), ("fig2b", 1.0, 1.0, 0.1), ("fig2c", 1.0, 1.4, 0.1)];

const SEED: u64 = 0x5EED_2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// value ≤ limit
    Upper,
    /// value > limit
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Check {
    pub fn upper(name: &str, value: f64, limit: f64) -> Self {
        Self { name: name.to_string(), value, limit, bound: Bound::Upper, pass: value <= limit }
    }

    pub fn lower(name: &str, value: f64, limit: f64) -> Self {
        Self { name: name.to_string(), value, limit, bound: Bound::Lower, pass: value > limit }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Free,
    Osc,
    Oracle,
    Geometry,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "free" => Ok(Suite::Free),
            "osc" => Ok(Suite::Osc),
            "oracle" => Ok(Suite::Oracle),
            "geometry" => Ok(Suite::Geometry),
            other => Err(domain(format!("unknown suite '{other}' (expected all|free|osc|oracle|geometry)"))),
        }
    }
}

/// Level-diagram statements checked for information only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claims {
    /// Per preset: number of distinct sublevels of n = 1..=4.
    pub distinct_sublevels: Vec<(String, Vec<usize>)>,
    pub every_level_splits: bool,
    /// Mean splitting width over 1 ≤ n ≤ 3 at fig2a and fig2b.
    pub lambda_trend: (f64, f64),
    /// Width decreases from λ = 0.8 to λ = 1.0.
    pub lambda_trend_holds: bool,
    /// Mean splitting width over 1 ≤ n ≤ 3 at fig2b and fig2c.
    pub omega_trend: (f64, f64),
    pub omega_trend_direction: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingRecord {
    pub omega: f64,
    pub lambda: f64,
    pub matching: Vec<Coupling>,
    pub literal_max_rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub suite: Suite,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub oracle: Vec<OracleReport>,
    pub coupling: Option<CouplingRecord>,
    /// Closed-form 𝒩 over the quadrature 𝒩, per preset.
    pub azimuthal_factor: Vec<(String, f64)>,
    pub claims: Option<Claims>,
}

pub fn run_suite(suite: Suite, spec: &QuadratureSpec) -> Result<ValidationReport> {
    let mut report = ValidationReport {
        suite,
        pass: true,
        checks: Vec::new(),
        oracle: Vec::new(),
        coupling: None,
        azimuthal_factor: Vec::new(),
        claims: None,
    };
    let all = suite == Suite::All;
    if all || suite == Suite::Free {
        free_checks(spec, &mut report)?;
    }
    if all || suite == Suite::Osc {
        osc_checks(spec, &mut report)?;
        report.claims = Some(claims(spec)?);
    }
    if all || suite == Suite::Oracle {
        oracle_checks(spec, &mut report)?;
    }
    if all || suite == Suite::Geometry {
        geometry_checks(&mut report)?;
    }
    report.pass = report.checks.iter().all(|c| c.pass) && report.oracle.iter().all(|r| r.pass);
    Ok(report)
}

fn surface(lambda: f64, eps: f64) -> Result<SurfaceParams> {
    SurfaceParams::from_curvature(lambda, eps)
}

fn preset_params(eps_override: Option<f64>) -> Result<Vec<(String, OscParams)>> {
    PRESETS
        .iter()
        .map(|&(name, lambda, omega, eps)| {
            let s = surface(lambda, eps_override.unwrap_or(eps))?;
            Ok((name.to_string(), OscParams::new(omega, s, Coupling::Squared)?))
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    oracle::rel_diff(a, b)
}

fn free_checks(spec: &QuadratureSpec, r: &mut ValidationReport) -> Result<()> {
    let mut dual = 0.0f64;
    let mut bilinear = 0.0f64;
    for lambda in [0.5, 1.0, 2.0] {
        let s = surface(lambda, 0.1)?;
        for n in 0..=20 {
            let st = FreeState::new(n, s)?;
            let c = free_particle::shift1_closed(&st)?;
            dual = dual.max(rel(c, free_particle::shift1_quadrature(&st, spec)?.value));
            if n <= 8 {
                bilinear = bilinear.max(rel(c, free_particle::shift1_bilinear(&st, spec)?.value));
            }
        }
    }
    r.checks.push(Check::upper("free.closed_vs_quadrature", dual, 1e-8));
    r.checks.push(Check::upper("free.closed_vs_bilinear", bilinear, 1e-8));

    let s = surface(1.0, 0.1)?;
    let d0 = free_particle::shift1_closed(&FreeState::new(0, s)?)?;
    let d1 = free_particle::shift1_closed(&FreeState::new(1, s)?)?;
    r.checks.push(Check::upper("free.constants", (d0 - 0.025).abs().max((d1 + 0.05).abs()), 1e-10));

    let mut off = 0.0f64;
    for n in 1..=8 {
        for m in 0..n {
            off = off.max(free_particle::offdiag_element(m, n, &s, spec)?.norm());
        }
    }
    r.checks.push(Check::upper("free.offdiag_vanish", off, 1e-10));

    let mut norm = 0.0f64;
    for n in 0..=10 {
        norm = norm.max((free_particle::norm_integral(&FreeState::new(n, s)?, spec)?.value - 1.0).abs());
    }
    r.checks.push(Check::upper("free.unit_norm", norm, 1e-10));

    let flat = surface(1.0, 0.0)?;
    let mut zero = 0.0f64;
    for n in 0..=10 {
        let st = FreeState::new(n, flat)?;
        zero = zero.max(free_particle::shift1_closed(&st)?.abs());
        zero = zero.max(free_particle::shift1_quadrature(&st, spec)?.value.abs());
    }
    r.checks.push(Check::upper("free.zero_eps", zero, 1e-12));
    Ok(())
}

fn osc_checks(spec: &QuadratureSpec, r: &mut ValidationReport) -> Result<()> {
    let mut dev = 0.0f64;
    let mut unit = 0.0f64;
    let mut ortho = 0.0f64;
    let mut deriv = 0.0f64;
    let mut xform = 0.0f64;
    let mut pm = 0.0f64;
    let mut linear = 0.0f64;
    for (name, p) in preset_params(None)? {
        let half = p.with_surface(p.surface().with_eps(0.5 * p.surface().eps())?)?;
        let mut factor = 0.0;
        for n in 0..=8 {
            let mut by_l = Vec::new();
            for st in OscState::level(n) {
                let e = OscEigenstate::new(st, p, spec)?;
                let chk = e.norm_check()?;
                dev = dev.max(chk.rel_dev);
                factor = chk.azimuthal_factor;
                unit = unit.max((oscillator::overlap(&e, &e, spec)?.value - 1.0).abs());
                if n <= 6 {
                    for i in 0..=50 {
                        let chi = 0.05 + (FRAC_PI_2 - 0.1) * f64::from(i) / 50.0;
                        let fd = central_diff(|c| e.radial(c).unwrap_or(f64::NAN), chi, 1e-5, DiffOrder::First);
                        deriv = deriv.max((fd - e.radial_derivative_chi(chi)?).abs());
                    }
                }
                if n <= 4 {
                    let k = oscillator::shift_kinetic(&e, spec)?.value;
                    xform = xform.max(rel(k, oscillator::shift_kinetic_x(&e, spec)?.value));
                    let full = oscillator::shift_total(&e, spec)?.value;
                    let e_half = OscEigenstate::new(st, half, spec)?;
                    linear = linear.max(rel(full, 2.0 * oscillator::shift_total(&e_half, spec)?.value));
                    by_l.push((st.l(), full));
                }
            }
            for &(l, v) in &by_l {
                if let Some(&(_, w)) = by_l.iter().find(|(m, _)| *m == -l) {
                    pm = pm.max((v - w).abs());
                }
            }
        }
        for l in 0..=8u32 {
            let states: Vec<OscEigenstate> = (l..=8)
                .step_by(2)
                .map(|n| OscEigenstate::new(OscState::new(n, l as i32)?, p, spec))
                .collect::<Result<_>>()?;
            for i in 0..states.len() {
                for j in i + 1..states.len() {
                    ortho = ortho.max(oscillator::overlap(&states[i], &states[j], spec)?.value.abs());
                }
            }
        }
        r.azimuthal_factor.push((name, factor));
    }
    r.checks.push(Check::upper("osc.norm_closed_form", dev, 1e-8));
    r.checks.push(Check::upper("osc.unit_norm", unit, 1e-8));
    r.checks.push(Check::upper("osc.orthogonality", ortho, 1e-8));
    r.checks.push(Check::upper("osc.derivative_fd", deriv, 1e-6));
    r.checks.push(Check::upper("osc.kinetic_x_form", xform, 1e-9));
    r.checks.push(Check::upper("osc.plus_minus_l", pm, 1e-10));
    r.checks.push(Check::upper("osc.linear_in_eps", linear, 1e-12));

    let flat = OscParams::new(1.0, surface(1e-3, 0.01)?, Coupling::Squared)?;
    let mut virial = 0.0f64;
    for n in 0..=4 {
        for st in OscState::level(n) {
            let e = OscEigenstate::new(st, flat, spec)?;
            let ratio = oscillator::shift_total(&e, spec)?.value / (0.01 * f64::from(n + 1));
            virial = virial.max((ratio + 1.5).abs() / 1.5);
        }
    }
    r.checks.push(Check::upper("osc.flat_limit_virial", virial, 5e-3));

    let mut zero = 0.0f64;
    for (_, p) in preset_params(Some(0.0))? {
        for n in 0..=4 {
            for st in OscState::level(n) {
                let e = OscEigenstate::new(st, p, spec)?;
                zero = zero.max(oscillator::shift_total(&e, spec)?.value.abs());
            }
        }
    }
    r.checks.push(Check::upper("osc.zero_eps", zero, 1e-12));
    Ok(())
}

/// Level-diagram trend statements, computed at the three presets.
pub fn claims(spec: &QuadratureSpec) -> Result<Claims> {
    let mut widths = Vec::new();
    let mut distinct = Vec::new();
    let mut splits = true;
    for (name, p) in preset_params(None)? {
        let t = oscillator::level_table(4, &p, spec)?;
        let counts: Vec<usize> = t.splittings().iter().filter(|s| s.n >= 1).map(|s| s.distinct).collect();
        splits &= counts.iter().all(|&c| c > 1);
        distinct.push((name, counts));
        widths.push(t.mean_width(3));
    }
    let direction = if widths[2] > widths[1] {
        "increases with omega"
    } else if widths[2] < widths[1] {
        "decreases with omega"
    } else {
        "unchanged"
    };
    Ok(Claims {
        distinct_sublevels: distinct,
        every_level_splits: splits,
        lambda_trend: (widths[0], widths[1]),
        lambda_trend_holds: widths[1] < widths[0],
        omega_trend: (widths[1], widths[2]),
        omega_trend_direction: direction.to_string(),
    })
}

fn oracle_checks(spec: &QuadratureSpec, r: &mut ValidationReport) -> Result<()> {
    let sphere = SurfaceParams::sphere(1.0)?;
    let free = oracle::validate_free(&sphere, 3, 3)?;
    r.checks.push(Check::upper(
        "oracle.free_spectrum",
        free.iter().map(OracleReport::max_rel_err).fold(0.0, f64::max),
        oracle::SPECTRUM_TOL,
    ));
    r.oracle.extend(free);

    let mut osc_err = 0.0f64;
    for &(_, lambda, omega, _) in &PRESETS {
        let v = oracle::validate_osc(&SurfaceParams::sphere(lambda)?, omega, 3)?;
        osc_err = osc_err.max(v.squared.iter().map(OracleReport::max_rel_err).fold(0.0, f64::max));
        if omega == 1.4 && lambda == 1.0 {
            r.checks.push(Check::lower("oracle.literal_coupling_mismatch", v.literal_max_rel_err, 0.01));
            r.coupling = Some(CouplingRecord {
                omega,
                lambda,
                matching: v.matching.clone(),
                literal_max_rel_err: v.literal_max_rel_err,
            });
        }
        r.oracle.extend(v.squared);
    }
    r.checks.push(Check::upper("oracle.osc_spectrum", osc_err, oracle::SPECTRUM_TOL));

    let grids = [500, 1000, 2000, 4000];
    let mut slope_dev = 0.0f64;
    let rp = RadialProblem::free(1, sphere, 500)?;
    slope_dev = slope_dev.max((oracle::convergence_study(&rp, 1, 6.0, &grids)?.slope - 2.0).abs());
    let p = OscParams::new(1.0, sphere, Coupling::Squared)?;
    let rp = RadialProblem::oscillator(0, &p, 500)?;
    let e00 = oscillator::energy0(&OscState::new(0, 0)?, &p);
    slope_dev = slope_dev.max((oracle::convergence_study(&rp, 0, e00, &grids)?.slope - 2.0).abs());
    r.checks.push(Check::upper("oracle.convergence_slope_dev", slope_dev, 0.2));

    let mut shift = 0.0f64;
    let s = surface(1.0, 0.1)?;
    for n in 0..=3 {
        let t = ShiftTarget::Free { n };
        let g = oracle::grid_shift(&t, &t.problem(&s, oracle::DEFAULT_GRID)?)?;
        shift = shift.max(rel(g.value, free_particle::shift1_closed(&FreeState::new(n, s)?)?));
    }
    for (_, p) in preset_params(None)? {
        for n in 0..=4 {
            for st in OscState::level(n) {
                let e = OscEigenstate::new(st, p, spec)?;
                let t = ShiftTarget::Oscillator { state: st, params: p };
                let g = oracle::grid_shift(&t, &t.problem(p.surface(), oracle::DEFAULT_GRID)?)?;
                shift = shift.max(rel(g.value, oscillator::shift_total(&e, spec)?.value));
            }
        }
    }
    r.checks.push(Check::upper("oracle.grid_shift_vs_quadrature", shift, 1e-4));
    Ok(())
}

/// Random classical state and surface, reproducible from `rng`.
fn random_state(rng: &mut ChaCha8Rng) -> (ClassicalState, f64) {
    let pos = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
    let vel = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    (ClassicalState { pos, vel }, rng.random_range(0.3..2.0))
}

/// Largest |G − JᵀJ| over `count` random points and surfaces.
pub fn metric_fd_deviation(count: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let t = TangentPoint::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let s = surface(rng.random_range(0.3..2.0), rng.random_range(-0.3..0.5))?;
        let (a, b) = (metric_tangent(&t, &s), metric_fd(&t, &s));
        worst = worst.max((a.g11 - b.g11).abs()).max((a.g12 - b.g12).abs()).max((a.g22 - b.g22).abs());
    }
    Ok(worst)
}

/// Least-squares slope of log|H_exact − H₀ − H_ε| against log ε, per random
/// state; returns the extreme slopes over `count` states.
pub fn decomposition_slopes(count: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let epsilons = [4e-3, 2e-3, 1e-3, 5e-4];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..count {
        let (c, lambda) = random_state(&mut rng);
        let omega = rng.random_range(0.0..2.0);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for eps in epsilons {
            let h = classical_hamiltonians(&c, &surface(lambda, eps)?, omega, Coupling::Squared);
            xs.push(eps.ln());
            ys.push((h.h_exact - h.h0 - h.h_eps).abs().ln());
        }
        let slope = fit_slope(&xs, &ys);
        lo = lo.min(slope);
        hi = hi.max(slope);
    }
    Ok((lo, hi))
}

/// Largest relative violation of (x·ẋ) = (p₀·x)(1+λρ²)².
pub fn momentum_identity_deviation(count: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (c, lambda) = random_state(&mut rng);
        let s = surface(lambda, rng.random_range(-0.3..0.5))?;
        let p0 = classical_momenta(&c, &s).p0;
        let x = c.pos;
        let w = 1.0 + lambda * (x[0] * x[0] + x[1] * x[1]);
        let lhs = x[0] * c.vel[0] + x[1] * c.vel[1];
        let rhs = (p0[0] * x[0] + p0[1] * x[1]) * w * w;
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    Ok(worst)
}

pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn geometry_checks(r: &mut ValidationReport) -> Result<()> {
    r.checks.push(Check::upper("geometry.metric_vs_embedding_fd", metric_fd_deviation(100, SEED)?, 1e-7));
    let (lo, hi) = decomposition_slopes(20, SEED)?;
    r.checks.push(Check::upper("geometry.decomposition_slope_dev", (lo - 2.0).abs().max((hi - 2.0).abs()), 0.1));
    r.checks.push(Check::upper("geometry.momentum_identity", momentum_identity_deviation(100, SEED)?, 1e-12));
    Ok(())
}
