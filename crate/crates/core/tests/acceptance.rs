//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line.
//! Run with `cargo test -p spheroid-core --test acceptance -- --nocapture`.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use spheroid_core::free_particle::{self, FreeState};
use spheroid_core::geometry::{Coupling, SurfaceParams};
use spheroid_core::numerics::{central_diff, DiffOrder, QuadratureSpec};
use spheroid_core::oracle::{self, OracleReport, RadialProblem, ShiftTarget};
use spheroid_core::oscillator::{self, OscEigenstate, OscParams, OscState};
use spheroid_core::suite::{self, Suite, PRESETS};

const SEED: u64 = 0x5EED_2024;

fn verdict(id: u32, pass: bool, detail: String) {
    println!("criterion {id}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn rel(a: f64, b: f64) -> f64 {
    oracle::rel_diff(a, b)
}

fn presets() -> Vec<(&'static str, OscParams)> {
    PRESETS
        .iter()
        .map(|&(name, lambda, omega, eps)| {
            let s = SurfaceParams::from_curvature(lambda, eps).unwrap();
            (name, OscParams::new(omega, s, Coupling::Squared).unwrap())
        })
        .collect()
}

fn states_up_to(n_max: u32) -> impl Iterator<Item = OscState> {
    (0..=n_max).flat_map(OscState::level)
}

#[test]
fn criterion_01_free_shift_closed_vs_quadrature() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for lambda in [0.5, 1.0, 2.0] {
        let s = SurfaceParams::from_curvature(lambda, 0.1).unwrap();
        for n in 0..=20 {
            let st = FreeState::new(n, s).unwrap();
            let closed = free_particle::shift1_closed(&st).unwrap();
            let quad = free_particle::shift1_quadrature(&st, &spec()).unwrap().value;
            worst = worst.max(rel(closed, quad));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(1, worst <= 1e-8 && secs < 5.0, format!("max rel dev {worst:.2e}, {secs:.2} s"));
}

#[test]
fn criterion_02_free_shift_constants() {
    let s = SurfaceParams::from_curvature(1.0, 0.1).unwrap();
    let mut worst = 0.0f64;
    for (n, expected) in [(0, 0.025), (1, -0.05)] {
        let st = FreeState::new(n, s).unwrap();
        worst = worst.max((free_particle::shift1_closed(&st).unwrap() - expected).abs());
        worst = worst.max((free_particle::shift1_quadrature(&st, &spec()).unwrap().value - expected).abs());
    }
    for (lambda, eps) in [(0.5, 0.2), (2.0, -0.1), (3.0, 0.05)] {
        let s = SurfaceParams::from_curvature(lambda, eps).unwrap();
        let d0 = free_particle::shift1_closed(&FreeState::new(0, s).unwrap()).unwrap();
        let d1 = free_particle::shift1_closed(&FreeState::new(1, s).unwrap()).unwrap();
        worst = worst.max((d0 - eps * lambda / 4.0).abs()).max((d1 + eps * lambda / 2.0).abs());
    }
    verdict(2, worst <= 1e-10, format!("max abs dev {worst:.2e}"));
}

#[test]
fn criterion_03_sphere_eigen_validation() {
    let start = Instant::now();
    let sphere = SurfaceParams::sphere(1.0).unwrap();
    let free = oracle::validate_free(&sphere, 3, 3).unwrap();
    let free_err = free.iter().map(OracleReport::max_rel_err).fold(0.0, f64::max);
    let free_ok = free.len() == 4 && free.iter().all(|r| r.computed.len() == 3 && r.pass);

    let mut osc_err = 0.0f64;
    let mut osc_ok = true;
    for &(_, lambda, omega, _) in &PRESETS {
        let v = oracle::validate_osc(&SurfaceParams::sphere(lambda).unwrap(), omega, 3).unwrap();
        osc_ok &= v.squared.len() == 4 && v.squared.iter().all(|r| r.computed.len() >= 2 && r.pass);
        osc_err = osc_err.max(v.squared.iter().map(OracleReport::max_rel_err).fold(0.0, f64::max));
    }

    let grids = [500, 1000, 2000, 4000];
    let rp = RadialProblem::free(1, sphere, 500).unwrap();
    let s_free = oracle::convergence_study(&rp, 1, 6.0, &grids).unwrap().slope;
    let p = OscParams::new(1.0, sphere, Coupling::Squared).unwrap();
    let rp = RadialProblem::oscillator(0, &p, 500).unwrap();
    let e00 = oscillator::energy0(&OscState::new(0, 0).unwrap(), &p);
    let s_osc = oracle::convergence_study(&rp, 0, e00, &grids).unwrap().slope;
    let slopes_ok = (s_free - 2.0).abs() <= 0.2 && (s_osc - 2.0).abs() <= 0.2;

    let secs = start.elapsed().as_secs_f64();
    verdict(
        3,
        free_ok && osc_ok && slopes_ok && secs < 30.0,
        format!("free {free_err:.2e}, osc {osc_err:.2e}, slopes {s_free:.3}/{s_osc:.3}, {secs:.2} s"),
    );
}

#[test]
fn criterion_04_coupling_certification() {
    let sphere = SurfaceParams::sphere(1.0).unwrap();
    let v = oracle::validate_osc(&sphere, 1.4, 3).unwrap();
    let sq = v.squared.iter().map(OracleReport::max_rel_err).fold(0.0, f64::max);
    let report = suite::run_suite(Suite::Oracle, &spec()).unwrap();
    let recorded = report.coupling.as_ref().is_some_and(|c| {
        c.omega == 1.4 && c.lambda == 1.0 && c.matching == vec![Coupling::Squared] && c.literal_max_rel_err > 0.01
    });
    verdict(
        4,
        sq <= 1e-3 && v.literal_max_rel_err > 0.01 && recorded,
        format!("squared {sq:.2e}, literal {:.2e}, recorded {recorded}", v.literal_max_rel_err),
    );
}

#[test]
fn criterion_05_oscillator_normalization_orthogonality() {
    let mut dev = 0.0f64;
    let mut ortho = 0.0f64;
    for (_, p) in presets() {
        for st in states_up_to(8) {
            let e = OscEigenstate::new(st, p, &spec()).unwrap();
            dev = dev.max(e.norm_check().unwrap().rel_dev);
        }
        for l in 0..=8i32 {
            let states: Vec<_> = (l as u32..=8)
                .step_by(2)
                .map(|n| OscEigenstate::new(OscState::new(n, l).unwrap(), p, &spec()).unwrap())
                .collect();
            for i in 0..states.len() {
                for j in i + 1..states.len() {
                    ortho = ortho.max(oscillator::overlap(&states[i], &states[j], &spec()).unwrap().value.abs());
                }
            }
        }
    }
    verdict(5, dev <= 1e-8 && ortho <= 1e-8, format!("norm rel dev {dev:.2e}, orthogonality {ortho:.2e}"));
}

#[test]
fn criterion_06_derivative_identity() {
    let mut worst = 0.0f64;
    for (_, p) in presets() {
        for st in states_up_to(6) {
            let e = OscEigenstate::new(st, p, &spec()).unwrap();
            for i in 0..=100 {
                let chi = 0.05 + (FRAC_PI_2 - 0.1) * f64::from(i) / 100.0;
                let fd = central_diff(|c| e.radial(c).unwrap(), chi, 1e-5, DiffOrder::First);
                worst = worst.max((fd - e.radial_derivative_chi(chi).unwrap()).abs());
            }
        }
    }
    verdict(6, worst <= 1e-6, format!("max abs dev {worst:.2e}"));
}

#[test]
fn criterion_07_oscillator_shift_vs_grid() {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (_, p) in presets() {
        for st in states_up_to(4) {
            let e = OscEigenstate::new(st, p, &spec()).unwrap();
            let quad = oscillator::shift_total(&e, &spec()).unwrap().value;
            let t = ShiftTarget::Oscillator { state: st, params: p };
            let g = oracle::grid_shift(&t, &t.problem(p.surface(), oracle::DEFAULT_GRID).unwrap()).unwrap();
            worst = worst.max(rel(quad, g.value));
            count += 1;
        }
    }
    verdict(7, worst <= 1e-4, format!("{count} states, max rel dev {worst:.2e}"));
}

#[test]
fn criterion_08_flat_limit_virial() {
    let p = OscParams::new(1.0, SurfaceParams::from_curvature(1e-3, 0.01).unwrap(), Coupling::Squared).unwrap();
    let mut worst = 0.0f64;
    for st in states_up_to(4) {
        let e = OscEigenstate::new(st, p, &spec()).unwrap();
        let ratio = oscillator::shift_total(&e, &spec()).unwrap().value / (0.01 * f64::from(st.n() + 1) * p.omega());
        worst = worst.max((ratio + 1.5).abs() / 1.5);
    }
    verdict(8, worst <= 5e-3, format!("max rel dev from -1.5: {worst:.2e}"));
}

#[test]
fn criterion_09_level_diagram_reproduction() {
    let c = suite::claims(&spec()).unwrap();
    let mut pm = 0.0f64;
    for (_, p) in presets() {
        for n in 0..=4 {
            for l in 1..=n as i32 {
                if (n as i32 - l) % 2 != 0 {
                    continue;
                }
                let d = |l: i32| {
                    let e = OscEigenstate::new(OscState::new(n, l).unwrap(), p, &spec()).unwrap();
                    oscillator::shift_total(&e, &spec()).unwrap().value
                };
                pm = pm.max((d(l) - d(-l)).abs());
            }
        }
    }
    let detail = format!(
        "every n>=1 splits: {} {:?}; mean width n=1..3 at lambda 0.8/1.0: {:.4}/{:.4} (reduced by lambda: {}); \
         omega 1.0/1.4: {:.4}/{:.4} ({}, reported only); +-l dev {pm:.2e}",
        c.every_level_splits,
        c.distinct_sublevels,
        c.lambda_trend.0,
        c.lambda_trend.1,
        c.lambda_trend_holds,
        c.omega_trend.0,
        c.omega_trend.1,
        c.omega_trend_direction,
    );
    verdict(9, c.every_level_splits && c.lambda_trend_holds && pm <= 1e-10, detail);
}

#[test]
fn criterion_10_geometry() {
    let metric = suite::metric_fd_deviation(100, SEED).unwrap();
    let (lo, hi) = suite::decomposition_slopes(20, SEED).unwrap();
    let identity = suite::momentum_identity_deviation(100, SEED).unwrap();
    let slope_ok = (lo - 2.0).abs() <= 0.1 && (hi - 2.0).abs() <= 0.1;
    verdict(
        10,
        metric <= 1e-7 && slope_ok && identity <= 1e-12,
        format!("metric {metric:.2e}, slopes [{lo:.3}, {hi:.3}], momentum identity {identity:.2e}"),
    );
}

#[test]
fn criterion_11_free_offdiagonal_vanish() {
    let mut worst = 0.0f64;
    for lambda in [0.5, 1.0, 2.0] {
        let s = SurfaceParams::from_curvature(lambda, 0.1).unwrap();
        for n in 1..=8 {
            for m in 0..n {
                worst = worst.max(free_particle::offdiag_element(m, n, &s, &spec()).unwrap().norm());
            }
        }
    }
    verdict(11, worst <= 1e-10, format!("max |element| {worst:.2e}"));
}

#[test]
fn criterion_12_zero_eps_reduces_to_sphere() {
    let mut shift = 0.0f64;
    let mut table = 0.0f64;
    let mut sphere_dev = 0.0f64;
    for lambda in [0.5, 1.0, 2.0] {
        let s = SurfaceParams::from_curvature(lambda, 0.0).unwrap();
        for n in 0..=10 {
            let st = FreeState::new(n, s).unwrap();
            shift = shift.max(free_particle::shift1_closed(&st).unwrap().abs());
            shift = shift.max(free_particle::shift1_quadrature(&st, &spec()).unwrap().value.abs());
            sphere_dev = sphere_dev.max((free_particle::energy0(n, &s) - 0.5 * lambda * f64::from(n * (n + 1))).abs());
        }
        let t = free_particle::spectrum(6, &s, &spec()).unwrap();
        table = t.rows.iter().map(|r| (r.e - r.e0).abs()).fold(table, f64::max);
    }
    for &(_, lambda, omega, _) in &PRESETS {
        let s = SurfaceParams::from_curvature(lambda, 0.0).unwrap();
        let p = OscParams::new(omega, s, Coupling::Squared).unwrap();
        for st in states_up_to(6) {
            let e = OscEigenstate::new(st, p, &spec()).unwrap();
            shift = shift.max(oscillator::shift_total(&e, &spec()).unwrap().value.abs());
            let n1 = f64::from(st.n() + 1);
            let higgs = n1 * p.big_omega() + 0.5 * lambda * n1 * n1;
            sphere_dev = sphere_dev.max(rel(oscillator::energy0(&st, &p), higgs));
        }
        let t = oscillator::level_table(6, &p, &spec()).unwrap();
        table = t.rows.iter().map(|r| (r.e - r.e0).abs()).fold(table, f64::max);
        let v = oracle::validate_osc(&s, omega, 2).unwrap();
        sphere_dev = sphere_dev.max(if v.squared_pass() { 0.0 } else { 1.0 });
    }
    verdict(
        12,
        shift <= 1e-12 && table <= 1e-12 && sphere_dev <= 1e-12,
        format!("max |shift| {shift:.2e}, max |E - E0| {table:.2e}, sphere dev {sphere_dev:.2e}"),
    );
}
