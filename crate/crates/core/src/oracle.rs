//! Finite-difference radial eigensolver on the hemisphere.
//!
//! The sphere operator in χ,
//! −(λ/2)[d²/dχ² + cot χ d/dχ − m²/sin²χ] + V(χ),
//! is discretized in flux form on a uniform grid and symmetrized with the
//! sin χ weight, giving a symmetric tridiagonal matrix. It checks the
//! closed-form spectra and supplies grid matrix elements of the
//! first-order perturbation that do not share code with the quadrature
//! shifts.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::geometry::{Coupling, SurfaceParams};
use crate::numerics::{eig_tridiag, eigvec_tridiag};
use crate::oscillator::{energy0, OscParams, OscState};

pub const MIN_GRID: usize = 100;
pub const DEFAULT_GRID: usize = 4000;
/// Minimum grid for [`grid_shift`].
pub const MIN_SHIFT_GRID: usize = 2000;
/// Relative spectrum tolerance of the validation reports.
pub const SPECTRUM_TOL: f64 = 1e-3;
/// Largest acceptable Richardson error estimate of a grid shift.
pub const SHIFT_RESOLUTION_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Free,
    Oscillator { omega: f64, coupling: Coupling },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Neumann,
    Dirichlet,
}

/// Where the nodes sit within the uniform cells of width h = (π/2)/N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridOffset {
    /// χ_j = (j + ½)h, j = 0..N; neither endpoint is a node.
    #[default]
    Staggered,
    /// χ_j = j h; the pole is a node for m = 0 and the equator is a node
    /// under Neumann. Used only to check offset independence.
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialProblem {
    m: u32,
    potential: PotentialKind,
    surface: SurfaceParams,
    n_grid: usize,
    boundary: Boundary,
    offset: GridOffset,
}

impl RadialProblem {
    pub fn new(
        m: u32,
        potential: PotentialKind,
        surface: SurfaceParams,
        n_grid: usize,
        boundary: Boundary,
    ) -> Result<Self> {
        if n_grid < MIN_GRID {
            return Err(domain(format!("n_grid must be >= {MIN_GRID}, got {n_grid}")));
        }
        if let PotentialKind::Oscillator { omega, .. } = potential {
            if !(omega >= 0.0) || !omega.is_finite() {
                return Err(domain(format!("omega must be finite and >= 0, got {omega}")));
            }
        }
        Ok(Self { m, potential, surface, n_grid, boundary, offset: GridOffset::Staggered })
    }

    /// Free particle, Neumann at the equator.
    pub fn free(m: u32, surface: SurfaceParams, n_grid: usize) -> Result<Self> {
        Self::new(m, PotentialKind::Free, surface, n_grid, Boundary::Neumann)
    }

    /// Oscillator, Dirichlet at the equator.
    pub fn oscillator(m: u32, p: &OscParams, n_grid: usize) -> Result<Self> {
        let pot = PotentialKind::Oscillator { omega: p.omega(), coupling: p.coupling() };
        Self::new(m, pot, *p.surface(), n_grid, Boundary::Dirichlet)
    }

    pub fn with_offset(mut self, offset: GridOffset) -> Self {
        self.offset = offset;
        self
    }

    pub fn with_grid(mut self, n_grid: usize) -> Result<Self> {
        if n_grid < MIN_GRID {
            return Err(domain(format!("n_grid must be >= {MIN_GRID}, got {n_grid}")));
        }
        self.n_grid = n_grid;
        Ok(self)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn potential(&self) -> PotentialKind {
        self.potential
    }

    pub fn surface(&self) -> &SurfaceParams {
        &self.surface
    }

    pub fn n_grid(&self) -> usize {
        self.n_grid
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn offset(&self) -> GridOffset {
        self.offset
    }

    pub fn h(&self) -> f64 {
        FRAC_PI_2 / self.n_grid as f64
    }

    fn potential_at(&self, chi: f64) -> f64 {
        match self.potential {
            PotentialKind::Free => 0.0,
            PotentialKind::Oscillator { omega, coupling } => {
                let t = chi.tan();
                0.5 * coupling.stiffness(omega) * t * t / self.surface.lambda()
            }
        }
    }
}

/// Symmetric tridiagonal form of a [`RadialProblem`].
///
/// An eigenvector v maps to radial samples f_j = v_j / √w_j.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TridiagSystem {
    pub nodes: Vec<f64>,
    /// Cell weights ∫ sin χ dχ (approximated by h sin χ_j on interior cells).
    pub weights: Vec<f64>,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagSystem {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Discrete operator applied to radial samples f (not to v).
    pub fn apply_radial(&self, f: &[f64]) -> Vec<f64> {
        let v: Vec<f64> = f.iter().zip(&self.weights).map(|(f, w)| f * w.sqrt()).collect();
        let n = v.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * v[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * v[i + 1];
                }
                y / self.weights[i].sqrt()
            })
            .collect()
    }
}

pub fn build_problem(rp: &RadialProblem) -> TridiagSystem {
    let n = rp.n_grid;
    let h = rp.h();
    let lambda = rp.surface.lambda();
    let m2 = f64::from(rp.m).powi(2);
    let k = 0.5 * lambda / h;

    // nodes and the faces between consecutive nodes
    let (nodes, weights, left_face, right_face): (Vec<f64>, Vec<f64>, f64, f64) = match rp.offset {
        GridOffset::Staggered => {
            let nodes: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * h).collect();
            let weights = nodes.iter().map(|c| h * c.sin()).collect();
            // left face sits at the pole, right face at the equator
            (nodes, weights, 0.0, 1.0)
        }
        GridOffset::Vertex => {
            let first = if rp.m == 0 { 0 } else { 1 };
            let last = match rp.boundary {
                Boundary::Neumann => n,
                Boundary::Dirichlet => n - 1,
            };
            let nodes: Vec<f64> = (first..=last).map(|j| j as f64 * h).collect();
            let weights = nodes
                .iter()
                .map(|&c| {
                    if c == 0.0 {
                        1.0 - (0.5 * h).cos()
                    } else if (c - FRAC_PI_2).abs() < 0.25 * h {
                        (0.5 * h).sin()
                    } else {
                        h * c.sin()
                    }
                })
                .collect();
            // Dirichlet neighbours sit one full step outside: flux through
            // the face between them and the first/last node.
            let lf = if first == 1 { (0.5 * h).sin() } else { 0.0 };
            let rf = if rp.boundary == Boundary::Dirichlet { (FRAC_PI_2 - 0.5 * h).sin() } else { 0.0 };
            (nodes, weights, lf, rf)
        }
    };

    let dim = nodes.len();
    let face = |i: usize| (0.5 * (nodes[i] + nodes[i + 1])).sin();
    let mut diag = vec![0.0; dim];
    let mut offdiag = vec![0.0; dim.saturating_sub(1)];
    for i in 0..dim {
        let mut flux = 0.0;
        if i > 0 {
            flux += face(i - 1);
        }
        if i + 1 < dim {
            flux += face(i);
        }
        let chi = nodes[i];
        let w = weights[i];
        let centrifugal = if m2 > 0.0 { 0.5 * lambda * m2 / chi.sin().powi(2) } else { 0.0 };
        diag[i] = k * flux / w + centrifugal + rp.potential_at(chi);
        if i + 1 < dim {
            offdiag[i] = -k * face(i) / (w * weights[i + 1]).sqrt();
        }
    }

    match rp.offset {
        GridOffset::Staggered => {
            // pole face has sin 0 = 0; at the equator use the ghost f_N = ±f_{N-1}
            debug_assert_eq!(left_face, 0.0);
            if rp.boundary == Boundary::Dirichlet {
                diag[dim - 1] += 2.0 * k * right_face / weights[dim - 1];
            }
        }
        GridOffset::Vertex => {
            diag[0] += k * left_face / weights[0];
            diag[dim - 1] += k * right_face / weights[dim - 1];
        }
    }

    TridiagSystem { nodes, weights, diag, offdiag }
}

/// The `count` lowest eigenvalues of the discretized problem.
pub fn eigenvalues(rp: &RadialProblem, count: usize) -> Result<Vec<f64>> {
    let sys = build_problem(rp);
    eig_tridiag(&sys.diag, &sys.offdiag, count)
}

/// One sector's spectrum comparison. `rel_err` is relative to
/// max(|reference|, λ) so the zero mode of the free particle is measured on
/// the scale of the level spacing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub sector: String,
    pub grid: usize,
    pub computed: Vec<f64>,
    pub reference: Vec<f64>,
    pub rel_err: Vec<f64>,
    pub pass: bool,
}

impl OracleReport {
    fn new(sector: String, grid: usize, computed: Vec<f64>, reference: Vec<f64>, scale: f64, tol: f64) -> Self {
        let rel_err: Vec<f64> =
            computed.iter().zip(&reference).map(|(c, r)| (c - r).abs() / r.abs().max(scale)).collect();
        let pass = rel_err.iter().all(|e| *e <= tol);
        Self { sector, grid, computed, reference, rel_err, pass }
    }

    pub fn max_rel_err(&self) -> f64 {
        self.rel_err.iter().copied().fold(0.0, f64::max)
    }
}

/// Hemisphere free spectrum of sector m: λN(N+1)/2 for N ≥ m, N − m even.
pub fn free_reference(m: u32, lambda: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let big_n = f64::from(m) + 2.0 * i as f64;
            0.5 * lambda * big_n * (big_n + 1.0)
        })
        .collect()
}

pub fn validate_free(s: &SurfaceParams, m_max: u32, k_eigs: usize) -> Result<Vec<OracleReport>> {
    validate_free_on(s, m_max, k_eigs, DEFAULT_GRID)
}

pub fn validate_free_on(s: &SurfaceParams, m_max: u32, k_eigs: usize, n_grid: usize) -> Result<Vec<OracleReport>> {
    if m_max > 5 || k_eigs > 4 || k_eigs == 0 {
        return Err(domain(format!("validate_free needs m_max <= 5 and 1 <= k_eigs <= 4, got {m_max}, {k_eigs}")));
    }
    (0..=m_max)
        .map(|m| {
            let rp = RadialProblem::free(m, *s, n_grid)?;
            let computed = eigenvalues(&rp, k_eigs)?;
            let reference = free_reference(m, s.lambda(), k_eigs);
            Ok(OracleReport::new(format!("free m={m}"), n_grid, computed, reference, s.lambda(), SPECTRUM_TOL))
        })
        .collect()
}

/// Oscillator spectrum of sector l: levels n = l and n = l + 2.
pub fn osc_reference(l: u32, p: &OscParams) -> Result<Vec<f64>> {
    let li = l as i32;
    Ok(vec![energy0(&OscState::new(l, li)?, p), energy0(&OscState::new(l + 2, li)?, p)])
}

/// Oscillator checks under both coupling readings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscValidation {
    pub omega: f64,
    pub lambda: f64,
    pub squared: Vec<OracleReport>,
    pub literal: Vec<OracleReport>,
    /// Readings whose grid spectrum matches the closed form in every sector.
    pub matching: Vec<Coupling>,
    /// Largest relative mismatch under the literal reading.
    pub literal_max_rel_err: f64,
}

impl OscValidation {
    pub fn squared_pass(&self) -> bool {
        self.squared.iter().all(|r| r.pass)
    }
}

pub fn validate_osc(s: &SurfaceParams, omega: f64, l_max: u32) -> Result<OscValidation> {
    validate_osc_on(s, omega, l_max, DEFAULT_GRID)
}

pub fn validate_osc_on(s: &SurfaceParams, omega: f64, l_max: u32, n_grid: usize) -> Result<OscValidation> {
    if l_max > 4 {
        return Err(domain(format!("validate_osc needs l_max <= 4, got {l_max}")));
    }
    let run = |coupling: Coupling| -> Result<Vec<OracleReport>> {
        let p = OscParams::new(omega, *s, coupling)?;
        (0..=l_max)
            .map(|l| {
                let rp = RadialProblem::oscillator(l, &p, n_grid)?;
                let computed = eigenvalues(&rp, 2)?;
                let reference = osc_reference(l, &p)?;
                let name = format!("osc l={l} coupling={}", coupling_name(coupling));
                Ok(OracleReport::new(name, n_grid, computed, reference, s.lambda(), SPECTRUM_TOL))
            })
            .collect()
    };
    let squared = run(Coupling::Squared)?;
    let literal = run(Coupling::Literal)?;
    let mut matching = Vec::new();
    if squared.iter().all(|r| r.pass) {
        matching.push(Coupling::Squared);
    }
    if literal.iter().all(|r| r.pass) {
        matching.push(Coupling::Literal);
    }
    let literal_max_rel_err = literal.iter().map(OracleReport::max_rel_err).fold(0.0, f64::max);
    Ok(OscValidation { omega, lambda: s.lambda(), squared, literal, matching, literal_max_rel_err })
}

fn coupling_name(c: Coupling) -> &'static str {
    match c {
        Coupling::Squared => "squared",
        Coupling::Literal => "literal",
    }
}

/// Eigenvalue error against a reference over a sequence of grids, with the
/// least-squares slope of log(error) against log(h).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub grids: Vec<usize>,
    pub errors: Vec<f64>,
    pub slope: f64,
}

pub fn convergence_study(
    rp: &RadialProblem,
    index: usize,
    reference: f64,
    grids: &[usize],
) -> Result<ConvergenceStudy> {
    if grids.len() < 2 {
        return Err(domain("convergence_study needs at least two grids"));
    }
    let mut errors = Vec::with_capacity(grids.len());
    for &g in grids {
        let ev = eigenvalues(&rp.with_grid(g)?, index + 1)?;
        errors.push((ev[index] - reference).abs());
    }
    let xs: Vec<f64> = grids.iter().map(|&g| (FRAC_PI_2 / g as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(ConvergenceStudy { grids: grids.to_vec(), errors, slope: sxy / sxx })
}

/// Which eigenstate a grid matrix element is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ShiftTarget {
    /// Free state ψ_n: lowest mode of sector m = n.
    Free { n: u32 },
    /// Oscillator state (n, l): mode k_r of sector |l|.
    Oscillator { state: OscState, params: OscParams },
}

impl ShiftTarget {
    fn sector(&self) -> u32 {
        match self {
            ShiftTarget::Free { n } => *n,
            ShiftTarget::Oscillator { state, .. } => state.abs_l(),
        }
    }

    fn mode(&self) -> usize {
        match self {
            ShiftTarget::Free { .. } => 0,
            ShiftTarget::Oscillator { state, .. } => state.k_r() as usize,
        }
    }

    /// The matching radial problem on `n_grid` points.
    pub fn problem(&self, surface: &SurfaceParams, n_grid: usize) -> Result<RadialProblem> {
        match self {
            ShiftTarget::Free { n } => RadialProblem::free(*n, *surface, n_grid),
            ShiftTarget::Oscillator { state, params } => {
                RadialProblem::oscillator(state.abs_l(), &params.with_surface(*surface)?, n_grid)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridShift {
    pub value: f64,
    /// Richardson estimate from the half grid, |S_N − S_{N/2}|/3.
    pub err_est: f64,
}

/// First-order shift ⟨ψ|Ĥ_ε|ψ⟩ from a grid eigenvector, with discrete
/// derivatives and the discrete measure. Ĥ_ε is
/// −(ε/2)(1+λρ²)p̂₀² − (ε k/2)[1 + 1/(1+λρ²)]ρ², the kinetic part as the
/// symmetrized tangent-plane form.
pub fn grid_shift(target: &ShiftTarget, rp: &RadialProblem) -> Result<GridShift> {
    if rp.n_grid < MIN_SHIFT_GRID {
        return Err(domain(format!("grid_shift needs n_grid >= {MIN_SHIFT_GRID}, got {}", rp.n_grid)));
    }
    if rp.offset != GridOffset::Staggered {
        return Err(domain("grid_shift works on the staggered grid"));
    }
    if rp.m != target.sector() {
        return Err(domain(format!(
            "problem sector m = {} does not match the target sector {}",
            rp.m,
            target.sector()
        )));
    }
    let expected_boundary = match target {
        ShiftTarget::Free { .. } => Boundary::Neumann,
        ShiftTarget::Oscillator { .. } => Boundary::Dirichlet,
    };
    if rp.boundary != expected_boundary {
        return Err(domain("problem boundary does not match the target"));
    }
    let fine = shift_on_grid(target, rp)?;
    let coarse = shift_on_grid(target, &rp.with_grid(rp.n_grid / 2)?)?;
    let err_est = (fine - coarse).abs() / 3.0;
    let rel = if fine == 0.0 { err_est } else { err_est / fine.abs() };
    if rel > SHIFT_RESOLUTION_LIMIT {
        return Err(Error::Resolution { estimate: rel, limit: SHIFT_RESOLUTION_LIMIT });
    }
    Ok(GridShift { value: fine, err_est })
}

fn shift_on_grid(target: &ShiftTarget, rp: &RadialProblem) -> Result<f64> {
    let s = rp.surface;
    let (lambda, eps) = (s.lambda(), s.eps());
    let stiffness = match rp.potential {
        PotentialKind::Free => 0.0,
        PotentialKind::Oscillator { omega, coupling } => coupling.stiffness(omega),
    };
    let sys = build_problem(rp);
    let mode = target.mode();
    let evs = eig_tridiag(&sys.diag, &sys.offdiag, mode + 1)?;
    let v = eigvec_tridiag(&sys.diag, &sys.offdiag, evs[mode])?;
    let n = sys.dim();
    let h = rp.h();

    let mut r: Vec<f64> = v.iter().zip(&sys.nodes).map(|(v, c)| v / c.sin().sqrt()).collect();
    let mass: f64 = r.iter().zip(&sys.nodes).map(|(r, c)| r * r * c.sin()).sum::<f64>() * h * TAU / lambda;
    let scale = mass.sqrt();
    r.iter_mut().for_each(|x| *x /= scale);

    let m = f64::from(rp.m);
    let pole_ghost = if rp.m.is_multiple_of(2) { r[0] } else { -r[0] };
    let equator_ghost = match rp.boundary {
        Boundary::Neumann => r[n - 1],
        Boundary::Dirichlet => -r[n - 1],
    };
    let mut kinetic = 0.0;
    let mut potential = 0.0;
    for j in 0..n {
        let chi = sys.nodes[j];
        let (sn, c) = chi.sin_cos();
        let prev = if j == 0 { pole_ghost } else { r[j - 1] };
        let next = if j + 1 == n { equator_ghost } else { r[j + 1] };
        let dr = (next - prev) / (2.0 * h);
        // g^{1/4} = cos^{3/2}χ and g^{1/4}(1+λρ²) = cos^{-1/2}χ with χ-derivatives
        let g = c.powf(1.5);
        let dg = -1.5 * c.sqrt() * sn;
        let gf = c.powf(-0.5);
        let dgf = 0.5 * c.powf(-1.5) * sn;
        let a = lambda.sqrt() * c * c * (dgf * r[j] + gf * dr);
        let b = lambda.sqrt() * c * c * (dg * r[j] + g * dr);
        let rho2 = chi.tan().powi(2) / lambda;
        let centrifugal = if m > 0.0 { m * m / rho2 * g * g / (c * c) * r[j] * r[j] } else { 0.0 };
        // flat measure ρ dρ dφ = 2π tan χ /(λ cos²χ) dχ
        kinetic += (a * b + centrifugal) * TAU * chi.tan() / (c * c * lambda);
        potential += (c * c + 1.0) * rho2 * r[j] * r[j] * sn;
    }
    let kinetic = -0.5 * eps * kinetic * h;
    let potential = -0.5 * eps * stiffness * potential * h * TAU / lambda;
    Ok(kinetic + potential)
}

/// Energy of radial samples f under the discrete operator (weighted
/// Rayleigh quotient) and its relative deviation from `energy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub rayleigh: f64,
    pub rel_residual: f64,
}

pub fn eigen_residual(rp: &RadialProblem, f: impl Fn(f64) -> f64, energy: f64) -> Residual {
    let sys = build_problem(rp);
    let samples: Vec<f64> = sys.nodes.iter().map(|&c| f(c)).collect();
    let hf = sys.apply_radial(&samples);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..samples.len() {
        let w = sys.weights[i];
        num += w * samples[i] * hf[i];
        den += w * samples[i] * samples[i];
    }
    let rayleigh = num / den;
    Residual { rayleigh, rel_residual: rel_diff(rayleigh, energy) }
}

/// Error of the shift pipelines against each other, relative to the larger.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_particle::{shift1_closed, FreeState};
    use crate::numerics::QuadratureSpec;
    use crate::oscillator::{eigenstate, shift_total};

    fn sphere(lambda: f64) -> SurfaceParams {
        SurfaceParams::sphere(lambda).unwrap()
    }

    fn osc(lambda: f64, omega: f64, eps: f64, coupling: Coupling) -> OscParams {
        OscParams::new(omega, SurfaceParams::from_curvature(lambda, eps).unwrap(), coupling).unwrap()
    }

    #[test]
    fn build_shape_and_symmetry() {
        let rp = RadialProblem::free(2, sphere(1.0), 500).unwrap();
        let sys = build_problem(&rp);
        assert_eq!(sys.dim(), 500);
        assert_eq!(sys.offdiag.len(), 499);
        assert!(RadialProblem::free(0, sphere(1.0), 99).is_err());
    }

    #[test]
    fn free_zero_mode() {
        let rp = RadialProblem::free(0, sphere(1.0), 4000).unwrap();
        assert!(eigenvalues(&rp, 1).unwrap()[0].abs() < 1e-6);
    }

    #[test]
    fn free_examples() {
        let reps = validate_free(&sphere(1.0), 1, 3).unwrap();
        let c = &reps[0].computed;
        for (got, want) in c.iter().zip([0.0, 3.0, 10.0]) {
            assert!((got - want).abs() < 1e-3 * want.max(1.0));
        }
        assert!((reps[1].computed[0] - 1.0).abs() < 1e-3);
        let reps = validate_free(&sphere(2.0), 2, 1).unwrap();
        assert!((reps[2].computed[0] - 6.0).abs() < 6e-3);
        assert!(reps.iter().all(|r| r.pass));
        assert!(validate_free(&sphere(1.0), 6, 3).is_err());
    }

    #[test]
    fn osc_examples() {
        let v = validate_osc(&sphere(1.0), 1.0, 0).unwrap();
        let c = &v.squared[0].computed;
        assert!((c[0] - 1.618_033_988_749_895).abs() < 1.7e-3);
        assert!((c[1] - 7.854_101_966_249_685).abs() < 7.9e-3);
        let v = validate_osc(&sphere(0.8), 1.4, 1).unwrap();
        assert!((v.squared[1].computed[0] - 4.512_043_956).abs() < 4.6e-3);
        assert!(v.squared_pass());
    }

    #[test]
    fn coupling_certification() {
        let v = validate_osc(&sphere(1.0), 1.4, 3).unwrap();
        assert_eq!(v.matching, vec![Coupling::Squared]);
        assert!(v.literal_max_rel_err > 0.01);
    }

    #[test]
    fn second_order_convergence() {
        let rp = RadialProblem::free(1, sphere(1.0), 500).unwrap();
        let st = convergence_study(&rp, 1, 6.0, &[500, 1000, 2000, 4000]).unwrap();
        assert!((st.slope - 2.0).abs() < 0.2, "{st:?}");
        let p = osc(1.0, 1.0, 0.0, Coupling::Squared);
        let rp = RadialProblem::oscillator(0, &p, 500).unwrap();
        let st = convergence_study(&rp, 0, 1.618_033_988_749_895, &[500, 1000, 2000, 4000]).unwrap();
        assert!((st.slope - 2.0).abs() < 0.2, "{st:?}");
    }

    #[test]
    fn offset_independence() {
        for m in 0..3 {
            let rp = RadialProblem::free(m, sphere(1.0), 2000).unwrap();
            let a = eigenvalues(&rp, 3).unwrap();
            let b = eigenvalues(&rp.with_offset(GridOffset::Vertex), 3).unwrap();
            let refs = free_reference(m, 1.0, 3);
            for i in 0..3 {
                let scale = refs[i].max(1.0);
                let disc = (a[i] - refs[i]).abs().max((b[i] - refs[i]).abs());
                assert!((a[i] - b[i]).abs() <= 2.0 * disc + 1e-9 * scale, "m = {m}: {a:?} vs {b:?}");
                assert!((b[i] - refs[i]).abs() < 1e-3 * scale);
            }
        }
        let p = osc(1.0, 1.0, 0.0, Coupling::Squared);
        let rp = RadialProblem::oscillator(1, &p, 2000).unwrap();
        let b = eigenvalues(&rp.with_offset(GridOffset::Vertex), 2).unwrap();
        let refs = osc_reference(1, &p).unwrap();
        assert!((b[0] - refs[0]).abs() < 1e-3 * refs[0]);
    }

    #[test]
    fn free_grid_shift() {
        let s = SurfaceParams::from_curvature(1.0, 0.1).unwrap();
        for n in 0..4 {
            let t = ShiftTarget::Free { n };
            let g = grid_shift(&t, &t.problem(&s, 4000).unwrap()).unwrap();
            let c = shift1_closed(&FreeState::new(n, s).unwrap()).unwrap();
            assert!(rel_diff(g.value, c) < 1e-4, "n = {n}: {} vs {c}", g.value);
        }
        let flat = sphere(1.0);
        let t = ShiftTarget::Free { n: 2 };
        assert_eq!(grid_shift(&t, &t.problem(&flat, 4000).unwrap()).unwrap().value, 0.0);
    }

    #[test]
    fn osc_grid_shift() {
        let p = osc(1.0, 1.0, 0.1, Coupling::Squared);
        let spec = QuadratureSpec::default();
        for (n, l) in [(0, 0), (2, 0), (3, -1), (4, 2)] {
            let e = eigenstate(n, l, &p, &spec).unwrap();
            let t = ShiftTarget::Oscillator { state: *e.state(), params: p };
            let g = grid_shift(&t, &t.problem(p.surface(), 4000).unwrap()).unwrap();
            let q = shift_total(&e, &spec).unwrap().value;
            assert!(rel_diff(g.value, q) < 1e-4, "({n}, {l}): {} vs {q}", g.value);
        }
    }

    #[test]
    fn grid_shift_rejects_mismatch_and_small_grid() {
        let s = SurfaceParams::from_curvature(1.0, 0.1).unwrap();
        let t = ShiftTarget::Free { n: 1 };
        assert!(grid_shift(&t, &RadialProblem::free(2, s, 4000).unwrap()).is_err());
        assert!(grid_shift(&t, &RadialProblem::free(1, s, 1000).unwrap()).is_err());
    }

    #[test]
    fn oscillator_eigen_residual() {
        let p = osc(1.0, 1.0, 0.0, Coupling::Squared);
        let spec = QuadratureSpec::default();
        for (n, l) in [(0, 0), (1, 1), (2, 0), (4, 2)] {
            let e = eigenstate(n, l, &p, &spec).unwrap();
            let rp = RadialProblem::oscillator(e.state().abs_l(), &p, 4000).unwrap();
            let e0 = energy0(e.state(), &p);
            let r = eigen_residual(&rp, |c| e.radial(c).unwrap(), e0);
            assert!(r.rel_residual < 1e-3, "({n}, {l}): {r:?}");
        }
    }
}
