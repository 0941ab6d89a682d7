//! Spheroid, enclosing sphere and gnomonic tangent plane.
//!
//! A spheroid with polar radius `a` and equatorial radius `b` is mapped onto
//! the sphere of radius `a` by scaling the equatorial coordinates by a/b, and
//! the sphere is mapped onto the plane tangent at the north pole by central
//! (gnomonic) projection. Tangent-plane coordinates (x, y) then chart the
//! upper or lower half of either surface.
//!
//! The curvature λ = 1/a² and the squared second eccentricity ε = a²/b² − 1
//! are the two parameters everything downstream is written in.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerance on the implicit spheroid equation for incoming points.
pub const ON_SURFACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceParams {
    a: f64,
    b: f64,
    lambda: f64,
    eps: f64,
}

impl SurfaceParams {
    /// From polar radius `a` and equatorial radius `b`.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
            return Err(domain(format!("radii must be positive and finite, got a = {a}, b = {b}")));
        }
        Ok(Self { a, b, lambda: 1.0 / (a * a), eps: (a * a) / (b * b) - 1.0 })
    }

    /// From curvature λ > 0 and eccentricity parameter ε > −1.
    pub fn from_curvature(lambda: f64, eps: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain(format!("curvature must be positive, got {lambda}")));
        }
        if !(eps > -1.0 && eps.is_finite()) {
            return Err(domain(format!("eps must exceed -1, got {eps}")));
        }
        let a = 1.0 / lambda.sqrt();
        Ok(Self { a, b: a / (1.0 + eps).sqrt(), lambda, eps })
    }

    pub fn sphere(lambda: f64) -> Result<Self> {
        Self::from_curvature(lambda, 0.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn is_sphere(&self) -> bool {
        self.eps == 0.0
    }

    /// Same curvature, different eccentricity.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::from_curvature(self.lambda, eps)
    }
}

/// How the printed oscillator prefactor is read.
///
/// `Squared` takes the potential as (ω²/2)ρ², the reading under which the
/// sphere spectrum is (n+1)Ω + λ(n+1)²/2 with Ω = √(ω² + λ²/4). `Literal`
/// takes (ω/2)ρ² and exists for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    #[default]
    Squared,
    Literal,
}

impl Coupling {
    /// Coefficient k in V = (k/2) ρ².
    pub fn stiffness(self, omega: f64) -> f64 {
        match self {
            Coupling::Squared => omega * omega,
            Coupling::Literal => omega,
        }
    }
}

impl std::str::FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squared" => Ok(Coupling::Squared),
            "literal" => Ok(Coupling::Literal),
            other => Err(domain(format!("unknown coupling '{other}' (expected squared|literal)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentPoint {
    pub x: f64,
    pub y: f64,
}

impl TangentPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(rho: f64, phi: f64) -> Self {
        Self { x: rho * phi.cos(), y: rho * phi.sin() }
    }

    pub fn rho(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn rho_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Azimuth in [0, 2π).
    pub fn phi(&self) -> f64 {
        let p = self.y.atan2(self.x);
        if p < 0.0 {
            p + TAU
        } else {
            p
        }
    }

    /// Polar angle on the enclosing sphere, tan²χ = λρ².
    pub fn chi(&self, lambda: f64) -> f64 {
        (lambda.sqrt() * self.rho()).atan()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sheet {
    Upper,
    Lower,
}

impl Sheet {
    fn sign(self) -> f64 {
        match self {
            Sheet::Upper => 1.0,
            Sheet::Lower => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddedPoint {
    pub q: [f64; 3],
    pub sheet: Sheet,
}

impl EmbeddedPoint {
    pub fn new(q1: f64, q2: f64, q3: f64) -> Self {
        let sheet = if q3 < 0.0 { Sheet::Lower } else { Sheet::Upper };
        Self { q: [q1, q2, q3], sheet }
    }

    /// |(q1² + q2²)/b² + q3²/a² − 1|
    pub fn spheroid_residual(&self, s: &SurfaceParams) -> f64 {
        let [q1, q2, q3] = self.q;
        ((q1 * q1 + q2 * q2) / (s.b * s.b) + q3 * q3 / (s.a * s.a) - 1.0).abs()
    }

    /// |q·q / a² − 1|, the residual on the enclosing sphere.
    pub fn sphere_residual(&self, s: &SurfaceParams) -> f64 {
        let n2: f64 = self.q.iter().map(|v| v * v).sum();
        (n2 / (s.a * s.a) - 1.0).abs()
    }
}

/// Scale the equatorial coordinates by a/b, landing on the sphere of radius a.
pub fn project_spheroid_to_sphere(p: &EmbeddedPoint, s: &SurfaceParams) -> Result<EmbeddedPoint> {
    let r = p.spheroid_residual(s);
    if !(r <= ON_SURFACE_TOL) {
        return Err(Error::Validation(format!("point {:?} is off the spheroid (residual {r:e})", p.q)));
    }
    let k = s.a / s.b;
    Ok(EmbeddedPoint { q: [k * p.q[0], k * p.q[1], p.q[2]], sheet: p.sheet })
}

pub fn tangent_to_spheroid(t: &TangentPoint, s: &SurfaceParams, sheet: Sheet) -> EmbeddedPoint {
    let d = (s.a * s.a + t.rho_sq()).sqrt();
    EmbeddedPoint { q: [s.b * t.x / d, s.b * t.y / d, sheet.sign() * s.a * s.a / d], sheet }
}

pub fn tangent_to_sphere(t: &TangentPoint, s: &SurfaceParams, sheet: Sheet) -> EmbeddedPoint {
    let d = (s.a * s.a + t.rho_sq()).sqrt();
    EmbeddedPoint { q: [s.a * t.x / d, s.a * t.y / d, sheet.sign() * s.a * s.a / d], sheet }
}

/// Inverse gnomonic projection from the sphere of radius a.
pub fn sphere_to_tangent(p: &EmbeddedPoint, s: &SurfaceParams) -> Result<TangentPoint> {
    let [q1, q2, q3] = p.q;
    if q3 == 0.0 {
        return Err(domain("points on the equator have no gnomonic image"));
    }
    let k = s.a / q3.abs();
    Ok(TangentPoint::new(k * q1, k * q2))
}

/// Symmetric 2×2 metric components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricTensor2 {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl MetricTensor2 {
    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let tr = self.g11 + self.g22;
        let disc = (0.25 * (self.g11 - self.g22).powi(2) + self.g12 * self.g12).sqrt();
        (0.5 * tr - disc, 0.5 * tr + disc)
    }

    pub fn quadratic_form(&self, v: [f64; 2]) -> f64 {
        self.g11 * v[0] * v[0] + 2.0 * self.g12 * v[0] * v[1] + self.g22 * v[1] * v[1]
    }
}

/// Induced metric of the spheroid in tangent-plane coordinates:
/// G = [δ − λ x xᵀ/(1+λρ²) · (1 − ε/(1+λρ²))] / ((1+λρ²)(1+ε)).
pub fn metric_tangent(t: &TangentPoint, s: &SurfaceParams) -> MetricTensor2 {
    let w = 1.0 + s.lambda * t.rho_sq();
    let mu = s.lambda / w * (1.0 - s.eps / w);
    let pre = 1.0 / (w * (1.0 + s.eps));
    MetricTensor2 { g11: pre * (1.0 - mu * t.x * t.x), g12: -pre * mu * t.x * t.y, g22: pre * (1.0 - mu * t.y * t.y) }
}

/// Metric in the (q1, q2) chart of the upper spheroid, defined inside the
/// equator: δ + (a/b)² q qᵀ / (b² − q1² − q2²).
pub fn metric_spheroid_coords(q1: f64, q2: f64, s: &SurfaceParams) -> Result<MetricTensor2> {
    let gap = s.b * s.b - q1 * q1 - q2 * q2;
    if !(gap > 0.0) {
        return Err(domain(format!("(q1, q2) = ({q1}, {q2}) is on or outside the equator")));
    }
    let k = (s.a / s.b).powi(2) / gap;
    Ok(MetricTensor2 { g11: 1.0 + k * q1 * q1, g12: k * q1 * q2, g22: 1.0 + k * q2 * q2 })
}

/// First fundamental form of [`tangent_to_spheroid`] from a central
/// difference Jacobian, step 1e−5·(1 + ρ). An oracle for [`metric_tangent`].
pub fn metric_fd(t: &TangentPoint, s: &SurfaceParams) -> MetricTensor2 {
    let h = 1e-5 * (1.0 + t.rho());
    let col = |dx: f64, dy: f64| -> [f64; 3] {
        let p = tangent_to_spheroid(&TangentPoint::new(t.x + dx, t.y + dy), s, Sheet::Upper).q;
        let m = tangent_to_spheroid(&TangentPoint::new(t.x - dx, t.y - dy), s, Sheet::Upper).q;
        [0, 1, 2].map(|i| (p[i] - m[i]) / (2.0 * h))
    };
    let (jx, jy) = (col(h, 0.0), col(0.0, h));
    let dot3 = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    MetricTensor2 { g11: dot3(jx, jx), g12: dot3(jx, jy), g22: dot3(jy, jy) }
}

/// Determinant of the sphere metric, (1 + λρ²)⁻³.
pub fn sphere_measure(rho: f64, lambda: f64) -> f64 {
    (1.0 + lambda * rho * rho).powi(-3)
}

/// Oscillator potential in tangent-plane coordinates,
/// (k/2) ρ² ((1+ε)⁻¹ + λρ²)/(1 + λρ²).
pub fn potential_osc(t: &TangentPoint, s: &SurfaceParams, omega: f64, coupling: Coupling) -> f64 {
    let r2 = t.rho_sq();
    let lr2 = s.lambda * r2;
    0.5 * coupling.stiffness(omega) * r2 * (1.0 / (1.0 + s.eps) + lr2) / (1.0 + lr2)
}

/// The same potential written in the (q1, q2) chart: (k/2) 𝒢_{αβ} q_α q_β.
pub fn potential_spheroid_coords(q1: f64, q2: f64, s: &SurfaceParams, omega: f64, coupling: Coupling) -> Result<f64> {
    let g = metric_spheroid_coords(q1, q2, s)?;
    Ok(0.5 * coupling.stiffness(omega) * g.quadratic_form([q1, q2]))
}

/// Position and velocity in the tangent plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalState {
    pub pos: [f64; 2],
    pub vel: [f64; 2],
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Momenta {
    /// Conjugate momentum of the full spheroid Lagrangian (exact in ε).
    pub p: [f64; 2],
    /// Momentum of the same motion on the sphere.
    pub p0: [f64; 2],
}

pub fn classical_momenta(c: &ClassicalState, s: &SurfaceParams) -> Momenta {
    let x = c.pos;
    let v = c.vel;
    let w = 1.0 + s.lambda * dot(x, x);
    let xv = dot(x, v);
    let sphere = |k: f64| -> [f64; 2] {
        let f = s.lambda * xv * k / w;
        [(v[0] - f * x[0]) / w, (v[1] - f * x[1]) / w]
    };
    let p0 = sphere(1.0);
    let pe = sphere(1.0 - s.eps / w);
    Momenta { p: [pe[0] / (1.0 + s.eps), pe[1] / (1.0 + s.eps)], p0 }
}

/// Kinetic energy ½ ẋᵀ G ẋ with G from [`metric_tangent`], written out.
pub fn kinetic_energy(c: &ClassicalState, s: &SurfaceParams) -> f64 {
    let w = 1.0 + s.lambda * dot(c.pos, c.pos);
    let xv = dot(c.pos, c.vel);
    let bracket = dot(c.vel, c.vel) - s.lambda * xv * xv / w * (1.0 - s.eps / w);
    0.5 * bracket / (w * (1.0 + s.eps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hamiltonians {
    /// Legendre transform of the exact Lagrangian, T + V.
    pub h_exact: f64,
    /// Sphere Hamiltonian ½(π² + λL²) + (k/2)ρ² at the sphere momentum.
    pub h0: f64,
    /// First-order correction consistent with the exact T and V:
    /// −(ε/2)(1+λρ²) p0² − ε (k/2) ρ²/(1+λρ²).
    pub h_eps: f64,
    /// Correction with the bracket [1/(1+λρ²) + 1] in the potential part, as
    /// used by the quantum perturbation; differs from `h_eps` at first order.
    pub h_eps_printed: f64,
}

pub fn classical_hamiltonians(c: &ClassicalState, s: &SurfaceParams, omega: f64, coupling: Coupling) -> Hamiltonians {
    let k = coupling.stiffness(omega);
    let x = c.pos;
    let r2 = dot(x, x);
    let w = 1.0 + s.lambda * r2;

    let t = TangentPoint::new(x[0], x[1]);
    let h_exact = kinetic_energy(c, s) + potential_osc(&t, s, omega, coupling);

    let p0 = classical_momenta(c, s).p0;
    let xp = dot(x, p0);
    let pi = [p0[0] + s.lambda * x[0] * xp, p0[1] + s.lambda * x[1] * xp];
    let ang = x[0] * p0[1] - x[1] * p0[0];
    let h0 = 0.5 * (dot(pi, pi) + s.lambda * ang * ang) + 0.5 * k * r2;

    let kin = -0.5 * s.eps * w * dot(p0, p0);
    let h_eps = kin - 0.5 * s.eps * k * r2 / w;
    let h_eps_printed = kin - 0.5 * s.eps * k * (1.0 / w + 1.0) * r2;
    Hamiltonians { h_exact, h0, h_eps, h_eps_printed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_params_invariants() {
        let s = SurfaceParams::new(2.0, 1.0).unwrap();
        assert_eq!(s.lambda(), 0.25);
        assert_eq!(s.eps(), 3.0);
        let sp = SurfaceParams::new(1.5, 1.5).unwrap();
        assert!(sp.is_sphere());
        let prolate = SurfaceParams::new(1.0, 2.0).unwrap();
        assert!(prolate.eps() < 0.0 && prolate.eps() > -1.0);
        assert!(SurfaceParams::new(0.0, 1.0).is_err());
        assert!(SurfaceParams::from_curvature(1.0, -1.0).is_err());
        assert!(SurfaceParams::from_curvature(-1.0, 0.0).is_err());
        let c = SurfaceParams::from_curvature(0.8, 0.1).unwrap();
        assert!((c.a() * c.a() * 0.8 - 1.0).abs() < 1e-15);
        assert!(((c.a() / c.b()).powi(2) - 1.1).abs() < 1e-14);
    }

    #[test]
    fn tangent_point_angles() {
        let t = TangentPoint::new(0.0, -1.0);
        assert!((t.phi() - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        let t = TangentPoint::new(1.0, 0.0);
        let chi = t.chi(1.0);
        assert!((chi.sin().powi(2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projection_examples() {
        let s = SurfaceParams::new(2.0, 1.0).unwrap();
        let eq = EmbeddedPoint::new(1.0, 0.0, 0.0);
        let q = project_spheroid_to_sphere(&eq, &s).unwrap();
        assert_eq!(q.q, [2.0, 0.0, 0.0]);
        let pole = EmbeddedPoint::new(0.0, 0.0, 2.0);
        assert_eq!(project_spheroid_to_sphere(&pole, &s).unwrap().q, [0.0, 0.0, 2.0]);
        let off = EmbeddedPoint::new(1.0, 1.0, 0.0);
        assert!(matches!(project_spheroid_to_sphere(&off, &s), Err(Error::Validation(_))));
    }

    #[test]
    fn tangent_to_spheroid_examples() {
        let s = SurfaceParams::new(1.0, 2.0).unwrap();
        let p = tangent_to_spheroid(&TangentPoint::new(0.0, 0.0), &s, Sheet::Upper);
        assert_eq!(p.q, [0.0, 0.0, 1.0]);
        let p = tangent_to_spheroid(&TangentPoint::new(1.0, 0.0), &s, Sheet::Upper);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.q[0] - 2.0 * r).abs() < 1e-15);
        assert_eq!(p.q[1], 0.0);
        assert!((p.q[2] - r).abs() < 1e-15);
        let low = tangent_to_spheroid(&TangentPoint::new(0.3, 0.2), &s, Sheet::Lower);
        assert!(low.q[2] < 0.0 && low.spheroid_residual(&s) < 1e-14);
    }

    #[test]
    fn metric_examples() {
        let s = SurfaceParams::from_curvature(1.0, 0.3).unwrap();
        let g = metric_tangent(&TangentPoint::new(0.0, 0.0), &s);
        assert!((g.g11 - 1.0 / 1.3).abs() < 1e-15 && (g.g22 - 1.0 / 1.3).abs() < 1e-15);
        assert_eq!(g.g12, 0.0);

        let sphere = SurfaceParams::sphere(1.0).unwrap();
        let g = metric_tangent(&TangentPoint::new(1.0, 0.0), &sphere);
        assert!((g.g11 - 0.25).abs() < 1e-15);
        assert!((g.g22 - 0.5).abs() < 1e-15);
        assert_eq!(g.g12, 0.0);
    }

    #[test]
    fn metric_matches_embedding_jacobian() {
        let s = SurfaceParams::from_curvature(0.7, 0.25).unwrap();
        for (x, y) in [(0.0, 0.0), (0.3, -1.2), (2.0, 1.5), (-0.8, 0.1)] {
            let t = TangentPoint::new(x, y);
            let (a, b) = (metric_tangent(&t, &s), metric_fd(&t, &s));
            assert!((a.g11 - b.g11).abs() < 1e-7);
            assert!((a.g12 - b.g12).abs() < 1e-7);
            assert!((a.g22 - b.g22).abs() < 1e-7);
        }
    }

    #[test]
    fn spheroid_chart_metric_examples() {
        let s = SurfaceParams::new(2.0, 1.5).unwrap();
        let g = metric_spheroid_coords(0.0, 0.0, &s).unwrap();
        assert_eq!((g.g11, g.g12, g.g22), (1.0, 0.0, 1.0));
        let sp = SurfaceParams::new(2.0, 2.0).unwrap();
        let g = metric_spheroid_coords(1.2, 0.0, &sp).unwrap();
        assert!((g.g11 - (1.0 + 1.44 / (4.0 - 1.44))).abs() < 1e-15);
        assert!(metric_spheroid_coords(1.5, 0.0, &s).is_err());
        assert!(metric_spheroid_coords(1.2, 1.2, &s).is_err());
    }

    #[test]
    fn potential_examples() {
        let s = SurfaceParams::from_curvature(0.7, 0.25).unwrap();
        let origin = TangentPoint::new(0.0, 0.0);
        assert_eq!(potential_osc(&origin, &s, 1.3, Coupling::Squared), 0.0);

        let sphere = SurfaceParams::sphere(0.7).unwrap();
        for rho in [0.1, 1.0, 7.0] {
            let t = TangentPoint::from_polar(rho, 0.4);
            let v = potential_osc(&t, &sphere, 1.3, Coupling::Squared);
            assert!((v - 0.5 * 1.69 * rho * rho).abs() < 1e-12 * v);
        }
        // λρ² = 1e8: the (1+ε)⁻¹ term is suppressed
        let rho = (1e8f64 / 0.7).sqrt();
        let t = TangentPoint::new(rho, 0.0);
        let ratio = potential_osc(&t, &s, 1.0, Coupling::Squared) / (0.5 * rho * rho);
        assert!((ratio - 1.0).abs() < 1e-6);

        let lit = potential_osc(&TangentPoint::new(1.0, 0.0), &sphere, 2.0, Coupling::Literal);
        assert!((lit - 1.0).abs() < 1e-15);
    }

    #[test]
    fn momenta_examples() {
        let s = SurfaceParams::from_curvature(1.0, 0.2).unwrap();
        let rest = ClassicalState { pos: [0.3, -0.4], vel: [0.0, 0.0] };
        let m = classical_momenta(&rest, &s);
        assert_eq!(m.p, [0.0, 0.0]);
        assert_eq!(m.p0, [0.0, 0.0]);

        let sphere = SurfaceParams::sphere(1.0).unwrap();
        let c = ClassicalState { pos: [0.3, -0.4], vel: [1.1, 0.7] };
        let m = classical_momenta(&c, &sphere);
        assert!((m.p[0] - m.p0[0]).abs() < 1e-15 && (m.p[1] - m.p0[1]).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_examples() {
        let sphere = SurfaceParams::sphere(0.9).unwrap();
        let c = ClassicalState { pos: [0.3, -0.4], vel: [1.1, 0.7] };
        let h = classical_hamiltonians(&c, &sphere, 1.2, Coupling::Squared);
        assert!((h.h_exact - h.h0).abs() < 1e-14);
        assert_eq!(h.h_eps, 0.0);

        let s = SurfaceParams::from_curvature(0.9, 0.05).unwrap();
        let c = ClassicalState { pos: [0.0, 0.0], vel: [0.6, -0.8] };
        let h = classical_hamiltonians(&c, &s, 0.0, Coupling::Squared);
        assert!((h.h_exact - 0.5 / 1.05).abs() < 1e-15);
        let sphere_h = classical_hamiltonians(&c, &sphere, 0.0, Coupling::Squared);
        assert!((sphere_h.h_exact - 0.5).abs() < 1e-15);
    }

    #[test]
    fn coupling_parses() {
        assert_eq!("squared".parse::<Coupling>().unwrap(), Coupling::Squared);
        assert_eq!("literal".parse::<Coupling>().unwrap(), Coupling::Literal);
        assert!("omega".parse::<Coupling>().is_err());
    }
}
