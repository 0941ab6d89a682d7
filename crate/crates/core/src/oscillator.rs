//! Higgs oscillator on the sphere and its first-order shifts on the spheroid.
//!
//! Radial factors depend on |l| only; the sign of l lives in e^{ilφ}. The
//! radial polynomial degree is k_r = (n − |l|)/2.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::{domain, Result};
use crate::geometry::{Coupling, SurfaceParams};
use crate::numerics::{integrate, Integral, QuadratureSpec};
use crate::specfun::{gamma_ratio, hyp2f1_terminating, jacobi_p, log_gamma, JacobiParams};
use crate::table::{LevelRow, LevelTable, TableKind};

/// Relative tolerance for the closed-form normalization check.
pub const NORM_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscParams {
    omega: f64,
    surface: SurfaceParams,
    coupling: Coupling,
    big_omega: f64,
    beta: f64,
}

impl OscParams {
    pub fn new(omega: f64, surface: SurfaceParams, coupling: Coupling) -> Result<Self> {
        if !(omega >= 0.0) || !omega.is_finite() {
            return Err(domain(format!("omega must be finite and >= 0, got {omega}")));
        }
        let lambda = surface.lambda();
        let big_omega = (omega * omega + 0.25 * lambda * lambda).sqrt();
        Ok(Self { omega, surface, coupling, big_omega, beta: big_omega / lambda })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn surface(&self) -> &SurfaceParams {
        &self.surface
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    /// Ω = √(ω² + λ²/4), independent of the coupling reading.
    pub fn big_omega(&self) -> f64 {
        self.big_omega
    }

    /// β = Ω/λ.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// k in V = (k/2)ρ².
    pub fn stiffness(&self) -> f64 {
        self.coupling.stiffness(self.omega)
    }

    pub fn with_surface(&self, surface: SurfaceParams) -> Result<Self> {
        Self::new(self.omega, surface, self.coupling)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OscState {
    n: u32,
    l: i32,
}

impl OscState {
    pub fn new(n: u32, l: i32) -> Result<Self> {
        let al = l.unsigned_abs();
        if al > n || !(n - al).is_multiple_of(2) {
            return Err(domain(format!(
                "invalid oscillator state (n, l) = ({n}, {l}): need |l| <= n and n - |l| even"
            )));
        }
        Ok(Self { n, l })
    }

    /// All valid states of level n, l = −n, −n+2, …, n.
    pub fn level(n: u32) -> Vec<Self> {
        (0..=n).map(|j| Self { n, l: 2 * j as i32 - n as i32 }).collect()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> i32 {
        self.l
    }

    pub fn abs_l(&self) -> u32 {
        self.l.unsigned_abs()
    }

    /// k_r = (n − |l|)/2.
    pub fn k_r(&self) -> u32 {
        (self.n - self.abs_l()) / 2
    }
}

/// E⁽⁰⁾ = (n+1)Ω + (λ/2)(n+1)².
pub fn energy0(st: &OscState, p: &OscParams) -> f64 {
    let m = f64::from(st.n) + 1.0;
    m * p.big_omega + 0.5 * p.surface.lambda() * m * m
}

/// Normalization diagnostics of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormCheck {
    /// 𝒩 from the full measure (2π/λ) sin χ dχ.
    pub quadrature: f64,
    /// 𝒩 from the Gamma-function closed form.
    pub closed_form: f64,
    /// closed_form / quadrature; √(2π) when the closed form normalizes the
    /// radial factor alone.
    pub azimuthal_factor: f64,
    /// |√(2π)·quadrature − closed_form| / closed_form.
    pub rel_dev: f64,
    pub pass: bool,
}

/// A state together with its numerically determined normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscEigenstate {
    state: OscState,
    params: OscParams,
    norm: f64,
    norm_err_est: f64,
}

impl OscEigenstate {
    pub fn new(state: OscState, params: OscParams, spec: &QuadratureSpec) -> Result<Self> {
        // Pre-scale by the closed form so the integral is O(1) and the
        // absolute tolerance stays meaningful when β is large.
        let guess = (log_norm_closed_form(&state, &params)? - 0.5 * TAU.ln()).exp();
        let raw = |c: f64| {
            let u = guess * unnormalized(&state, &params, c);
            c.sin() * u * u
        };
        let r = integrate(raw, 0.0, FRAC_PI_2, spec)?;
        let scale = TAU / params.surface.lambda();
        let mass = scale * r.value;
        let norm = guess * mass.powf(-0.5);
        Ok(Self { state, params, norm, norm_err_est: 0.5 * norm * scale * r.err_est / mass })
    }

    pub fn state(&self) -> &OscState {
        &self.state
    }

    pub fn params(&self) -> &OscParams {
        &self.params
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn norm_err_est(&self) -> f64 {
        self.norm_err_est
    }

    /// Gamma-function closed form
    /// [2λ Γ(k+l+1) Γ(k+l+β+1)(2k+l+β+1) / (k! Γ²(l+1) Γ(k+β+1))]^{1/2}
    /// with k → k_r, l → |l|.
    pub fn norm_closed_form(&self) -> Result<f64> {
        let k = f64::from(self.state.k_r());
        let l = f64::from(self.state.abs_l());
        let b = self.params.beta;
        let ratio = gamma_ratio(&[k + l + 1.0, k + l + b + 1.0], &[k + 1.0, l + 1.0, l + 1.0, k + b + 1.0])?;
        Ok((2.0 * self.params.surface.lambda() * ratio * (2.0 * k + l + b + 1.0)).sqrt())
    }

    pub fn norm_check(&self) -> Result<NormCheck> {
        let closed = self.norm_closed_form()?;
        let rel_dev = (TAU.sqrt() * self.norm - closed).abs() / closed;
        Ok(NormCheck {
            quadrature: self.norm,
            closed_form: closed,
            azimuthal_factor: closed / self.norm,
            rel_dev,
            pass: rel_dev <= NORM_CHECK_TOL,
        })
    }

    /// φ(χ) for χ ∈ [0, π/2).
    pub fn radial(&self, chi: f64) -> Result<f64> {
        if !(0.0..FRAC_PI_2).contains(&chi) {
            return Err(domain(format!("chi must lie in [0, pi/2), got {chi}")));
        }
        Ok(self.radial_unchecked(chi))
    }

    fn radial_unchecked(&self, chi: f64) -> f64 {
        self.norm * unnormalized(&self.state, &self.params, chi)
    }

    /// Φ = ∂φ/∂χ written in x = 1 − 2 sin²χ through Jacobi polynomials.
    pub fn radial_derivative(&self, x: f64) -> Result<f64> {
        if !(x > -1.0 && x <= 1.0) {
            return Err(domain(format!("x must lie in (-1, 1], got {x}")));
        }
        Ok(self.derivative_unchecked(x))
    }

    fn derivative_unchecked(&self, x: f64) -> f64 {
        let k = self.state.k_r();
        let kf = f64::from(k);
        let l = f64::from(self.state.abs_l());
        let b = self.params.beta;
        let c = poly_scale(k, l);
        let p = jacobi(k, l, b, x);
        let dp = if k == 0 { 0.0 } else { jacobi(k - 1, l + 1.0, b + 1.0, x) };
        let (u, v) = (1.0 - x, 1.0 + x);
        let mut bracket = 0.25 * (2.0 * b + 1.0) * u.powf(0.5 * (l + 1.0)) * v.powf(0.5 * b - 0.25) * p
            + u.powf(0.5 * (l + 1.0)) * v.powf(0.5 * b + 0.75) * 0.5 * (l + b + kf + 1.0) * dp;
        if l > 0.0 {
            bracket -= 0.5 * l * u.powf(0.5 * (l - 1.0)) * v.powf(0.5 * b + 0.75) * p;
        }
        -self.norm * c * bracket / 2f64.powf(0.5 * l + 0.5 * b - 0.75)
    }

    /// Φ at polar angle χ.
    pub fn radial_derivative_chi(&self, chi: f64) -> Result<f64> {
        if !(0.0..FRAC_PI_2).contains(&chi) {
            return Err(domain(format!("chi must lie in [0, pi/2), got {chi}")));
        }
        Ok(self.derivative_unchecked((2.0 * chi).cos()))
    }
}

/// ₂F₁(−k, k+l+β+1; l+1; ·) = k! Γ(l+1)/Γ(k+l+1) · P_k^{(l,β)}(1 − 2·).
fn poly_scale(k: u32, l: f64) -> f64 {
    let kf = f64::from(k);
    (crate::specfun::log_gamma_unchecked(kf + 1.0) + crate::specfun::log_gamma_unchecked(l + 1.0)
        - crate::specfun::log_gamma_unchecked(kf + l + 1.0))
    .exp()
}

fn jacobi(k: u32, a: f64, b: f64, x: f64) -> f64 {
    let p = JacobiParams::new(k, a, b).expect("indices are nonnegative");
    jacobi_p(p, x.clamp(-1.0, 1.0)).expect("argument clamped")
}

fn unnormalized(st: &OscState, p: &OscParams, chi: f64) -> f64 {
    let (s, c) = chi.sin_cos();
    let l = st.abs_l();
    let lf = f64::from(l);
    let k = st.k_r();
    let f = hyp2f1_terminating(k, f64::from(k) + lf + p.beta + 1.0, lf + 1.0, s * s).expect("c = |l| + 1 is positive");
    s.powi(l as i32) * c.max(0.0).powf(p.beta + 0.5) * f
}

/// Build the normalized eigenstate for (n, l).
pub fn eigenstate(n: u32, l: i32, p: &OscParams, spec: &QuadratureSpec) -> Result<OscEigenstate> {
    OscEigenstate::new(OscState::new(n, l)?, *p, spec)
}

/// φ_{n,l}(χ), normalized under the full sphere measure.
pub fn radial_wavefunction(st: &OscState, p: &OscParams, chi: f64, spec: &QuadratureSpec) -> Result<f64> {
    OscEigenstate::new(*st, *p, spec)?.radial(chi)
}

/// (2π/λ) ∫ sin χ φ_a φ_b dχ.
pub fn overlap(a: &OscEigenstate, b: &OscEigenstate, spec: &QuadratureSpec) -> Result<Integral> {
    let r = integrate(|c| c.sin() * a.radial_unchecked(c) * b.radial_unchecked(c), 0.0, FRAC_PI_2, spec)?;
    let k = TAU / a.params.surface.lambda();
    Ok(Integral { value: k * r.value, err_est: k * r.err_est })
}

/// −(ε/2)⟨(1+λρ²)p̂₀²⟩ as
/// −(επ/λ) ∫ sin χ {λcos²χ Φ² − λ cos χ sin χ φΦ − ¾λ sin²χ φ² + λl²φ²/sin²χ} dχ.
pub fn shift_kinetic(e: &OscEigenstate, spec: &QuadratureSpec) -> Result<Integral> {
    let s = e.params.surface;
    let l2 = f64::from(e.state.abs_l()).powi(2);
    let integrand = |chi: f64| {
        let (sn, cs) = chi.sin_cos();
        let f = e.radial_unchecked(chi);
        let d = e.derivative_unchecked((2.0 * chi).cos());
        let mut v = cs * cs * d * d - cs * sn * f * d - 0.75 * sn * sn * f * f;
        if l2 > 0.0 {
            v += l2 * f * f / (sn * sn);
        }
        sn * v
    };
    let r = integrate(integrand, 0.0, FRAC_PI_2, spec)?;
    let k = -s.eps() * PI;
    Ok(Integral { value: k * r.value, err_est: k.abs() * r.err_est })
}

/// The same kinetic shift after x = 1 − 2 sin²χ:
/// −(επ/4) ∫₋₁¹ dx/c {c²Φ² − c s φΦ − (¾ s² − 2l²/(1−x)) φ²},
/// with c² = (1+x)/2, s² = (1−x)/2.
pub fn shift_kinetic_x(e: &OscEigenstate, spec: &QuadratureSpec) -> Result<Integral> {
    let s = e.params.surface;
    let l2 = f64::from(e.state.abs_l()).powi(2);
    let integrand = |x: f64| {
        let c2 = 0.5 * (1.0 + x);
        let s2 = 0.5 * (1.0 - x);
        let (cs, sn) = (c2.sqrt(), s2.sqrt());
        let chi = sn.atan2(cs);
        let f = e.radial_unchecked(chi);
        let d = e.derivative_unchecked(x);
        let mut w = 0.75 * s2;
        if l2 > 0.0 {
            w -= 2.0 * l2 / (1.0 - x);
        }
        (c2 * d * d - cs * sn * f * d - w * f * f) / cs
    };
    let r = integrate(integrand, -1.0, 1.0, spec)?;
    let k = -0.25 * s.eps() * PI;
    Ok(Integral { value: k * r.value, err_est: k.abs() * r.err_est })
}

/// −(ε k π/λ²) ∫ sin χ (sin²χ + tan²χ) φ² dχ, k the coupling stiffness.
pub fn shift_potential(e: &OscEigenstate, spec: &QuadratureSpec) -> Result<Integral> {
    let s = e.params.surface;
    let stiff = e.params.stiffness();
    if stiff == 0.0 || s.eps() == 0.0 {
        return Ok(Integral { value: 0.0, err_est: 0.0 });
    }
    let integrand = |chi: f64| {
        let (sn, cs) = chi.sin_cos();
        let f = e.radial_unchecked(chi);
        sn * sn * sn * (1.0 + 1.0 / (cs * cs)) * f * f
    };
    let r = integrate(integrand, 0.0, FRAC_PI_2, spec)?;
    let k = -s.eps() * stiff * PI / (s.lambda() * s.lambda());
    Ok(Integral { value: k * r.value, err_est: k.abs() * r.err_est })
}

pub fn shift_total(e: &OscEigenstate, spec: &QuadratureSpec) -> Result<Integral> {
    let k = shift_kinetic(e, spec)?;
    let v = shift_potential(e, spec)?;
    Ok(Integral { value: k.value + v.value, err_est: k.err_est + v.err_est })
}

/// Rows for every valid (n, l) with n ≤ n_max, ascending in n then l.
pub fn level_table(n_max: u32, p: &OscParams, spec: &QuadratureSpec) -> Result<LevelTable> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for st in OscState::level(n) {
            let e = OscEigenstate::new(st, *p, spec)?;
            let e0 = energy0(&st, p);
            let de = shift_total(&e, spec)?;
            rows.push(LevelRow { n, l: Some(st.l), e0, de1: de.value, e: e0 + de.value, de1_err_est: de.err_est });
        }
    }
    let s = p.surface;
    Ok(LevelTable { kind: TableKind::Oscillator, lambda: s.lambda(), eps: s.eps(), omega: p.omega, rows })
}

/// Logarithm of the closed-form normalization, usable where 𝒩 overflows.
pub fn log_norm_closed_form(st: &OscState, p: &OscParams) -> Result<f64> {
    let k = f64::from(st.k_r());
    let l = f64::from(st.abs_l());
    let b = p.beta;
    let lg = log_gamma(k + l + 1.0)? + log_gamma(k + l + b + 1.0)?
        - log_gamma(k + 1.0)?
        - 2.0 * log_gamma(l + 1.0)?
        - log_gamma(k + b + 1.0)?;
    Ok(0.5 * (lg + (2.0 * p.surface.lambda() * (2.0 * k + l + b + 1.0)).ln()))
}
