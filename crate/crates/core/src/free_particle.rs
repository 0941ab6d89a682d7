//! Free particle on the sphere and its first-order shift on the spheroid.
//!
//! Units: unit mass, ħ = 1. The basis is the highest-weight family
//! ψ_n = a_n (sin χ)ⁿ e^{inφ} with E_n = λ n(n+1)/2; the spheroid enters
//! through the perturbation −(ε/2)(1 + λρ²) p̂₀².

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::geometry::{SurfaceParams, TangentPoint};
use crate::numerics::{integrate, Integral, QuadratureSpec};
use crate::specfun::gamma_ratio;
use crate::table::{LevelRow, LevelTable, TableKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeState {
    n: u32,
    surface: SurfaceParams,
    norm: f64,
}

impl FreeState {
    pub fn new(n: u32, surface: SurfaceParams) -> Result<Self> {
        let nf = f64::from(n);
        // a_n² = λ Γ(3/2 + n) / (π^{3/2} Γ(1 + n))
        let ratio = gamma_ratio(&[1.5 + nf], &[1.0 + nf])?;
        let norm = (surface.lambda() * ratio / PI.powf(1.5)).sqrt();
        Ok(Self { n, surface, norm })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn surface(&self) -> &SurfaceParams {
        &self.surface
    }

    /// Normalization constant a_n.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Radial factor a_n (sin χ)ⁿ.
    pub fn radial(&self, chi: f64) -> f64 {
        self.norm * chi.sin().powi(self.n as i32)
    }
}

/// E⁽⁰⁾ = λ n(n+1)/2.
pub fn energy0(n: u32, s: &SurfaceParams) -> f64 {
    let n = f64::from(n);
    0.5 * s.lambda() * n * (n + 1.0)
}

pub fn wavefunction(st: &FreeState, t: &TangentPoint) -> Complex64 {
    let chi = t.chi(st.surface.lambda());
    Complex64::from_polar(st.radial(chi), f64::from(st.n) * t.phi())
}

/// ∫ √g |ψ|² d²x = (2π/λ) ∫₀^{π/2} sin χ |R(χ)|² dχ, which is 1 for a
/// normalized state.
pub fn norm_integral(st: &FreeState, spec: &QuadratureSpec) -> Result<Integral> {
    let r = integrate(|c| c.sin() * st.radial(c).powi(2), 0.0, FRAC_PI_2, spec)?;
    let k = TAU / st.surface.lambda();
    Ok(Integral { value: k * r.value, err_est: k * r.err_est })
}

/// First-order shift from the Gamma-function closed form. The
/// 2n² Γ(n)/Γ(1+n) factor is taken as its limit 2n so n = 0 is regular.
pub fn shift1_closed(st: &FreeState) -> Result<f64> {
    let n = f64::from(st.n);
    let s = &st.surface;
    let second = 2.0 * n * gamma_ratio(&[1.5 + n], &[0.5 + n])?;
    let third = (n * n + n - 0.75) * gamma_ratio(&[2.0 + n, 1.5 + n], &[1.0 + n, 2.5 + n])?;
    Ok(0.5 * s.eps() * s.lambda() * (n * (2.0 * n + 1.0) - second - third))
}

/// First-order shift from the χ integral
/// −π ε a_n² ∫ sin χ {2n² s^{2n−2} + (n² + n − 3/4) s^{2n+2} − n(2n+1) s^{2n}} dχ.
pub fn shift1_quadrature(st: &FreeState, spec: &QuadratureSpec) -> Result<Integral> {
    let n = st.n as i32;
    let nf = f64::from(st.n);
    let integrand = |c: f64| {
        let s = c.sin();
        let s2n = s.powi(2 * n);
        let mut v = (nf * nf + nf - 0.75) * s2n * s * s - nf * (2.0 * nf + 1.0) * s2n;
        if n > 0 {
            v += 2.0 * nf * nf * s.powi(2 * n - 2);
        }
        s * v
    };
    let r = integrate(integrand, 0.0, FRAC_PI_2, spec)?;
    let k = -PI * st.surface.eps() * st.norm * st.norm;
    Ok(Integral { value: k * r.value, err_est: k.abs() * r.err_est })
}

/// Radial part of the Hermitian-symmetrized matrix element
/// ½{⟨p̂₀ f ψ_m, p̂₀ ψ_n⟩ + ⟨p̂₀ ψ_m, p̂₀ f ψ_n⟩} with f = 1 + λρ², i.e. the
/// full element divided by the azimuthal integral ∫ e^{i(n−m)φ} dφ.
///
/// Written from the tangent-plane definition p̂₀ = −i g^{-1/4} ∇ g^{1/4}:
/// with ρ = tan χ/√λ, ρ dρ = sin χ/(λ cos³χ) dχ and ∂_ρ = √λ cos²χ ∂_χ the
/// flat bilinear form becomes ∫ [sin χ cos χ A′B′ + m n A B/(sin χ cos χ)] dχ.
fn kinetic_radial_element(bra: &FreeState, ket: &FreeState, spec: &QuadratureSpec) -> Result<Integral> {
    let (m, n) = (bra.n as i32, ket.n as i32);
    let (mf, nf) = (f64::from(bra.n), f64::from(ket.n));
    let ab = bra.norm * ket.norm;
    // g^{1/4} = cos^{3/2} χ, g^{1/4} f = cos^{-1/2} χ
    let part = |c: f64, k: i32, kf: f64, with_f: bool| -> (f64, f64) {
        let (s, co) = c.sin_cos();
        let sk = s.powi(k);
        let dsk = if k > 0 { kf * s.powi(k - 1) * co } else { 0.0 };
        if with_f {
            let g = co.powf(-0.5);
            (g * sk, 0.5 * co.powf(-1.5) * s * sk + g * dsk)
        } else {
            let g = co.powf(1.5);
            (g * sk, -1.5 * co.sqrt() * s * sk + g * dsk)
        }
    };
    let integrand = |c: f64| {
        let (s, co) = c.sin_cos();
        let pair = |fa: bool, fb: bool| {
            let (a, da) = part(c, m, mf, fa);
            let (b, db) = part(c, n, nf, fb);
            s * co * da * db + mf * nf * a * b / (s * co)
        };
        0.5 * (pair(true, false) + pair(false, true))
    };
    let r = integrate(integrand, 0.0, FRAC_PI_2, spec)?;
    Ok(Integral { value: ab * r.value, err_est: ab * r.err_est })
}

fn azimuthal_integral(dm: i32, spec: &QuadratureSpec) -> Result<Complex64> {
    let k = f64::from(dm);
    let re = integrate(|p| (k * p).cos(), 0.0, TAU, spec)?;
    let im = integrate(|p| (k * p).sin(), 0.0, TAU, spec)?;
    Ok(Complex64::new(re.value, im.value))
}

/// ⟨ψ_m | (1 + λρ²) p̂₀² | ψ_n⟩ (symmetrized) for m ≠ n under the √g measure.
/// The azimuthal factor makes it vanish.
pub fn offdiag_element(m: u32, n: u32, s: &SurfaceParams, spec: &QuadratureSpec) -> Result<Complex64> {
    if m == n {
        return Err(domain("offdiag_element needs m != n; use the shift functions for the diagonal"));
    }
    let bra = FreeState::new(m, *s)?;
    let ket = FreeState::new(n, *s)?;
    let radial = kinetic_radial_element(&bra, &ket, spec)?;
    let az = azimuthal_integral(n as i32 - m as i32, spec)?;
    Ok(az * radial.value)
}

/// First-order shift −(ε/2)⟨ψ|(1+λρ²)p̂₀²|ψ⟩ from the tangent-plane
/// bilinear form, independent of the closed χ-integrand above.
pub fn shift1_bilinear(st: &FreeState, spec: &QuadratureSpec) -> Result<Integral> {
    let r = kinetic_radial_element(st, st, spec)?;
    let k = -0.5 * st.surface.eps() * TAU;
    Ok(Integral { value: k * r.value, err_est: k.abs() * r.err_est })
}

/// Rows n = 0..=n_max. ΔE is the closed form; the quadrature value is kept
/// in `de1_err_est` as the discrepancy |closed − quadrature| (or the
/// quadrature error estimate if larger).
pub fn spectrum(n_max: u32, s: &SurfaceParams, spec: &QuadratureSpec) -> Result<LevelTable> {
    let rows = (0..=n_max)
        .map(|n| {
            let st = FreeState::new(n, *s)?;
            let e0 = energy0(n, s);
            let de1 = shift1_closed(&st)?;
            let quad = shift1_quadrature(&st, spec)?;
            let err = (de1 - quad.value).abs().max(quad.err_est);
            Ok(LevelRow { n, l: None, e0, de1, e: e0 + de1, de1_err_est: err })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LevelTable { kind: TableKind::Free, lambda: s.lambda(), eps: s.eps(), omega: 0.0, rows })
}
