//! Real special functions: Gamma, Pochhammer symbols, the terminating Gauss
//! hypergeometric series and Jacobi polynomials.
//!
//! Everything here works on `f64` and is a pure function of its arguments.

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln √(2π)
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Above this argument Γ is assembled as exp(ln Γ).
const GAMMA_DIRECT_MAX: f64 = 30.0;

const FACTORIALS: [f64; 21] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
];

fn lanczos_sum(z: f64) -> f64 {
    // z is the shifted argument x - 1
    LANCZOS_COEFFS[1..].iter().enumerate().fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64))
}

fn check_positive(x: f64, what: &str) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(domain(format!("{what} requires a positive argument, got {x}")));
    }
    Ok(())
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive(x, "log_gamma")?;
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos sum in its accurate range
        return log_gamma_unchecked(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Γ(x) for x > 0.
///
/// Integer arguments up to 21 come from a factorial table. Arguments above 30
/// go through [`log_gamma`]; ratios of large Gammas should be formed from
/// [`log_gamma`] directly.
pub fn gamma_fn(x: f64) -> Result<f64> {
    check_positive(x, "gamma_fn")?;
    if x == x.floor() && x <= 21.0 {
        return Ok(FACTORIALS[x as usize - 1]);
    }
    if x > GAMMA_DIRECT_MAX {
        return Ok(log_gamma_unchecked(x).exp());
    }
    if x < 0.5 {
        return Ok(gamma_fn(x + 1.0)? / x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z))
}

/// exp(Σ ln Γ(num) − Σ ln Γ(den)), all arguments positive.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for &a in num {
        acc += log_gamma(a)?;
    }
    for &b in den {
        acc -= log_gamma(b)?;
    }
    Ok(acc.exp())
}

/// Rising factorial (a)_k = a (a + 1) … (a + k − 1).
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + f64::from(i)))
}

fn blocks_series(c: f64, n: f64) -> bool {
    c <= 0.0 && c == c.floor() && c >= -n
}

/// ₂F₁(−n, b; c; z) for nonnegative integer n. For z > 1/2 the series is
/// reflected to 1 − z when the reflected c allows it.
pub fn hyp2f1_terminating(neg_deg: u32, b: f64, c: f64, z: f64) -> Result<f64> {
    let n = f64::from(neg_deg);
    if blocks_series(c, n) {
        return Err(domain(format!("hyp2f1_terminating: c = {c} is a nonpositive integer within the series length")));
    }
    let c_reflected = b - c - n + 1.0;
    if z > 0.5 && !blocks_series(c_reflected, n) {
        let pre = pochhammer(c - b, neg_deg) / pochhammer(c, neg_deg);
        return Ok(pre * ascending_sum(neg_deg, b, c_reflected, 1.0 - z));
    }
    Ok(ascending_sum(neg_deg, b, c, z))
}

fn ascending_sum(neg_deg: u32, b: f64, c: f64, z: f64) -> f64 {
    let n = f64::from(neg_deg);
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..neg_deg {
        let j = f64::from(j);
        term *= (j - n) * (b + j) / ((c + j) * (j + 1.0)) * z;
        sum += term;
    }
    sum
}

/// Degree and indices of a Jacobi polynomial P_k^{(α, β)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    degree: u32,
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(degree: u32, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0) || !(beta > -1.0) {
            return Err(domain(format!("Jacobi indices must exceed -1, got alpha = {alpha}, beta = {beta}")));
        }
        Ok(Self { degree, alpha, beta })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// P_k^{(α, β)}(x) by the three-term recurrence in degree.
pub fn jacobi_p(p: JacobiParams, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(domain(format!("jacobi_p: |x| must be <= 1, got {x}")));
    }
    Ok(jacobi_recurrence(p.degree, p.alpha, p.beta, x))
}

fn jacobi_recurrence(k: u32, a: f64, b: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    let ab = a + b;
    for n in 2..=k {
        let n = f64::from(n);
        let s = 2.0 * n + ab;
        let c1 = 2.0 * n * (n + ab) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// m-th derivative of P_k^{(α, β)} at x, via
/// dᵐ/dxᵐ P_k^{(α,β)} = (α+β+k+1)_m / 2ᵐ · P_{k−m}^{(α+m, β+m)}.
pub fn jacobi_p_deriv(p: JacobiParams, x: f64, m: u32) -> Result<f64> {
    if m > p.degree {
        return Ok(0.0);
    }
    let scale = pochhammer(p.alpha + p.beta + f64::from(p.degree) + 1.0, m) / 2f64.powi(m as i32);
    let lowered = JacobiParams::new(p.degree - m, p.alpha + f64::from(m), p.beta + f64::from(m))?;
    Ok(scale * jacobi_p(lowered, x)?)
}

/// ∫₀^{π/2} (sin χ)ⁿ dχ = √π Γ((1+n)/2) / (2 Γ(1+n/2)) for real n ≥ 0.
pub fn wallis_integral(n: f64) -> Result<f64> {
    if !(n >= 0.0) {
        return Err(domain(format!("wallis_integral: exponent must be >= 0, got {n}")));
    }
    let ratio = gamma_ratio(&[0.5 * (1.0 + n)], &[1.0 + 0.5 * n])?;
    Ok(0.5 * std::f64::consts::PI.sqrt() * ratio)
}
