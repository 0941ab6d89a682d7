//! Numerical kernels shared by the physics modules: adaptive Gauss–Legendre
//! quadrature, central finite differences and a symmetric tridiagonal
//! eigensolver (Sturm bisection plus inverse iteration for vectors).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerances and rule sizes for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Points in the per-panel Gauss rule. The error estimate compares it with
    /// a Gauss rule of half the order on the same panel.
    pub base_order: usize,
    pub max_depth: u32,
    /// Equal panels the interval is cut into before adapting; guards against
    /// narrow peaks that both rules miss on a single panel.
    pub initial_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-13, base_order: 31, max_depth: 40, initial_panels: 8 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(domain("quadrature tolerances must be positive"));
        }
        if self.max_depth < 1 {
            return Err(domain("quadrature max_depth must be >= 1"));
        }
        if self.initial_panels < 1 {
            return Err(domain("quadrature initial_panels must be >= 1"));
        }
        if self.base_order < 2 {
            return Err(domain("quadrature base_order must be >= 2"));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Value of a definite integral and its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub err_est: f64,
}

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: &F, lo: f64, hi: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let sum: f64 = self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum();
        half * sum
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    depth: u32,
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties go to the earliest-created panel.
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Adaptive quadrature of `f` over [lo, hi].
///
/// Panels are bisected in order of decreasing error estimate until the summed
/// estimate meets `max(abs_tol, rel_tol·|I|)`. Gauss nodes are interior, so
/// integrable endpoint singularities need no special treatment.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    if !(lo < hi) {
        return Err(domain(format!("integrate: need lo < hi, got [{lo}, {hi}]")));
    }
    let high = GaussRule::new(spec.base_order);
    let low = GaussRule::new((spec.base_order / 2).max(1));
    let eval = |a: f64, b: f64| {
        let v = high.apply(&f, a, b);
        let e = (v - low.apply(&f, a, b)).abs();
        (v, if e.is_nan() { f64::INFINITY } else { e })
    };

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let m = spec.initial_panels;
    let width = (hi - lo) / m as f64;
    for seq in 0..m {
        let a = lo + width * seq as f64;
        let b = if seq + 1 == m { hi } else { a + width };
        let (value, err) = eval(a, b);
        total += value;
        total_err += err;
        heap.push(Panel { lo: a, hi: b, value, err, depth: 0, seq });
    }
    let mut seq = m;
    // Bound on panels; max_depth alone would allow 2^40 of them.
    let max_panels = 50_000usize;

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let worst = *heap.peek().expect("heap never empties");
        if worst.depth >= spec.max_depth || heap.len() >= max_panels || !total.is_finite() {
            return Err(Error::Convergence { best: total, err_est: total_err });
        }
        heap.pop();
        let mid = 0.5 * (worst.lo + worst.hi);
        total -= worst.value;
        total_err -= worst.err;
        for (a, b) in [(worst.lo, mid), (mid, worst.hi)] {
            let (v, e) = eval(a, b);
            seq += 1;
            total += v;
            total_err += e;
            heap.push(Panel { lo: a, hi: b, value: v, err: e, depth: worst.depth + 1, seq });
        }
    }

    // Re-sum left to right so the result does not depend on heap order.
    let mut panels = heap.into_vec();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value = panels.iter().map(|p| p.value).sum();
    let err_est = panels.iter().map(|p| p.err).sum();
    Ok(Integral { value, err_est })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOrder {
    First,
    Second,
}

/// Second-order central difference of `f` at `x` with step `h > 0`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, order: DiffOrder) -> f64 {
    assert!(h > 0.0, "central_diff needs a positive step");
    match order {
        DiffOrder::First => (f(x + h) - f(x - h)) / (2.0 * h),
        DiffOrder::Second => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
    }
}

fn check_tridiag(diag: &[f64], offdiag: &[f64]) -> Result<()> {
    if diag.is_empty() {
        return Err(domain("tridiagonal matrix has dimension 0"));
    }
    if offdiag.len() + 1 != diag.len() {
        return Err(domain(format!("off-diagonal length {} does not match dimension {}", offdiag.len(), diag.len())));
    }
    Ok(())
}

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
fn sturm_count(diag: &[f64], offdiag: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - offdiag[i - 1] * offdiag[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k_lowest` smallest eigenvalues of a symmetric tridiagonal matrix,
/// ascending, by bisection on Sturm counts.
pub fn eig_tridiag(diag: &[f64], offdiag: &[f64], k_lowest: usize) -> Result<Vec<f64>> {
    check_tridiag(diag, offdiag)?;
    let n = diag.len();
    if k_lowest > n {
        return Err(domain(format!("requested {k_lowest} eigenvalues of a {n}x{n} matrix")));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { offdiag[i - 1].abs() } else { 0.0 } + if i + 1 < n { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let norm = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(norm * 1e-300);
    let abs_floor = norm * f64::EPSILON * 1e-3;
    lo -= 2.0 * f64::EPSILON * norm;
    hi += 2.0 * f64::EPSILON * norm;

    let mut out = Vec::with_capacity(k_lowest);
    let mut left = lo;
    for i in 0..k_lowest {
        let (mut a, mut b) = (left, hi);
        loop {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b || (b - a) <= abs_floor {
                break;
            }
            if sturm_count(diag, offdiag, mid, pivmin) > i {
                b = mid;
            } else {
                a = mid;
            }
        }
        let ev = 0.5 * (a + b);
        out.push(ev);
        left = a;
    }
    Ok(out)
}

/// Unit eigenvector for `eigenvalue` by inverse iteration, with the
/// largest-magnitude entry made positive.
pub fn eigvec_tridiag(diag: &[f64], offdiag: &[f64], eigenvalue: f64) -> Result<Vec<f64>> {
    check_tridiag(diag, offdiag)?;
    let n = diag.len();
    let scale = diag.iter().chain(offdiag).fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let shift = eigenvalue + scale * 1e-14;
    let lu = TridiagLu::factor(diag, offdiag, shift, scale);
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i % 7) as f64)).collect();
    for _ in 0..3 {
        v = lu.solve(&v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let pivot = v.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(1.0);
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(v)
}

/// LU factorization with partial pivoting of T - shift·I.
struct TridiagLu {
    // row i of U: u0[i] on the diagonal, u1[i], u2[i] to its right
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64, scale: f64) -> Self {
        let n = diag.len();
        let tiny = scale * f64::EPSILON;
        let mut u0: Vec<f64> = diag.iter().map(|d| d - shift).collect();
        let mut u1: Vec<f64> = off.to_vec();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];
        for i in 0..n.saturating_sub(1) {
            let sub = off[i];
            if sub.abs() > u0[i].abs() {
                // swap rows i and i+1
                swapped[i] = true;
                let m = u0[i] / sub;
                mult[i] = m;
                let (r0, r1, r2) = (sub, u0[i + 1], if i + 1 < n - 1 { off[i + 1] } else { 0.0 });
                let (o1, o2) = (u1[i], u2[i]);
                u0[i] = r0;
                u1[i] = r1;
                u2[i] = r2;
                u0[i + 1] = o1 - m * r1;
                u1[i + 1] = o2 - m * r2;
            } else {
                let piv = if u0[i].abs() < tiny { tiny } else { u0[i] };
                u0[i] = piv;
                let m = sub / piv;
                mult[i] = m;
                u0[i + 1] -= m * u1[i];
                // u2[i] stays zero on this branch
            }
        }
        if u0[n - 1].abs() < tiny {
            u0[n - 1] = tiny;
        }
        Self { u0, u1, u2, mult, swapped }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut y = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.mult[i] * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        let rule = GaussRule::new(31);
        assert_eq!(rule.len(), 31);
        let v = rule.apply(&|x: f64| x.powi(60), -1.0, 1.0);
        assert!((v - 2.0 / 61.0).abs() < 1e-15);
        let w: f64 = GaussRule::new(15).apply(&|_| 1.0, 0.0, 3.0);
        assert!((w - 3.0).abs() < 1e-14);
    }

    #[test]
    fn integrate_examples() {
        let spec = QuadratureSpec::default();
        let r = integrate(f64::sin, 0.0, FRAC_PI_2, &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate(|x: f64| x.sin().powi(4), 0.0, FRAC_PI_2, &spec).unwrap();
        assert!((r.value - 0.589_048_622_548_086).abs() < 1e-14);
        assert!(r.err_est >= 0.0);
    }

    #[test]
    fn integrate_handles_integrable_endpoint_singularity() {
        let spec = QuadratureSpec::default().with_rel_tol(1e-7);
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!((r.value - 2.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn integrate_rejects_bad_input() {
        let spec = QuadratureSpec::default();
        assert!(integrate(f64::sin, 1.0, 1.0, &spec).is_err());
        let bad = QuadratureSpec { rel_tol: 0.0, ..spec };
        assert!(integrate(f64::sin, 0.0, 1.0, &bad).is_err());
    }

    #[test]
    fn integrate_reports_nonconvergence_with_best_estimate() {
        let spec = QuadratureSpec { max_depth: 2, ..QuadratureSpec::default() };
        match integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &spec) {
            Err(Error::Convergence { best, err_est }) => {
                assert!(best > 1.0 && best < 2.0);
                assert!(err_est > 0.0);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn central_diff_examples() {
        let v = central_diff(|x| x * x, 3.0, 0.1, DiffOrder::First);
        assert!((v - 6.0).abs() < 1e-12);
        let v = central_diff(f64::sin, 0.0, 1e-5, DiffOrder::First);
        assert!((v - 1.0).abs() < 1e-10);
        let v = central_diff(|x| x * x, -2.0, 0.5, DiffOrder::Second);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eig_tridiag_examples() {
        let ev = eig_tridiag(&[2.0, 2.0, 2.0], &[-1.0, -1.0], 3).unwrap();
        assert!((ev[0] - 0.585_786_437_626_905).abs() < 1e-14);
        assert!((ev[1] - 2.0).abs() < 1e-14);
        assert!((ev[2] - (2.0 + 2f64.sqrt())).abs() < 1e-14);

        let ones = vec![1.0; 10];
        let ev = eig_tridiag(&ones, &[0.0; 9], 10).unwrap();
        assert!(ev.iter().all(|e| (e - 1.0).abs() < 1e-15));

        assert!(eig_tridiag(&[], &[], 0).is_err());
        assert!(eig_tridiag(&[1.0, 2.0], &[0.5], 3).is_err());
        assert!(eig_tridiag(&[1.0, 2.0], &[], 1).is_err());
    }

    #[test]
    fn dirichlet_laplacian_lowest_eigenvalue() {
        // -u'' on [0, π] with u(0) = u(π) = 0: lowest eigenvalue 1
        let n = 2000;
        let h = PI / (n as f64 + 1.0);
        let diag = vec![2.0 / (h * h); n];
        let off = vec![-1.0 / (h * h); n - 1];
        let ev = eig_tridiag(&diag, &off, 2).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-5, "{}", ev[0]);
        assert!((ev[1] - 4.0).abs() < 1e-4, "{}", ev[1]);
    }

    #[test]
    fn eigvec_satisfies_eigen_equation() {
        let diag = [4.0, -1.0, 3.0, 2.5, 0.5];
        let off = [1.0, 2.0, -0.5, 1.5];
        let ev = eig_tridiag(&diag, &off, 5).unwrap();
        for &lambda in &ev {
            let v = eigvec_tridiag(&diag, &off, lambda).unwrap();
            for i in 0..5 {
                let mut tv = diag[i] * v[i];
                if i > 0 {
                    tv += off[i - 1] * v[i - 1];
                }
                if i < 4 {
                    tv += off[i] * v[i + 1];
                }
                assert!((tv - lambda * v[i]).abs() < 1e-12, "lambda {lambda}");
            }
        }
    }
}
