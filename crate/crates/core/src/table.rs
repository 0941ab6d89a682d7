//! Level tables and their CSV form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

pub const CSV_HEADER: &str = "n,l,E0,dE1,E,dE1_err_est";

/// Shifts closer than this (relative) count as one sublevel.
pub const DISTINCT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRow {
    pub n: u32,
    /// Azimuthal index; free-particle rows have none.
    pub l: Option<i32>,
    pub e0: f64,
    pub de1: f64,
    pub e: f64,
    pub de1_err_est: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TableKind {
    Free,
    Oscillator,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelTable {
    pub kind: TableKind,
    pub lambda: f64,
    pub eps: f64,
    /// Zero for the free particle.
    pub omega: f64,
    pub rows: Vec<LevelRow>,
}

/// Sublevel structure of one n.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Splitting {
    pub n: u32,
    /// max ΔE − min ΔE over l
    pub width: f64,
    /// Number of (n, l) rows, n + 1 for the oscillator.
    pub rows: usize,
    /// Number of distinct shifted energies.
    pub distinct: usize,
}

impl LevelTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Per-n splitting widths and sublevel counts, ascending in n.
    pub fn splittings(&self) -> Vec<Splitting> {
        let mut by_n: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for r in &self.rows {
            by_n.entry(r.n).or_default().push(r.de1);
        }
        by_n.into_iter()
            .map(|(n, shifts)| {
                let max = shifts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let min = shifts.iter().copied().fold(f64::INFINITY, f64::min);
                Splitting { n, width: max - min, rows: shifts.len(), distinct: count_distinct(&shifts) }
            })
            .collect()
    }

    /// Mean splitting width over levels 1 ≤ n ≤ `n_max` (n = 0 has a
    /// single state and cannot split).
    pub fn mean_width(&self, n_max: u32) -> f64 {
        let widths: Vec<f64> =
            self.splittings().into_iter().filter(|s| s.n >= 1 && s.n <= n_max).map(|s| s.width).collect();
        if widths.is_empty() {
            0.0
        } else {
            widths.iter().sum::<f64>() / widths.len() as f64
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let l = r.l.map(|l| l.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.n,
                l,
                fmt_sig(r.e0),
                fmt_sig(r.de1),
                fmt_sig(r.e),
                fmt_sig(r.de1_err_est)
            );
        }
        out
    }
}

fn count_distinct(values: &[f64]) -> usize {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last: Option<f64> = None;
    for v in sorted {
        let same = last.is_some_and(|u| (v - u).abs() <= DISTINCT_REL_TOL * v.abs().max(u.abs()).max(1e-300));
        if !same {
            count += 1;
        }
        last = Some(v);
    }
    count
}

/// Twelve significant digits; fixed notation for moderate magnitudes,
/// exponent notation otherwise. Never locale dependent.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed)
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(1.618033988749895), "1.61803398875");
        assert_eq!(fmt_sig(-0.05), "-0.05");
        assert_eq!(fmt_sig(0.025), "0.025");
        assert_eq!(fmt_sig(1.5e-14), "1.5e-14");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_sig(9.99999999999951), "10");
    }

    #[test]
    fn csv_has_fixed_header_and_empty_free_l() {
        let t = LevelTable {
            kind: TableKind::Free,
            lambda: 1.0,
            eps: 0.0,
            omega: 0.0,
            rows: vec![LevelRow { n: 0, l: None, e0: 0.0, de1: 0.0, e: 0.0, de1_err_est: 0.0 }],
        };
        assert_eq!(t.to_csv(), "n,l,E0,dE1,E,dE1_err_est\n0,,0,0,0,0\n");
    }

    #[test]
    fn splitting_counts() {
        let row = |n, l, de1| LevelRow { n, l: Some(l), e0: 1.0, de1, e: 1.0 + de1, de1_err_est: 0.0 };
        let t = LevelTable {
            kind: TableKind::Oscillator,
            lambda: 1.0,
            eps: 0.1,
            omega: 1.0,
            rows: vec![
                row(0, 0, -0.1),
                row(1, -1, -0.3),
                row(1, 1, -0.3),
                row(2, -2, -0.6),
                row(2, 0, -0.5),
                row(2, 2, -0.6),
            ],
        };
        let s = t.splittings();
        assert_eq!(s.len(), 3);
        assert_eq!((s[1].rows, s[1].distinct, s[1].width), (2, 1, 0.0));
        assert_eq!((s[2].rows, s[2].distinct), (3, 2));
        assert!((s[2].width - 0.1).abs() < 1e-15);
        assert!((t.mean_width(2) - 0.05).abs() < 1e-15);
    }
}
