//! Static two-column level diagram: unperturbed levels on the left, shifted
//! sublevels on the right, one connector per (n, l).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{domain, Error, Result};
use crate::table::LevelTable;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 440.0;
const LEFT: (f64, f64) = (90.0, 250.0);
const RIGHT: (f64, f64) = (390.0, 550.0);

/// Render the diagram for a reference table (its ε is ignored, E⁽⁰⁾ is
/// drawn) and a perturbed table. Both must share λ and ω.
pub fn render_level_svg(reference: &LevelTable, perturbed: &LevelTable) -> Result<String> {
    if reference.lambda != perturbed.lambda || reference.omega != perturbed.omega {
        return Err(domain(format!(
            "level tables differ in (lambda, omega): ({}, {}) vs ({}, {})",
            reference.lambda, reference.omega, perturbed.lambda, perturbed.omega
        )));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{:.2}" y="20" text-anchor="middle">eps = 0</text>"#, 0.5 * (LEFT.0 + LEFT.1));
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="20" text-anchor="middle">eps = {}</text>"#,
        0.5 * (RIGHT.0 + RIGHT.1),
        crate::table::fmt_sig(perturbed.eps)
    );

    let energies = reference.rows.iter().map(|r| r.e0).chain(perturbed.rows.iter().map(|r| r.e));
    let (lo, hi) = energies.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e), hi.max(e)));
    if lo.is_finite() && hi.is_finite() {
        let span = if hi > lo { hi - lo } else { 1.0 };
        let y = |e: f64| BOTTOM - (e - lo) / span * (BOTTOM - TOP);

        let mut left_levels: BTreeMap<u32, f64> = BTreeMap::new();
        for r in &reference.rows {
            left_levels.entry(r.n).or_insert(r.e0);
        }
        for (n, e0) in &left_levels {
            let yy = y(*e0);
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="black" stroke-width="2"/>"#,
                LEFT.0, LEFT.1
            );
            let _ =
                writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">n={n}</text>"#, LEFT.0 - 8.0, yy + 4.0);
        }

        // group sublevels that coincide on the drawing so labels do not overlap
        let mut sublevels: BTreeMap<(u32, i64), Vec<String>> = BTreeMap::new();
        for r in &perturbed.rows {
            let key = (r.n, (y(r.e) * 100.0).round() as i64);
            sublevels.entry(key).or_default().push(r.l.map(|l| l.to_string()).unwrap_or_default());
            if let Some(e0) = left_levels.get(&r.n) {
                let _ = writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
                    LEFT.1,
                    y(*e0),
                    RIGHT.0,
                    y(r.e)
                );
            }
        }
        for ((_, key), ls) in &sublevels {
            let yy = *key as f64 / 100.0;
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="black" stroke-width="2"/>"#,
                RIGHT.0, RIGHT.1
            );
            if ls.iter().any(|l| !l.is_empty()) {
                let _ =
                    writeln!(out, r#"<text x="{:.2}" y="{:.2}">l={}</text>"#, RIGHT.1 + 8.0, yy + 4.0, ls.join(","));
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_level_svg(reference: &LevelTable, perturbed: &LevelTable, path: &Path) -> Result<()> {
    let svg = render_level_svg(reference, perturbed)?;
    std::fs::write(path, svg).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
