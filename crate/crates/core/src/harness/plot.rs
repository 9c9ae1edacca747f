use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::ExperimentRow;
use crate::energy::Method;
use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const DASHES: [&str; 4] = ["", "8,4", "2,4", "12,4,2,4"];

fn color(method: Method, alpha: Option<f64>) -> &'static str {
    match (method, alpha) {
        (Method::Rpbt, _) => "#d62728",
        (Method::EuclideanEbt, _) => "#7f7f7f",
        (Method::AlphaEbt, Some(1.0)) => "#1f77b4",
        (Method::AlphaEbt, Some(0.1)) => "#2ca02c",
        (Method::AlphaEbt, Some(0.25)) => "#ff7f0e",
        (Method::AlphaEbt, Some(0.5)) => "#9467bd",
        (Method::AlphaEbt, Some(0.75)) => "#8c564b",
        (Method::AlphaEbt, _) => "#e377c2",
    }
}

fn label(method: Method, alpha: Option<f64>) -> String {
    match (method, alpha) {
        (Method::Rpbt, _) => "RPBT".into(),
        (Method::EuclideanEbt, _) => "EBT (raw)".into(),
        (Method::AlphaEbt, Some(a)) => format!("\u{3b1}-EBT, \u{3b1} = {a}"),
        (Method::AlphaEbt, None) => "\u{3b1}-EBT".into(),
    }
}

/// (method, α bits, n) identifies one curve.
type CurveKey = (Method, Option<u64>, usize);

/// SVG of rejection rate against KL divergence, one curve per
/// (method, α) and sample size.
pub fn render_power_plot(rows: &[ExperimentRow]) -> Result<String> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidArgument("no rows to plot".into()))?;
    if rows
        .iter()
        .any(|r| r.scenario_id != first.scenario_id || r.dim != first.dim)
    {
        return Err(Error::InvalidArgument(
            "rows mix several scenarios or dimensions".into(),
        ));
    }
    let mut curves: BTreeMap<CurveKey, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        curves
            .entry((r.method, r.alpha.map(f64::to_bits), r.n))
            .or_default()
            .push((r.kl, r.rejection_rate.clamp(0.0, 1.0)));
    }
    let sizes: Vec<usize> = {
        let mut s: Vec<usize> = rows.iter().map(|r| r.n).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let kl_max = rows.iter().map(|r| r.kl).fold(0.0, f64::max);
    let kl_max = if kl_max > 0.0 { kl_max } else { 1.0 };

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |kl: f64| LEFT + kl / kl_max * plot_w;
    let sy = |p: f64| TOP + (1.0 - p) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">Scenario {}, D = {}</text>"#,
        LEFT + plot_w / 2.0,
        first.scenario_id,
        first.dim
    );
    for i in 0..=5 {
        let p = i as f64 / 5.0;
        let y = sy(p);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{p:.1}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            y + 4.0
        );
        let kl = kl_max * p;
        let x = sx(kl);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 18.0,
            format_tick(kl)
        );
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">KL divergence</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(20 {:.2}) rotate(-90)" text-anchor="middle">Rejection rate</text>"#,
        TOP + plot_h / 2.0
    );

    for (i, ((method, alpha_bits, n), points)) in curves.iter_mut().enumerate() {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let alpha = alpha_bits.map(f64::from_bits);
        let stroke = color(*method, alpha);
        let size_index = sizes.iter().position(|s| s == n).unwrap_or(0);
        let dash = DASHES[size_index % DASHES.len()];
        let path: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{stroke}" stroke-width="2" stroke-dasharray="{dash}" points="{}"/>"#,
            path.join(" ")
        );
        let ly = TOP + 10.0 + i as f64 * 18.0;
        let lx = LEFT + plot_w + 12.0;
        let mut text = label(*method, alpha);
        if sizes.len() > 1 {
            let _ = write!(text, ", n = {n}");
        }
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{stroke}" stroke-width="2" stroke-dasharray="{dash}"/><text x="{:.2}" y="{:.2}">{text}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 100.0 || v.abs() < 0.01 {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

pub fn emit_power_plot(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    fs::write(path, render_power_plot(rows)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(method: Method, alpha: Option<f64>, kl: f64, rate: f64) -> ExperimentRow {
        ExperimentRow {
            scenario_id: 1,
            dim: 30,
            n: 100,
            k: 1.0,
            kl,
            method,
            alpha,
            rejection_rate: rate,
            mc_reps: 10,
            seed: 1,
        }
    }

    #[test]
    fn single_curve() {
        let rows = vec![row(Method::Rpbt, None, 0.0, 0.05), row(Method::Rpbt, None, 1.0, 0.4)];
        let svg = render_power_plot(&rows).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("#d62728"));
    }

    #[test]
    fn three_curves_with_legend_colors() {
        let mut rows = Vec::new();
        for (kl, r) in [(0.0, 0.05), (2.0, 0.9)] {
            rows.push(row(Method::Rpbt, None, kl, r));
            rows.push(row(Method::AlphaEbt, Some(1.0), kl, r));
            rows.push(row(Method::AlphaEbt, Some(0.1), kl, r));
        }
        let svg = render_power_plot(&rows).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        for c in ["#d62728", "#1f77b4", "#2ca02c"] {
            assert!(svg.contains(c));
        }
        assert!(svg.contains("RPBT"));
        assert!(svg.contains("\u{3b1} = 0.1"));
    }

    #[test]
    fn rates_stay_inside_the_frame() {
        let rows = vec![row(Method::Rpbt, None, 0.0, 0.0), row(Method::Rpbt, None, 1.0, 1.0)];
        let svg = render_power_plot(&rows).unwrap();
        let top = format!("{:.2}", TOP);
        let bottom = format!("{:.2}", HEIGHT - BOTTOM);
        let poly = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert!(poly.contains(&top) && poly.contains(&bottom));
    }

    #[test]
    fn mixed_scenarios_rejected() {
        let mut other = row(Method::Rpbt, None, 0.0, 0.1);
        other.scenario_id = 2;
        assert!(render_power_plot(&[row(Method::Rpbt, None, 0.0, 0.1), other]).is_err());
        assert!(render_power_plot(&[]).is_err());
    }
}
