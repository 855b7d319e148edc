use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;

/// Shortest form that still carries 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else {
        x.to_string()
    }
}

/// Header row plus one row per record; empty cells for missing values.
pub fn csv(header: &[&str], rows: &[Vec<Option<f64>>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| c.map(num).unwrap_or_default()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Draw markers instead of a connected line.
    pub scatter: bool,
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// A plain SVG chart: frame, min/max tick labels, one polyline per series.
pub fn svg_chart(series: &[Series], x_label: &str, y_label: &str) -> String {
    let (w, h, pad) = (640.0, 400.0, 56.0);
    let all = series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    y0 = y0.min(0.0);
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(out, r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#, w - 2.0 * pad, h - 2.0 * pad);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, w / 2.0, h - 12.0);
    let _ = writeln!(out, r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{y_label}</text>"#, h / 2.0, h / 2.0);
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="{anchor}">{x:.4}</text>"#, sx(x), h - pad + 16.0);
    }
    for y in [y0, y1] {
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{y:.4}</text>"#, pad - 4.0, sy(y) + 4.0);
    }
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<(f64, f64)> = s.points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
        if s.scatter {
            for (x, y) in pts {
                let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, sx(x), sy(y));
            }
        } else {
            let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        }
        let _ = writeln!(out, r#"<text x="{}" y="{}" fill="{color}">{}</text>"#, w - pad + 4.0 - 120.0, pad + 16.0 * (k as f64 + 1.0), s.label);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, 12345.678] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_has_one_header() {
        let text = csv(&["a", "b"], &[vec![Some(1.0), None]]);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines, vec!["a,b", "1.0000000000000000e0,"]);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let s = svg_chart(&[Series { label: "u".into(), points: vec![(0.0, 0.0), (1.0, 2.0)], scatter: false }], "t", "u");
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("<polyline"));
    }
}
