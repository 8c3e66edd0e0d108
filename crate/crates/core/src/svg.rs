//! Minimal deterministic SVG scatter plots of two-cluster results.

use std::fmt::Write;

use crate::weights::PointSet;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const TICKS: usize = 5;
const COLORS: [(&str, &str); 2] = [("#1f77b4", "cluster A"), ("#d62728", "cluster B")];
// screen offset applied per unit of the third coordinate
const OBLIQUE: (f64, f64) = (0.5, 0.35);

/// Renders a cluster-colored scatter. Points of dimension 3 are drawn with an
/// oblique projection of the third axis; dimension 1 is drawn on a line.
pub fn scatter(points: &PointSet, signs: &[i8], title: &str, axis_names: &[String]) -> String {
    let planar: Vec<(f64, f64)> = points
        .points()
        .iter()
        .map(|p| match p.len() {
            1 => (p[0], 0.0),
            2 => (p[0], p[1]),
            _ => (p[0] + OBLIQUE.0 * p[2], p[1] + OBLIQUE.1 * p[2]),
        })
        .collect();
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let (lo, hi) = planar
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !lo.is_finite() || hi - lo < 1e-12 {
            (lo.min(0.0) - 1.0, hi.max(0.0) + 1.0)
        } else {
            let pad = 0.05 * (hi - lo);
            (lo - pad, hi + pad)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"#,
            bottom + 5.0,
            bottom + 20.0,
            x = sx(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"#,
            left - 5.0,
            left - 8.0,
            sy(yv) + 4.0,
            y = sy(yv)
        );
    }
    let name = |k: usize| axis_names.get(k).map(String::as_str).unwrap_or("");
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 18.0,
        escape(name(0))
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(name(1))
    );
    if points.dim() >= 3 {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-style="italic">oblique axis: {}</text>"#,
            right,
            HEIGHT - 18.0,
            escape(name(2))
        );
    }
    for (&(x, y), &sign) in planar.iter().zip(signs) {
        let color = COLORS[usize::from(sign < 0)].0;
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}" fill-opacity="0.8"/>"#,
            sx(x),
            sy(y)
        );
    }
    for (k, (color, label)) in COLORS.iter().enumerate() {
        let y = top + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{y:.2}" r="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{label}</text>"#,
            right - 80.0,
            right - 70.0,
            y + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_every_point_once() {
        let pts = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![3.0, -1.0]]).unwrap();
        let names = vec!["PC1".to_string(), "PC2".to_string()];
        let svg = scatter(&pts, &[1, -1, -1], "t <1>", &names);
        assert_eq!(svg.matches("r=\"3.5\"").count(), 3);
        assert_eq!(svg.matches("#d62728\" fill-opacity").count(), 2);
        assert!(svg.contains("PC1") && svg.contains("t &lt;1&gt;"));
        assert_eq!(svg, scatter(&pts, &[1, -1, -1], "t <1>", &names));
    }

    #[test]
    fn degenerate_extent() {
        let pts = PointSet::new(vec![vec![1.0, 1.0, 1.0]; 3]).unwrap();
        let svg = scatter(&pts, &[1, 1, 1], "", &[]);
        assert!(!svg.contains("NaN"));
        assert!(svg.contains("oblique axis"));
    }
}
