//! Minimal log-log line plots.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

/// A single polyline over positive `x`; non-positive `y` samples are dropped.
pub fn loglog_plot(title: &str, x_label: &str, y_label: &str, x: &[f64], y: &[f64]) -> String {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && b.is_finite())
        .map(|(a, b)| (a.log10(), b.log10()))
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    if let Some(((x0, x1), (y0, y1))) = bounds(&pts) {
        let sx = |v: f64| MARGIN + (v - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |v: f64| HEIGHT - MARGIN - (v - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        for d in (x0.ceil() as i64)..=(x1.floor() as i64) {
            let px = sx(d as f64);
            let _ = writeln!(
                out,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">1e{d}</text>"#,
                HEIGHT - MARGIN + 16.0
            );
        }
        for d in (y0.ceil() as i64)..=(y1.floor() as i64) {
            let py = sy(d as f64);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{py:.2}" text-anchor="end" font-family="sans-serif" font-size="11">1e{d}</text>"#,
                MARGIN - 6.0
            );
        }
        let path: Vec<String> = pts.iter().map(|(a, b)| format!("{:.2},{:.2}", sx(*a), sy(*b))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="navy" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 18.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    out.push_str("</svg>\n");
    out
}

fn bounds(pts: &[(f64, f64)]) -> Option<((f64, f64), (f64, f64))> {
    if pts.len() < 2 {
        return None;
    }
    let fold = |f: fn(&(f64, f64)) -> f64| {
        pts.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (mut x, mut y) = (fold(|p| p.0), fold(|p| p.1));
    if x.1 - x.0 < 1e-12 {
        x = (x.0 - 0.5, x.1 + 0.5);
    }
    if y.1 - y.0 < 1e-12 {
        y = (y.0 - 0.5, y.1 + 0.5);
    }
    Some((x, y))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
