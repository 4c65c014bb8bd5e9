//! Minimal static SVG charts.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str, comment: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    // `--` may not appear inside an XML comment.
    let _ = writeln!(out, "<!-- {} -->", comment.replace("--", "- -"));
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
}

fn axes(out: &mut String, xlabel: &str, ylabel: &str, ymax: f64) {
    let (x0, y0, y1) = (LEFT, H - BOTTOM, TOP);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#, W - RIGHT);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for k in 0..=4 {
        let v = ymax * k as f64 / 4.0;
        let y = y0 - (y0 - y1) * k as f64 / 4.0;
        let _ = writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, x0 - 6.0, y + 4.0, tick(v));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (x0 + W - RIGHT) / 2.0, H - 15.0, escape(xlabel));
    let _ = writeln!(
        out,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

fn nice_max(m: f64) -> f64 {
    if m > 0.0 && m.is_finite() {
        m * 1.05
    } else {
        1.0
    }
}

/// Polyline of `(x, y)` points.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, points: &[(f64, f64)], comment: &str) -> String {
    let mut out = String::new();
    header(&mut out, title, comment);
    let ymin = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).min(0.0);
    let ymax = nice_max(points.iter().map(|p| p.1).fold(0.0, f64::max));
    axes(&mut out, xlabel, ylabel, ymax);
    let xmax = points.iter().map(|p| p.0).fold(0.0, f64::max).max(1.0);
    let sx = |x: f64| LEFT + (W - LEFT - RIGHT) * x / xmax;
    let sy = |y: f64| (H - BOTTOM) - (H - BOTTOM - TOP) * (y - ymin) / (ymax - ymin);
    let path: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let _ = writeln!(out, r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#, PALETTE[0], path.join(" "));
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, W - RIGHT, H - BOTTOM + 16.0, tick(xmax));
    out.push_str("</svg>\n");
    out
}

/// One bar series per entry of `series`, grouped by category.
pub fn bar_chart(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    categories: &[String],
    series: &[(String, Vec<f64>)],
    comment: &str,
) -> String {
    let mut out = String::new();
    header(&mut out, title, comment);
    let ymax = nice_max(series.iter().flat_map(|s| s.1.iter().copied()).fold(0.0, f64::max));
    axes(&mut out, xlabel, ylabel, ymax);
    let plot_w = W - LEFT - RIGHT;
    let group_w = plot_w / categories.len().max(1) as f64;
    let bar_w = group_w * 0.8 / series.len().max(1) as f64;
    let scale = (H - BOTTOM - TOP) / ymax;
    for (c, label) in categories.iter().enumerate() {
        let gx = LEFT + group_w * c as f64 + group_w * 0.1;
        for (s, (_, values)) in series.iter().enumerate() {
            let v = values.get(c).copied().unwrap_or(0.0).max(0.0);
            let h = v * scale;
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                gx + bar_w * s as f64,
                H - BOTTOM - h,
                bar_w,
                h,
                PALETTE[s % PALETTE.len()]
            );
        }
        if categories.len() <= 24 {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
                gx + group_w * 0.4,
                H - BOTTOM + 14.0,
                escape(label)
            );
        }
    }
    for (s, (name, _)) in series.iter().enumerate() {
        let y = TOP + 14.0 * s as f64;
        let _ = writeln!(out, r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/>"#, W - RIGHT - 110.0, y, PALETTE[s % PALETTE.len()]);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, W - RIGHT - 95.0, y + 9.0, escape(name));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comment_cannot_close_early() {
        let s = line_chart("t", "x", "y", &[(0.0, 1.0), (1.0, 2.0)], "a -- b -->");
        assert!(s.contains("<!-- a - - b - -> -->"));
        assert!(s.ends_with("</svg>\n"));
    }

    #[test]
    fn bars_per_series_and_category() {
        let cats = vec!["0".to_string(), "1".to_string()];
        let s = bar_chart("t", "x", "y", &cats, &[("a".into(), vec![1.0, 2.0]), ("b".into(), vec![0.5, 0.0])], "");
        assert_eq!(s.matches("<rect").count(), 1 + 4 + 2);
    }

    #[test]
    fn flat_series_does_not_divide_by_zero() {
        let s = line_chart("t", "x", "y", &[(0.0, 0.0), (1.0, 0.0)], "");
        assert!(!s.contains("NaN"));
    }
}
