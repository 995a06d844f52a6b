//! CSV and SVG output of a study.

use std::fmt::Write as _;

use super::study::StudyRow;
use super::FitResult;

/// Header of every study CSV.
pub const CSV_HEADER: &str = "epsilon,estimate,reference,abs_err,rel_err,wall_ms";

/// C-style `%.{sig}g` formatting.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| format_sig(v, 12)).unwrap_or_default()
}

/// One row per ε in input order, LF line endings.
pub fn csv_text(rows: &[StudyRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig(r.epsilon, 12),
            format_sig(r.estimate, 12),
            cell(r.reference),
            cell(r.abs_err()),
            cell(r.rel_err()),
            format_sig(r.wall_ms, 12),
        );
    }
    out
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;

/// Content against ε with the fitted line and the reference value.
pub fn svg_chart(title: &str, rows: &[StudyRow], fit: Option<&FitResult>, reference: Option<f64>) -> String {
    let eps_max = rows.iter().map(|r| r.epsilon).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut ys: Vec<f64> = rows.iter().map(|r| r.estimate).collect();
    ys.extend(reference);
    if let Some(f) = fit {
        ys.push(f.limit_estimate);
    }
    let mut y_lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let mut y_hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !y_lo.is_finite() || !y_hi.is_finite() {
        y_lo = 0.0;
        y_hi = 1.0;
    }
    let pad = ((y_hi - y_lo) * 0.1).max(1e-9 * y_hi.abs().max(1.0));
    y_lo -= pad;
    y_hi += pad;
    let px = |e: f64| MARGIN + (WIDTH - 2.0 * MARGIN) * e / (1.1 * eps_max);
    let py = |y: f64| HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * (y - y_lo) / (y_hi - y_lo);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#
    );
    let _ = writeln!(s, r#"<rect width="800" height="600" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="400" y="30" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
        escape(title)
    );
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="400" y="585" text-anchor="middle" font-family="sans-serif" font-size="14">epsilon (0 .. {})</text>"#,
        format_sig(1.1 * eps_max, 4)
    );
    for y in [y_lo + pad, y_hi - pad] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{}</text>"#,
            MARGIN - 6.0,
            py(y) + 4.0,
            format_sig(y, 6)
        );
    }
    if let Some(r) = reference {
        let _ = writeln!(
            s,
            r#"<line x1="{x0}" y1="{:.2}" x2="{x1}" y2="{:.2}" stroke="green" stroke-dasharray="6,4"/>"#,
            py(r),
            py(r)
        );
    }
    if let Some(f) = fit {
        let e1 = 1.1 * eps_max;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="2,3"/>"#,
            px(0.0),
            py(f.limit_estimate),
            px(e1),
            py(f.limit_estimate + f.slope * e1)
        );
    }
    let pts: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.2},{:.2}", px(r.epsilon), py(r.estimate)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        pts.join(" ")
    );
    for r in rows {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="steelblue"/>"#,
            px(r.epsilon),
            py(r.estimate)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(4.4, 12), "4.4");
        assert_eq!(format_sig(0.1, 12), "0.1");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0 * 1000.0, 12), "666.666666667");
        assert_eq!(format_sig(1e-15, 12), "1e-15");
        assert_eq!(format_sig(1.25e-5, 12), "1.25e-05");
        assert_eq!(format_sig(0.0001, 12), "0.0001");
        assert_eq!(format_sig(123456789012.0, 12), "123456789012");
        assert_eq!(format_sig(1234567890123.0, 12), "1.23456789012e+12");
        assert_eq!(format_sig(-2.5, 12), "-2.5");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(9.9999999999996, 12), "10");
    }

    #[test]
    fn csv_layout() {
        let rows = vec![
            StudyRow {
                epsilon: 0.2,
                estimate: 4.8,
                reference: Some(4.8),
                wall_ms: 0.0,
            },
            StudyRow {
                epsilon: 0.1,
                estimate: 4.5,
                reference: None,
                wall_ms: 1.5,
            },
        ];
        let t = csv_text(&rows);
        assert_eq!(
            t,
            "epsilon,estimate,reference,abs_err,rel_err,wall_ms\n0.2,4.8,4.8,0,0,0\n0.1,4.5,,,,1.5\n"
        );
        let svg = svg_chart("t<1>", &rows, None, Some(4.0));
        assert!(svg.starts_with("<svg") && svg.contains("viewBox=\"0 0 800 600\""));
        assert!(svg.contains("t&lt;1&gt;"));
    }
}
