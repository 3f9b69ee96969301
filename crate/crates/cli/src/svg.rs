//! Self-contained SVG line plot of μ ↦ Im m(μ, 1).

use std::f64::consts::PI;
use std::fmt::Write as _;

pub const X_RANGE: (f64, f64) = (-10.0, 10.0);
pub const Y_RANGE: (f64, f64) = (-5.0, 4.0);
const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

struct Frame;

impl Frame {
    fn x(v: f64) -> f64 {
        MARGIN + (v - X_RANGE.0) / (X_RANGE.1 - X_RANGE.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(v: f64) -> f64 {
        HEIGHT - MARGIN - (v - Y_RANGE.0) / (Y_RANGE.1 - Y_RANGE.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Points outside the window break the polyline.
fn polylines(points: &[(f64, f64)]) -> Vec<String> {
    let inside = |p: &(f64, f64)| {
        p.0 >= X_RANGE.0 && p.0 <= X_RANGE.1 && p.1 >= Y_RANGE.0 && p.1 <= Y_RANGE.1
    };
    let mut out = vec![];
    let mut cur = String::new();
    for p in points {
        if inside(p) {
            let _ = write!(cur, "{:.2},{:.2} ", Frame::x(p.0), Frame::y(p.1));
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

pub fn figure(points: &[(f64, f64)], zeros: &[f64]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (x0, x1) = (Frame::x(X_RANGE.0), Frame::x(X_RANGE.1));
    let (y0, y1) = (Frame::y(Y_RANGE.0), Frame::y(Y_RANGE.1));
    let _ = writeln!(
        s,
        r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for t in (-10..=10).step_by(2) {
        let x = Frame::x(t as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            y0 + 18.0
        );
    }
    for t in -5..=4 {
        let y = Frame::y(t as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
    }
    let (ax, ay) = (Frame::x(0.0), Frame::y(0.0));
    let _ = writeln!(
        s,
        r##"<line x1="{x0:.2}" y1="{ay:.2}" x2="{x1:.2}" y2="{ay:.2}" stroke="#999"/>"##
    );
    let _ = writeln!(
        s,
        r##"<line x1="{ax:.2}" y1="{y0:.2}" x2="{ax:.2}" y2="{y1:.2}" stroke="#999"/>"##
    );
    let yp = Frame::y(PI);
    let _ = writeln!(
        s,
        r##"<line x1="{x0:.2}" y1="{yp:.2}" x2="{x1:.2}" y2="{yp:.2}" stroke="#999" stroke-dasharray="4 4"/>"##
    );
    let _ = writeln!(
        s,
        r##"<text x="{:.2}" y="{:.2}" fill="#666">π</text>"##,
        x1 - 14.0,
        yp - 4.0
    );
    for line in polylines(points) {
        let _ = writeln!(
            s,
            r##"<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{}"/>"##,
            line.trim_end()
        );
    }
    for &z in zeros {
        if z >= X_RANGE.0 && z <= X_RANGE.1 {
            let _ = writeln!(
                s,
                r##"<circle cx="{:.2}" cy="{ay:.2}" r="3.5" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
                Frame::x(z)
            );
            let _ = writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" fill="#c0392b">μ₀ = {z:.6}</text>"##,
                Frame::x(z) + 6.0,
                ay + 14.0
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">μ</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Im m(μ, 1)</text>"#,
        (x0 + x1) / 2.0,
        y1 - 12.0
    );
    s.push_str("</svg>\n");
    s
}
