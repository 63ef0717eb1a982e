//! Static SVG scatter of a sampled range with its convex hull.

use std::fmt::Write;

use berezin_core::geometry::convex_hull;
use num_complex::Complex64;

const SIZE: f64 = 640.0;
const PAD: f64 = 48.0;

pub fn render(values: &[Complex64], title: &str) -> String {
    let (mut lo, mut hi) = (
        Complex64::new(f64::INFINITY, f64::INFINITY),
        Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for v in values {
        lo.re = lo.re.min(v.re);
        lo.im = lo.im.min(v.im);
        hi.re = hi.re.max(v.re);
        hi.im = hi.im.max(v.im);
    }
    if values.is_empty() {
        lo = Complex64::new(-1.0, -1.0);
        hi = Complex64::new(1.0, 1.0);
    }
    // square window so the picture is not distorted
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9) * 1.05;
    let mid = (lo + hi) * 0.5;
    let x0 = mid.re - span / 2.0;
    let y0 = mid.im - span / 2.0;
    let scale = (SIZE - 2.0 * PAD) / span;
    let px = |v: Complex64| (PAD + (v.re - x0) * scale, SIZE - PAD - (v.im - y0) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let inner = SIZE - 2.0 * PAD;
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{inner}" height="{inner}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="{:.1}" font-family="sans-serif" font-size="14">{}</text>"#,
        PAD - 16.0,
        escape(title)
    );
    let ticks = [
        (PAD, SIZE - PAD + 16.0, format!("{:.4}", x0), "start"),
        (SIZE - PAD, SIZE - PAD + 16.0, format!("{:.4}", x0 + span), "end"),
        (PAD - 4.0, SIZE - PAD, format!("{:.4}", y0), "end"),
        (PAD - 4.0, PAD + 10.0, format!("{:.4}", y0 + span), "end"),
    ];
    for (x, y, label, anchor) in ticks {
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{label}</text>"#
        );
    }
    if x0 < 0.0 && x0 + span > 0.0 {
        let (x, _) = px(Complex64::new(0.0, 0.0));
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{PAD}" x2="{x:.2}" y2="{:.2}" stroke="#bbb" stroke-width="0.5"/>"##,
            SIZE - PAD
        );
    }
    if y0 < 0.0 && y0 + span > 0.0 {
        let (_, y) = px(Complex64::new(0.0, 0.0));
        let _ = writeln!(
            s,
            r##"<line x1="{PAD}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#bbb" stroke-width="0.5"/>"##,
            SIZE - PAD
        );
    }

    let _ = writeln!(s, r##"<g fill="#1f5fa8" fill-opacity="0.6">"##);
    for &v in values {
        let (x, y) = px(v);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.2"/>"#);
    }
    let _ = writeln!(s, "</g>");

    let hull = convex_hull(values);
    if !hull.is_empty() {
        let mut pts: Vec<String> = hull
            .iter()
            .map(|&v| {
                let (x, y) = px(v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        pts.push(pts[0].clone());
        let _ = writeln!(
            s,
            r##"<polyline class="hull" points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
            pts.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
