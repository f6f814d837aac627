//! Deterministic SVG line plots of spectrum profiles.

use std::fmt::Write as _;

use kleinian_spectra::formulas::{Source, SpectrumProfile};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Axes θ ∈ [0, 1] against value, one polyline per profile. Box
/// dimensions (no θ) are drawn as horizontal lines. Closed forms are
/// solid, empirical profiles dashed.
pub fn render(profiles: &[(String, SpectrumProfile)]) -> String {
    let top = profiles.iter().flat_map(|(_, p)| p.values.iter().copied()).fold(1.0f64, f64::max);
    let y_max = (top * 2.0).ceil() / 2.0;
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |t: f64| LEFT + t * pw;
    let sy = |v: f64| TOP + (1.0 - v / y_max) * ph;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{:.2} {:.2} L{:.2} {:.2} L{:.2} {:.2}" fill="none" stroke="black"/>"#,
        sx(0.0),
        sy(y_max),
        sx(0.0),
        sy(0.0),
        sx(1.0),
        sy(0.0)
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x:.2}" y2="{y2:.2}" stroke="black"/><text x="{x:.2}" y="{ty:.2}" text-anchor="middle">{t}</text>"#,
            x = sx(t),
            y = sy(0.0),
            y2 = sy(0.0) + 5.0,
            ty = sy(0.0) + 18.0
        );
    }
    let steps = (y_max / 0.5).round() as usize;
    for i in 0..=steps {
        let v = i as f64 * 0.5;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" text-anchor="end">{v}</text>"#,
            x = sx(0.0) - 5.0,
            x2 = sx(0.0),
            y = sy(v),
            tx = sx(0.0) - 8.0,
            ty = sy(v) + 4.0
        );
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">θ</text>"#, sx(0.5), HEIGHT - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">dimension</text>"#,
        sy(y_max / 2.0),
        sy(y_max / 2.0)
    );
    for (i, (label, p)) in profiles.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let dash = if p.source == Source::Empirical { r#" stroke-dasharray="6 4""# } else { "" };
        let pts: Vec<(f64, f64)> = if p.kind.is_spectrum() {
            p.theta.iter().zip(&p.values).filter_map(|(t, v)| t.map(|t| (t, *v))).collect()
        } else {
            vec![(0.0, p.values[0]), (1.0, p.values[0])]
        };
        let coords: Vec<String> = pts.iter().map(|(t, v)| format!("{:.2},{:.2}", sx(*t), sy(*v))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"{dash}/>"#,
            coords.join(" ")
        );
        let ly = TOP + 16.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
