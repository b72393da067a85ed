//! Deterministic SVG of a Ford domain.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::FordDomain;

const SIZE: f64 = 600.0;

fn px(x: f64) -> f64 {
    SIZE / 2.0 * (1.0 + x)
}

fn py(y: f64) -> f64 {
    SIZE / 2.0 * (1.0 - y)
}

pub fn svg_string(dom: &FordDomain) -> String {
    let mut s = String::new();
    let r0 = SIZE / 2.0;
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(s, r#"<circle cx="{r0:.3}" cy="{r0:.3}" r="{r0:.3}" fill="none" stroke="black" stroke-width="1"/>"#).unwrap();
    for (k, side) in dom.sides.iter().enumerate() {
        let a = &side.arc;
        let r = a.circle.radius * r0;
        // with y flipped, a counterclockwise traversal of the domain bends
        // away from the circle centre
        let cross = (a.start - a.circle.center).conj() * (a.end - a.circle.center);
        let sweep = if cross.im > 0.0 { 0 } else { 1 };
        writeln!(
            s,
            r#"<path class="arc" data-side="{k}" d="M {:.4} {:.4} A {r:.4} {r:.4} 0 0 {sweep} {:.4} {:.4}" fill="none" stroke="blue" stroke-width="1.5"/>"#,
            px(a.start.re),
            py(a.start.im),
            px(a.end.re),
            py(a.end.im)
        )
        .unwrap();
    }
    for v in &dom.vertices {
        writeln!(s, r#"<circle class="vertex" cx="{:.4}" cy="{:.4}" r="2" fill="black"/>"#, px(v.re), py(v.im)).unwrap();
    }
    let mut label = 1;
    for c in dom.cycles.iter().filter(|c| c.order > 1) {
        let v = dom.vertices[c.vertices[0]];
        writeln!(
            s,
            r#"<text class="elliptic" x="{:.4}" y="{:.4}" font-size="12">w{label} ({})</text>"#,
            px(v.re) + 4.0,
            py(v.im) - 4.0,
            c.order
        )
        .unwrap();
        label += 1;
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(dom: &FordDomain, path: &Path) -> std::io::Result<()> {
    fs::write(path, svg_string(dom))
}
