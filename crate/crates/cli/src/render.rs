use std::fmt::Write;

use symtri::enumeration::Triangulation;
use symtri::geometry::{LatticePoint, PointConfiguration};

const UNIT: i64 = 40;
const MARGIN: i64 = 20;

/// Standalone SVG of a triangulation: lattice points as dots, triangle
/// edges as 1 px black lines, optionally the dashed symmetry axis.
pub fn svg(config: &PointConfiguration, t: &Triangulation, axis: bool) -> String {
    let d = i64::from(config.region().d);
    let size = d * UNIT + 2 * MARGIN;
    let at = |p: LatticePoint| (MARGIN + p.x * UNIT, MARGIN + (d - p.y) * UNIT);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    if axis {
        let (x0, y0) = at(LatticePoint::new(0, 0));
        let (x1, y1) = (x0 + d * UNIT / 2, y0 - d * UNIT / 2);
        let _ = writeln!(
            out,
            r#"<line class="axis" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="gray" stroke-width="1" stroke-dasharray="4 4"/>"#
        );
    }
    for e in t.edges() {
        let (x1, y1) = at(config.point(e.0[0]));
        let (x2, y2) = at(config.point(e.0[1]));
        let _ = writeln!(
            out,
            r#"<line class="edge" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="1"/>"#
        );
    }
    for &p in config.points() {
        let (cx, cy) = at(p);
        let _ = writeln!(out, r#"<circle class="point" cx="{cx}" cy="{cy}" r="3" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
