//! SVG figures: polygon outline, section points as small crosses and
//! distinguished chords as dashed segments. The y axis points up.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use oval_core::{ConvexPolygon, DeltaReport, Point};

use crate::CliError;

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" { "0.000000".into() } else { s }
}

pub fn render_svg(poly: &ConvexPolygon, report: &DeltaReport) -> String {
    let diam = poly.diameter_length();
    let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for v in poly.vertices() {
        lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let (mx, my) = (0.05 * w, 0.05 * h);
    let stroke = 0.005 * diam;
    let arm = 0.015 * diam;
    let flip = |p: Point| Point::new(p.x, -p.y);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        num(lo.x - mx),
        num(-hi.y - my),
        num(w + 2.0 * mx),
        num(h + 2.0 * my)
    );
    let pts: Vec<String> = poly.vertices().iter().map(|&v| flip(v)).map(|p| format!("{},{}", num(p.x), num(p.y))).collect();
    let _ = writeln!(
        s,
        "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
        pts.join(" "),
        num(stroke)
    );
    let _ = writeln!(s, "  <g class=\"section-points\" stroke=\"black\" stroke-width=\"{}\">", num(0.6 * stroke));
    for sp in &report.sections.points {
        let p = flip(sp.bp.point);
        let _ = writeln!(
            s,
            "    <path d=\"M {} {} L {} {} M {} {} L {} {}\"/>",
            num(p.x - arm),
            num(p.y - arm),
            num(p.x + arm),
            num(p.y + arm),
            num(p.x - arm),
            num(p.y + arm),
            num(p.x + arm),
            num(p.y - arm)
        );
    }
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(
        s,
        "  <g class=\"chords\" stroke=\"black\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\">",
        num(0.6 * stroke),
        num(4.0 * stroke),
        num(2.0 * stroke)
    );
    for c in &report.chords {
        let (a, b) = (flip(c.p0.point), flip(poly.vertex(c.q0)));
        let _ = writeln!(
            s,
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            num(a.x),
            num(a.y),
            num(b.x),
            num(b.y)
        );
    }
    let _ = writeln!(s, "  </g>");
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(poly: &ConvexPolygon, report: &DeltaReport, out: &Path) -> Result<String, CliError> {
    let svg = render_svg(poly, report);
    fs::write(out, &svg).map_err(|source| CliError::Io { path: out.to_path_buf(), source })?;
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use oval_core::compute_delta;
    use oval_core::geom::validate_polygon;

    fn square() -> ConvexPolygon {
        validate_polygon(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)])
            .unwrap()
    }

    #[test]
    fn square_figure() {
        let p = square();
        let r = compute_delta(&p).unwrap();
        let svg = render_svg(&p, &r);
        assert_eq!(svg.matches("<path d=").count(), 8);
        assert_eq!(svg.matches("<line ").count(), r.chords.len());
        assert!(svg.contains("viewBox=\"-0.050000 -1.050000 1.100000 1.100000\""));
        assert!(svg.contains(&format!("stroke-width=\"{}\"", num(0.005 * 2f64.sqrt()))));
        assert_eq!(svg, render_svg(&p, &r));
    }

    #[test]
    fn empty_chord_list_is_still_valid() {
        let p = square();
        let mut r = compute_delta(&p).unwrap();
        r.chords.clear();
        let svg = render_svg(&p, &r);
        assert_eq!(svg.matches("<line ").count(), 0);
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<g class=\"chords\""));
    }
}
