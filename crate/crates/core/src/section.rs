//! Exact computation of δ(P) for a convex polygon.
//!
//! Every perpendicular bisector of a vertex pair is cut with the boundary.
//! The cut points (section points) split the boundary into open arcs on
//! which the farthest vertex `y(S)` is constant and unique. Splitting those
//! arcs further at polygon vertices gives refined sections, each a straight
//! piece of one edge, on which `min μ = dist(y(S), piece)` is elementary.
//! δ(P) is the minimum of these distances over all refined sections.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{BoundaryPoint, ConvexPolygon, Point};

/// Tie tolerance for the farthest-vertex probe at section midpoints,
/// relative to the diameter. Much tighter than the coincidence tolerance:
/// on short sections the two leading distances legitimately differ by far
/// less than `1e-9 · diam`.
pub const PROBE_REL_TOL: f64 = 1e-13;

const PAR_THRESHOLD: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisector {
    pub i: usize,
    pub j: usize,
    pub midpoint: Point,
    /// Unit vector along the bisector line.
    pub direction: Point,
}

impl Bisector {
    pub fn new(poly: &ConvexPolygon, i: usize, j: usize) -> Self {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let (a, b) = (poly.vertex(i), poly.vertex(j));
        let ab = b - a;
        let direction = ab.perp() * (1.0 / ab.norm());
        Self { i, j, midpoint: a.midpoint(b), direction }
    }

    /// Signed distance of `p` from the bisector line, positive on the side of `v_j`.
    pub fn signed_distance(&self, p: Point) -> f64 {
        (p - self.midpoint).cross(self.direction)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectorCut {
    /// Crossings sorted by arclength.
    pub points: Vec<BoundaryPoint>,
    /// Set when a whole edge lies on the bisector line.
    pub degenerate: bool,
}

/// Crossings of the bisector line with the polygon boundary.
///
/// Vertices within `eps_len` of the line count as one crossing each; an
/// edge lying on the line contributes both endpoints and flags the cut as
/// degenerate.
pub fn bisector_boundary_intersections(poly: &ConvexPolygon, bis: &Bisector) -> BisectorCut {
    let n = poly.len();
    let eps = poly.eps_len();
    let sd: Vec<f64> = poly.vertices().iter().map(|&v| bis.signed_distance(v)).collect();
    let on_line: Vec<bool> = sd.iter().map(|d| d.abs() < eps).collect();

    let mut points = Vec::new();
    let mut degenerate = false;
    for e in 0..n {
        let next = (e + 1) % n;
        if on_line[e] {
            points.push(poly.vertex_point(e));
            if on_line[next] {
                degenerate = true;
            }
        } else if !on_line[next] && (sd[e] > 0.0) != (sd[next] > 0.0) {
            let t = sd[e] / (sd[e] - sd[next]);
            points.push(poly.boundary_point(e, t));
        }
    }
    points.sort_by(|p, q| p.s.total_cmp(&q.s));
    BisectorCut { points, degenerate }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionPoint {
    pub bp: BoundaryPoint,
    /// Vertex pairs whose bisectors produced this point.
    pub sources: Vec<(usize, usize)>,
}

/// Open boundary arc between two consecutive section points.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub start_s: f64,
    /// May exceed the perimeter for the arc that wraps past vertex 0.
    pub end_s: f64,
    pub start: BoundaryPoint,
    pub end: BoundaryPoint,
    pub farthest_vertex: usize,
}

impl Section {
    pub fn length(&self) -> f64 {
        self.end_s - self.start_s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionDecomposition {
    pub points: Vec<SectionPoint>,
    pub sections: Vec<Section>,
    pub degenerate_bisectors: Vec<(usize, usize)>,
    pub merge_tolerance: f64,
}

impl SectionDecomposition {
    pub fn is_degenerate(&self) -> bool {
        !self.degenerate_bisectors.is_empty()
    }
}

/// A section piece lying on a single edge.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedSection {
    pub section: usize,
    pub edge: usize,
    pub start_s: f64,
    pub end_s: f64,
    pub a: Point,
    pub b: Point,
    pub farthest_vertex: usize,
    pub z_star: Point,
    /// Arclength of `z_star`, unreduced (may exceed the perimeter).
    pub z_star_s: f64,
    /// Distance from the farthest vertex to the closed piece.
    pub d: f64,
}

impl RefinedSection {
    pub fn length(&self) -> f64 {
        self.end_s - self.start_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordRule {
    /// `[z*, y(S)]` for a minimizing refined section.
    NearestPoint,
    /// `[a, ã]` for an endpoint `a` of a minimizing refined section with a
    /// second vertex `ã` at distance δ.
    SharedEndpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishedChord {
    pub p0: BoundaryPoint,
    pub q0: usize,
    pub length: f64,
    pub rule: ChordRule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaReport {
    pub delta: f64,
    pub perimeter: f64,
    /// `L / δ`.
    pub quotient: f64,
    pub chords: Vec<DistinguishedChord>,
    pub sections: SectionDecomposition,
    pub refined: Vec<RefinedSection>,
    /// Indices into `refined` attaining δ within `eps_len`.
    pub minimizing: Vec<usize>,
    /// `L ≤ 2πδ`; a theorem, so `false` indicates a bug.
    pub upper_bound_holds: bool,
    /// `L ≥ πδ`; conjectured, reported only.
    pub lower_bound_holds: bool,
}

fn vertex_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn collect_cuts(poly: &ConvexPolygon) -> Vec<(BisectorCut, (usize, usize))> {
    let pairs = vertex_pairs(poly.len());
    let cut = |&(i, j): &(usize, usize)| {
        (bisector_boundary_intersections(poly, &Bisector::new(poly, i, j)), (i, j))
    };
    if pairs.len() >= PAR_THRESHOLD {
        pairs.par_iter().map(cut).collect()
    } else {
        pairs.iter().map(cut).collect()
    }
}

/// Section decomposition with the default merge tolerance `eps_len`.
///
/// On an ambiguous probe the decomposition is retried once with half the
/// merge tolerance before the error is returned.
pub fn build_sections(poly: &ConvexPolygon) -> Result<SectionDecomposition> {
    let tol = poly.eps_len();
    match build_sections_with_tolerance(poly, tol) {
        Err(Error::AmbiguousSection { .. }) => build_sections_with_tolerance(poly, 0.5 * tol),
        other => other,
    }
}

pub fn build_sections_with_tolerance(
    poly: &ConvexPolygon,
    merge_tol: f64,
) -> Result<SectionDecomposition> {
    let l = poly.perimeter();
    let cuts = collect_cuts(poly);

    let degenerate_bisectors: Vec<(usize, usize)> =
        cuts.iter().filter(|(c, _)| c.degenerate).map(|(_, p)| *p).collect();
    let mut raw: Vec<(BoundaryPoint, (usize, usize))> =
        cuts.into_iter().flat_map(|(c, p)| c.points.into_iter().map(move |bp| (bp, p))).collect();
    raw.sort_by(|a, b| a.0.s.total_cmp(&b.0.s).then(a.1.cmp(&b.1)));

    let mut points: Vec<SectionPoint> = Vec::new();
    let mut anchor_s = f64::NEG_INFINITY;
    for (bp, src) in raw {
        if bp.s - anchor_s <= merge_tol {
            let last = points.last_mut().expect("cluster exists");
            if bp.is_vertex() && !last.bp.is_vertex() {
                last.bp = bp;
            }
            if !last.sources.contains(&src) {
                last.sources.push(src);
            }
        } else {
            anchor_s = bp.s;
            points.push(SectionPoint { bp, sources: vec![src] });
        }
    }
    if points.len() > 1 {
        let first_s = points[0].bp.s;
        let last_s = points[points.len() - 1].bp.s;
        if first_s + l - last_s <= merge_tol {
            let last = points.pop().expect("non-empty");
            for src in last.sources {
                if !points[0].sources.contains(&src) {
                    points[0].sources.push(src);
                }
            }
            if last.bp.is_vertex() && !points[0].bp.is_vertex() {
                points[0].bp = last.bp;
            }
        }
    }

    let k = points.len();
    let probe_tol = PROBE_REL_TOL * poly.diameter_length();
    let make_section = |idx: usize| -> Result<Section> {
        let start = points[idx].bp;
        let (end, end_s) = if idx + 1 < k {
            (points[idx + 1].bp, points[idx + 1].bp.s)
        } else {
            (points[0].bp, points[0].bp.s + l)
        };
        let mid_s = 0.5 * (start.s + end_s);
        let probe = poly.point_at_arclength(mid_s);
        let far = poly.farthest_vertices_within(probe.point, probe_tol);
        if far.indices.len() != 1 {
            return Err(Error::AmbiguousSection { s: probe.s, candidates: far.indices });
        }
        Ok(Section { start_s: start.s, end_s, start, end, farthest_vertex: far.indices[0] })
    };
    let sections: Vec<Section> = if k >= PAR_THRESHOLD {
        (0..k).into_par_iter().map(make_section).collect::<Result<_>>()?
    } else {
        (0..k).map(make_section).collect::<Result<_>>()?
    };

    Ok(SectionDecomposition { points, sections, degenerate_bisectors, merge_tolerance: merge_tol })
}

struct Piece {
    edge: usize,
    start_s: f64,
    end_s: f64,
    a: Point,
    b: Point,
}

fn section_pieces(poly: &ConvexPolygon, section: &Section) -> Vec<Piece> {
    let n = poly.len();
    let mut pieces = Vec::new();
    let mut edge = section.start.edge;
    let mut cur_s = section.start_s;
    let mut cur = section.start.point;
    let mut vertex_s = poly.cum_arclength()[edge];
    loop {
        let next = (edge + 1) % n;
        vertex_s += poly.edge_length(edge);
        let ends_here = (section.end.is_vertex() && section.end.edge == next)
            || vertex_s >= section.end_s
            || pieces.len() >= n;
        if ends_here {
            pieces.push(Piece {
                edge,
                start_s: cur_s,
                end_s: section.end_s,
                a: cur,
                b: section.end.point,
            });
            return pieces;
        }
        let v = poly.vertex(next);
        pieces.push(Piece { edge, start_s: cur_s, end_s: vertex_s, a: cur, b: v });
        edge = next;
        cur_s = vertex_s;
        cur = v;
    }
}

fn distance_to_closed(z: Point, a: Point, b: Point) -> (Point, f64, f64) {
    let (foot, t) = crate::geom::nearest_on_closed_segment(z, a, b);
    let ab = b - a;
    let d = if t > 0.0 && t < 1.0 { (z - a).cross(ab).abs() / ab.norm() } else { z.dist(foot) };
    (foot, t.clamp(0.0, 1.0), d)
}

/// Splits every section at the polygon vertices it contains.
pub fn refine_sections(poly: &ConvexPolygon, dec: &SectionDecomposition) -> Vec<RefinedSection> {
    let mut out = Vec::with_capacity(dec.sections.len() + poly.len());
    for (id, section) in dec.sections.iter().enumerate() {
        let y = poly.vertex(section.farthest_vertex);
        for piece in section_pieces(poly, section) {
            let (z_star, t, d) = distance_to_closed(y, piece.a, piece.b);
            out.push(RefinedSection {
                section: id,
                edge: piece.edge,
                start_s: piece.start_s,
                end_s: piece.end_s,
                a: piece.a,
                b: piece.b,
                farthest_vertex: section.farthest_vertex,
                z_star,
                z_star_s: piece.start_s + t * (piece.end_s - piece.start_s),
                d,
            });
        }
    }
    out
}

/// δ(P) together with sections, refined sections and distinguished chords.
pub fn compute_delta(poly: &ConvexPolygon) -> Result<DeltaReport> {
    let sections = build_sections(poly)?;
    let refined = refine_sections(poly, &sections);
    let delta = refined.iter().map(|r| r.d).fold(f64::INFINITY, f64::min);
    let eps = poly.eps_len();
    let minimizing: Vec<usize> =
        refined.iter().enumerate().filter(|(_, r)| r.d <= delta + eps).map(|(i, _)| i).collect();
    let l = poly.perimeter();
    let mut report = DeltaReport {
        delta,
        perimeter: l,
        quotient: l / delta,
        chords: Vec::new(),
        sections,
        refined,
        minimizing,
        upper_bound_holds: l <= 2.0 * PI * delta * (1.0 + 1e-12),
        lower_bound_holds: l >= PI * delta,
    };
    report.chords = distinguished_chords(poly, &report);
    Ok(report)
}

/// All distinguished chords, from the nearest-point rule and the
/// shared-endpoint rule applied to every minimizing refined section.
pub fn distinguished_chords(poly: &ConvexPolygon, report: &DeltaReport) -> Vec<DistinguishedChord> {
    let eps = poly.eps_len();
    let delta = report.delta;
    let mut chords: Vec<DistinguishedChord> = Vec::new();
    let mut push = |p0: BoundaryPoint, q0: usize, rule: ChordRule| {
        let l = poly.perimeter();
        let dup = chords.iter().any(|c| {
            let ds = (c.p0.s - p0.s).rem_euclid(l);
            c.q0 == q0 && ds.min(l - ds) <= eps
        });
        if !dup {
            let length = p0.point.dist(poly.vertex(q0));
            chords.push(DistinguishedChord { p0, q0, length, rule });
        }
    };

    for &idx in &report.minimizing {
        let r = &report.refined[idx];
        let y = r.farthest_vertex;
        push(poly.point_at_arclength(r.z_star_s), y, ChordRule::NearestPoint);

        for (pt, s) in [(r.a, r.start_s), (r.b, r.end_s)] {
            if (pt.dist(poly.vertex(y)) - delta).abs() > eps {
                continue;
            }
            let bp = poly.point_at_arclength(s);
            for q in 0..poly.len() {
                if q != y && (pt.dist(poly.vertex(q)) - delta).abs() <= eps {
                    push(bp, q, ChordRule::SharedEndpoint);
                }
            }
        }
    }
    chords.sort_by(|a, b| a.p0.s.total_cmp(&b.p0.s).then(a.q0.cmp(&b.q0)));
    chords
}
