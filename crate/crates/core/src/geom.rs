//! Planar primitives: points, segments and validated convex polygons with
//! arclength addressing.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Relative coincidence tolerance, multiplied by the polygon diameter.
pub const REL_LEN_TOL: f64 = 1e-9;
/// Relative tolerance for convexity cross products, multiplied by diameter².
pub const REL_AREA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A closed segment `[a, b]` with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    /// Builds a segment, rejecting endpoints closer than a scale-relative
    /// tolerance (`1e-9` times the largest coordinate magnitude).
    pub fn new(a: Point, b: Point) -> Result<Self> {
        let scale = a.x.abs().max(a.y.abs()).max(b.x.abs()).max(b.y.abs());
        Self::with_tolerance(a, b, REL_LEN_TOL * scale)
    }

    pub fn with_tolerance(a: Point, b: Point, eps_len: f64) -> Result<Self> {
        let length = a.dist(b);
        if !length.is_finite() || length <= eps_len || length == 0.0 {
            return Err(Error::DegenerateSegment { length });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> Point {
        self.a
    }

    pub fn b(&self) -> Point {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }
}

/// Nearest point to `z` on the closed segment, together with the unclamped
/// projection parameter `t = <z-a, b-a> / |b-a|²`.
pub fn closest_point_on_segment(z: Point, seg: &Segment) -> (Point, f64) {
    nearest_on_closed_segment(z, seg.a, seg.b)
}

/// Euclidean distance from `z` to the closed segment.
///
/// In the interior-foot case this is the wedge height `|(z-a) ∧ (b-a)| / |b-a|`,
/// otherwise the distance to the nearer endpoint.
pub fn distance_to_segment(z: Point, seg: &Segment) -> f64 {
    let (_, t) = closest_point_on_segment(z, seg);
    let ab = seg.b - seg.a;
    if t <= 0.0 {
        z.dist(seg.a)
    } else if t >= 1.0 {
        z.dist(seg.b)
    } else {
        (z - seg.a).cross(ab).abs() / ab.norm()
    }
}

/// Same as [`closest_point_on_segment`] but total: a zero-length segment
/// yields `a` with `t = 0`.
pub(crate) fn nearest_on_closed_segment(z: Point, a: Point, b: Point) -> (Point, f64) {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return (a, 0.0);
    }
    let t = (z - a).dot(ab) / len_sq;
    let foot = if t <= 0.0 {
        a
    } else if t >= 1.0 {
        b
    } else {
        a + ab * t
    };
    (foot, t)
}

/// A point on the polygon boundary.
///
/// `point = (1-t) v_edge + t v_{edge+1}` and `s` is its arclength measured
/// counter-clockwise from vertex 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub edge: usize,
    pub t: f64,
    pub s: f64,
    pub point: Point,
}

impl BoundaryPoint {
    pub fn is_vertex(&self) -> bool {
        self.t == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiameterResult {
    pub i: usize,
    pub j: usize,
    pub length: f64,
    /// Every vertex pair within the length tolerance of the maximum,
    /// lexicographically ordered. Always contains `(i, j)`.
    pub ties: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FarthestVertices {
    pub indices: Vec<usize>,
    pub mu: f64,
}

/// Strictly convex polygon with counter-clockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    cum_arclength: Vec<f64>,
    edge_lengths: Vec<f64>,
    perimeter: f64,
    diameter: f64,
}

impl ConvexPolygon {
    /// Validates a vertex loop given in boundary order (either orientation).
    ///
    /// Clockwise input is reversed. Errors name the offending index in the
    /// caller's original numbering.
    pub fn new(raw: &[Point]) -> Result<Self> {
        validate_polygon(raw)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Endpoints of edge `e`, running from `v_e` to `v_{e+1}`.
    pub fn edge(&self, e: usize) -> (Point, Point) {
        (self.vertex(e), self.vertex(e + 1))
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        self.edge_lengths[e]
    }

    pub fn cum_arclength(&self) -> &[f64] {
        &self.cum_arclength
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Maximal vertex distance, cached at construction.
    pub fn diameter_length(&self) -> f64 {
        self.diameter
    }

    /// Coincidence tolerance `1e-9 · diam`.
    pub fn eps_len(&self) -> f64 {
        REL_LEN_TOL * self.diameter
    }

    /// Convexity tolerance `1e-12 · diam²`.
    pub fn eps_area(&self) -> f64 {
        REL_AREA_TOL * self.diameter * self.diameter
    }

    /// Boundary point at arclength `s`, taken modulo the perimeter.
    pub fn point_at_arclength(&self, s: f64) -> BoundaryPoint {
        let l = self.perimeter;
        let mut s = s.rem_euclid(l);
        if s >= l {
            s = 0.0;
        }
        let e = self.cum_arclength.partition_point(|&c| c <= s) - 1;
        let t = ((s - self.cum_arclength[e]) / self.edge_lengths[e]).clamp(0.0, 1.0);
        BoundaryPoint { edge: e, t, s, point: self.interpolate(e, t) }
    }

    pub fn arclength_of(&self, bp: &BoundaryPoint) -> f64 {
        self.cum_arclength[bp.edge] + bp.t * self.edge_lengths[bp.edge]
    }

    /// Boundary point on edge `e` at parameter `t ∈ [0, 1]`. `t = 1` is
    /// normalized to the start of the following edge.
    pub fn boundary_point(&self, e: usize, t: f64) -> BoundaryPoint {
        let n = self.len();
        let e = e % n;
        if t >= 1.0 {
            let next = (e + 1) % n;
            return BoundaryPoint {
                edge: next,
                t: 0.0,
                s: self.cum_arclength[next],
                point: self.vertices[next],
            };
        }
        let t = t.max(0.0);
        BoundaryPoint {
            edge: e,
            t,
            s: self.cum_arclength[e] + t * self.edge_lengths[e],
            point: self.interpolate(e, t),
        }
    }

    pub fn vertex_point(&self, i: usize) -> BoundaryPoint {
        self.boundary_point(i, 0.0)
    }

    fn interpolate(&self, e: usize, t: f64) -> Point {
        if t == 0.0 {
            return self.vertices[e];
        }
        let (a, b) = self.edge(e);
        a.lerp(b, t)
    }

    /// Farthest distance from `x` to the polygon; attained at a vertex.
    pub fn mu(&self, x: Point) -> f64 {
        self.vertices.iter().map(|v| v.dist(x)).fold(0.0, f64::max)
    }

    /// All vertices within `eps_len` of the maximal distance from `x`.
    pub fn farthest_vertices(&self, x: Point) -> FarthestVertices {
        self.farthest_vertices_within(x, self.eps_len())
    }

    pub fn farthest_vertices_within(&self, x: Point, tol: f64) -> FarthestVertices {
        let dists: Vec<f64> = self.vertices.iter().map(|v| v.dist(x)).collect();
        let mu = dists.iter().copied().fold(0.0, f64::max);
        let indices = dists
            .iter()
            .enumerate()
            .filter(|(_, &d)| d >= mu - tol)
            .map(|(i, _)| i)
            .collect();
        FarthestVertices { indices, mu }
    }

    pub fn diameter(&self) -> DiameterResult {
        let n = self.len();
        let tol = self.eps_len();
        let mut ties = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.vertices[i].dist(self.vertices[j]) >= self.diameter - tol {
                    ties.push((i, j));
                }
            }
        }
        let (i, j) = ties[0];
        DiameterResult { i, j, length: self.vertices[i].dist(self.vertices[j]), ties }
    }

    /// Applies an arbitrary point map and revalidates.
    pub fn map_vertices(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        let mapped: Vec<Point> = self.vertices.iter().map(|&v| f(v)).collect();
        validate_polygon(&mapped)
    }
}

/// Farthest vertices of `poly` from `x`; see [`ConvexPolygon::farthest_vertices`].
pub fn farthest_vertices(poly: &ConvexPolygon, x: Point) -> FarthestVertices {
    poly.farthest_vertices(x)
}

pub fn diameter(poly: &ConvexPolygon) -> DiameterResult {
    poly.diameter()
}

pub fn validate_polygon(raw: &[Point]) -> Result<ConvexPolygon> {
    let n = raw.len();
    if n < 3 {
        return Err(Error::TooFewVertices { n });
    }
    if let Some(index) = raw.iter().position(|p| !p.is_finite()) {
        return Err(Error::NonFinite { index });
    }

    let mut diam: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            diam = diam.max(raw[i].dist(raw[j]));
        }
    }
    let eps_len = REL_LEN_TOL * diam;
    let eps_area = REL_AREA_TOL * diam * diam;
    for i in 0..n {
        for j in i + 1..n {
            if raw[i].dist(raw[j]) <= eps_len {
                return Err(Error::DuplicateVertex { i, j });
            }
        }
    }

    let twice_area: f64 = (0..n).map(|i| raw[i].cross(raw[(i + 1) % n])).sum();
    let reversed = twice_area < 0.0;
    let vertices: Vec<Point> =
        if reversed { raw.iter().rev().copied().collect() } else { raw.to_vec() };
    let original = |k: usize| if reversed { n - 1 - k } else { k };

    let mut turning = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let c = vertices[(i + 2) % n];
        let (d1, d2) = (b - a, c - b);
        let cross = d1.cross(d2);
        let index = original((i + 1) % n);
        if cross.abs() <= eps_area {
            return Err(Error::Collinear { index });
        }
        if cross < 0.0 {
            return Err(Error::NonConvex { index });
        }
        turning += cross.atan2(d1.dot(d2));
    }
    let turns = turning / TAU;
    if (turns - 1.0).abs() > 1e-6 {
        return Err(Error::NotSimple { turns });
    }

    let edge_lengths: Vec<f64> = (0..n).map(|i| vertices[i].dist(vertices[(i + 1) % n])).collect();
    let mut cum_arclength = Vec::with_capacity(n);
    let mut acc = 0.0;
    for len in &edge_lengths {
        cum_arclength.push(acc);
        acc += len;
    }

    Ok(ConvexPolygon { vertices, cum_arclength, edge_lengths, perimeter: acc, diameter: diam })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> ConvexPolygon {
        validate_polygon(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by)).unwrap()
    }

    #[test]
    fn closest_point_cases() {
        let s = seg(-1.0, 0.0, 1.0, 0.0);
        let (z, t) = closest_point_on_segment(Point::new(0.0, 1.0), &s);
        assert_eq!(z, Point::new(0.0, 0.0));
        assert_eq!(t, 0.5);

        let (z, t) = closest_point_on_segment(Point::new(2.0, 1.0), &s);
        assert_eq!(z, Point::new(1.0, 0.0));
        assert_eq!(t, 1.5);

        let (z, _) = closest_point_on_segment(Point::new(0.3, 0.4), &seg(0.0, 0.0, 1.0, 0.0));
        assert!((z.x - 0.3).abs() < 1e-15 && z.y == 0.0);
    }

    #[test]
    fn distance_cases() {
        assert_eq!(distance_to_segment(Point::new(0.0, 2.0), &seg(-1.0, 0.0, 1.0, 0.0)), 2.0);
        let d = distance_to_segment(Point::new(3.0, 4.0), &seg(0.0, 0.0, 1.0, 0.0));
        assert!((d - 20f64.sqrt()).abs() < 1e-15);
        assert_eq!(distance_to_segment(Point::new(0.0, 0.0), &seg(0.0, 0.0, 1.0, 0.0)), 0.0);
    }

    #[test]
    fn degenerate_segment_rejected() {
        let p = Point::new(1.0, 1.0);
        assert!(matches!(Segment::new(p, p), Err(Error::DegenerateSegment { .. })));
        assert!(Segment::new(p, Point::new(1.0 + 1e-12, 1.0)).is_err());
    }

    #[test]
    fn square_orientation_is_normalized() {
        let ccw = unit_square();
        assert_eq!(ccw.perimeter(), 4.0);
        let cw = validate_polygon(&[
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(cw.perimeter(), 4.0);
        let twice_area: f64 = (0..4).map(|i| cw.vertex(i).cross(cw.vertex(i + 1))).sum();
        assert!(twice_area > 0.0);
    }

    #[test]
    fn rejects_bad_loops() {
        let collinear = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(matches!(validate_polygon(&collinear), Err(Error::Collinear { index: 1 })));

        let dented = [
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 0.5),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
        ];
        assert!(matches!(validate_polygon(&dented), Err(Error::NonConvex { .. })));

        let dup = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!(matches!(validate_polygon(&dup), Err(Error::DuplicateVertex { i: 1, j: 2 })));

        assert!(matches!(
            validate_polygon(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0)]),
            Err(Error::TooFewVertices { n: 2 })
        ));

        let pentagram: Vec<Point> = (0..5)
            .map(|k| Point::new(1.0, 0.0).rotated(k as f64 * 2.0 * TAU / 5.0))
            .collect();
        assert!(matches!(validate_polygon(&pentagram), Err(Error::NotSimple { .. })));
    }

    #[test]
    fn arclength_addressing() {
        let sq = unit_square();
        let bp = sq.point_at_arclength(0.0);
        assert_eq!((bp.edge, bp.t, bp.point), (0, 0.0, Point::new(0.0, 0.0)));
        let bp = sq.point_at_arclength(2.5);
        assert_eq!(bp.edge, 2);
        assert!((bp.point.x - 0.5).abs() < 1e-15 && bp.point.y == 1.0);
        assert_eq!(sq.point_at_arclength(4.0).s, 0.0);
        assert!((sq.point_at_arclength(-0.5).s - 3.5).abs() < 1e-15);
        assert!(sq.point_at_arclength(1.0).is_vertex());
    }

    #[test]
    fn farthest_vertex_examples() {
        let sq = unit_square();
        let f = sq.farthest_vertices(Point::new(0.5, 0.0));
        assert_eq!(f.indices, vec![2, 3]);
        assert!((f.mu - 1.25f64.sqrt()).abs() < 1e-15);

        let tri = validate_polygon(&[Point::new(-1.0, 0.0), Point::new(1.0, 0.0), Point::new(0.3, 0.8)])
            .unwrap();
        let f = tri.farthest_vertices(Point::new(0.0, 0.0));
        assert_eq!(f.indices, vec![0, 1]);
        assert_eq!(f.mu, 1.0);

        let eq = validate_polygon(&[Point::new(-1.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 3f64.sqrt())])
            .unwrap();
        let f = eq.farthest_vertices(Point::new(-1.0, 0.0));
        assert_eq!(f.indices, vec![1, 2]);
        assert!((f.mu - 2.0).abs() < 1e-15);
    }

    #[test]
    fn diameter_examples() {
        let d = unit_square().diameter();
        assert!((d.length - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.ties, vec![(0, 2), (1, 3)]);
        assert_eq!((d.i, d.j), (0, 2));

        let eq = validate_polygon(&[Point::new(-1.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 3f64.sqrt())])
            .unwrap();
        let d = eq.diameter();
        assert!((d.length - 2.0).abs() < 1e-12);
        assert_eq!(d.ties.len(), 3);
    }
}
