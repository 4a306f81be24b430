//! Smooth strictly convex curves given by a trigonometric support function
//! `h(θ) = a0 + Σ_{m≥2} (a_m cos mθ + b_m sin mθ)`, and polygons inscribed
//! in them.
//!
//! The point with outward normal `(cos θ, sin θ)` is
//! `h(θ)·(cos θ, sin θ) + h'(θ)·(-sin θ, cos θ)`, the radius of curvature is
//! `ρ = h + h''`, and arclength is `∫ρ dθ = ∫h dθ + h'`.
//!
//! Bounds on δ(Γ) come from an inscribed polygon P whose consecutive
//! vertices are at most λ apart along Γ, with λ < π/(2k) for a curvature
//! bound k: `δ(P) ≤ δ(Γ) ≤ δ(P) + λ·tan(kλ)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::geom::{validate_polygon, ConvexPolygon, Point};
use crate::section::compute_delta;

/// Grid used for the strict-convexity check and the default curvature bound.
pub const DEFAULT_QUADRATURE: usize = 2048;
/// Table size for arclength inversion.
const ARCLENGTH_TABLE: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub order: u32,
    pub cos: f64,
    pub sin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportCurve {
    a0: f64,
    harmonics: Vec<Harmonic>,
}

impl SupportCurve {
    /// Validates coefficients and strict convexity (`ρ > 0` everywhere).
    /// First-order terms are rejected since they only translate the curve.
    pub fn new(a0: f64, harmonics: Vec<Harmonic>) -> Result<Self> {
        if !(a0.is_finite() && a0 > 0.0) {
            return Err(Error::InvalidParameter(format!("a0 must be positive, got {a0}")));
        }
        let mut seen = Vec::new();
        for h in &harmonics {
            if h.order < 2 {
                return Err(Error::InvalidParameter(format!(
                    "harmonic order {} not allowed (orders start at 2)",
                    h.order
                )));
            }
            if !(h.cos.is_finite() && h.sin.is_finite()) {
                return Err(Error::InvalidParameter(format!("harmonic {} is not finite", h.order)));
            }
            if seen.contains(&h.order) {
                return Err(Error::InvalidParameter(format!("harmonic {} given twice", h.order)));
            }
            seen.push(h.order);
        }
        let curve = Self { a0, harmonics };
        let (theta, rho) = curve.min_radius(DEFAULT_QUADRATURE.max(16 * curve.max_order() as usize));
        if rho <= 0.0 {
            return Err(Error::NotStrictlyConvex { theta, rho });
        }
        Ok(curve)
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::new(radius, Vec::new())
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn harmonics(&self) -> &[Harmonic] {
        &self.harmonics
    }

    pub fn max_order(&self) -> u32 {
        self.harmonics.iter().map(|h| h.order).max().unwrap_or(0)
    }

    /// Odd orders only: `h(θ) + h(θ+π) = 2·a0` for every θ.
    pub fn is_constant_breadth(&self) -> bool {
        self.harmonics.iter().all(|h| h.order % 2 == 1 || (h.cos == 0.0 && h.sin == 0.0))
    }

    fn eval(&self, theta: f64, derivative: u32) -> f64 {
        let mut acc = if derivative == 0 { self.a0 } else { 0.0 };
        for h in &self.harmonics {
            let m = h.order as f64;
            let (s, c) = (m * theta).sin_cos();
            acc += match derivative {
                0 => h.cos * c + h.sin * s,
                1 => m * (h.sin * c - h.cos * s),
                _ => -m * m * (h.cos * c + h.sin * s),
            };
        }
        acc
    }

    pub fn support(&self, theta: f64) -> f64 {
        self.eval(theta, 0)
    }

    pub fn support_d1(&self, theta: f64) -> f64 {
        self.eval(theta, 1)
    }

    pub fn support_d2(&self, theta: f64) -> f64 {
        self.eval(theta, 2)
    }

    pub fn radius_of_curvature(&self, theta: f64) -> f64 {
        self.support(theta) + self.support_d2(theta)
    }

    /// Boundary point with outward normal `(cos θ, sin θ)`.
    pub fn point(&self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        let h = self.support(theta);
        let dh = self.support_d1(theta);
        Point::new(h * c - dh * s, h * s + dh * c)
    }

    /// Arclength from θ = 0 to θ, in closed form.
    pub fn arclength(&self, theta: f64) -> f64 {
        let mut integral = self.a0 * theta;
        for h in &self.harmonics {
            let m = h.order as f64;
            let (s, c) = (m * theta).sin_cos();
            integral += (h.cos * s + h.sin * (1.0 - c)) / m;
        }
        integral + self.support_d1(theta) - self.support_d1(0.0)
    }

    /// Minimal radius of curvature: grid search refined by golden-section
    /// search around every grid local minimum.
    fn min_radius(&self, grid: usize) -> (f64, f64) {
        let step = TAU / grid as f64;
        let rho: Vec<f64> = (0..grid).map(|k| self.radius_of_curvature(k as f64 * step)).collect();
        let mut best = (0.0, f64::INFINITY);
        for k in 0..grid {
            let prev = rho[(k + grid - 1) % grid];
            let next = rho[(k + 1) % grid];
            if rho[k] > prev || rho[k] > next {
                continue;
            }
            let theta = k as f64 * step;
            let (t, r) = golden_min(|t| self.radius_of_curvature(t), theta - step, theta + step);
            let cand = if r < rho[k] { (t, r) } else { (theta, rho[k]) };
            if cand.1 < best.1 {
                best = cand;
            }
        }
        best
    }

    /// θ at which the arclength from θ = 0 equals `target ∈ [0, L]`.
    fn theta_at_arclength(&self, table: &[f64], target: f64) -> f64 {
        let step = TAU / (table.len() - 1) as f64;
        let k = table.partition_point(|&s| s <= target).clamp(1, table.len() - 1) - 1;
        let (mut lo, mut hi) = (k as f64 * step, (k + 1) as f64 * step);
        let mut theta = lo + (target - table[k]) / (table[k + 1] - table[k]) * step;
        for _ in 0..100 {
            let f = self.arclength(theta) - target;
            if f > 0.0 {
                hi = theta;
            } else {
                lo = theta;
            }
            let newton = theta - f / self.radius_of_curvature(theta);
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - theta).abs() <= 4.0 * f64::EPSILON * theta.abs().max(1.0) {
                return next;
            }
            theta = next;
        }
        theta
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-13 * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveMetrics {
    pub length: f64,
    /// Upper bound k of the curvature, `1 / min ρ`.
    pub max_curvature: f64,
    pub min_radius: f64,
    pub breadth_min: f64,
    pub breadth_max: f64,
}

/// Perimeter by periodic trapezoid rule on `h` (exact for trigonometric
/// polynomials once `quadrature_n` exceeds twice the top order), curvature
/// bound and breadth range on the same grid.
pub fn curve_metrics(curve: &SupportCurve, quadrature_n: usize) -> Result<CurveMetrics> {
    if quadrature_n < 64 {
        return Err(Error::InvalidParameter(format!("quadrature_n must be >= 64, got {quadrature_n}")));
    }
    let step = TAU / quadrature_n as f64;
    let length = step * (0..quadrature_n).map(|k| curve.support(k as f64 * step)).sum::<f64>();
    let (theta, min_radius) = curve.min_radius(quadrature_n);
    if min_radius <= 0.0 {
        return Err(Error::NotStrictlyConvex { theta, rho: min_radius });
    }
    let (mut breadth_min, mut breadth_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..quadrature_n {
        let t = k as f64 * step;
        let b = curve.support(t) + curve.support(t + PI);
        breadth_min = breadth_min.min(b);
        breadth_max = breadth_max.max(b);
    }
    Ok(CurveMetrics { length, max_curvature: 1.0 / min_radius, min_radius, breadth_min, breadth_max })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InscribedPolygon {
    pub polygon: ConvexPolygon,
    /// Normal angle of each vertex.
    pub thetas: Vec<f64>,
    /// Largest arclength of Γ between consecutive vertices.
    pub lambda: f64,
    /// Curvature bound used for the hypothesis check.
    pub k: f64,
}

/// Polygon with `n` vertices on Γ at equal arclength spacing.
///
/// Rejected with [`Error::RefinementNeeded`] when `λ ≥ π/(2k)`.
pub fn inscribe_polygon(curve: &SupportCurve, n: usize) -> Result<InscribedPolygon> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("inscribed polygon needs n >= 3, got {n}")));
    }
    let quad = DEFAULT_QUADRATURE.max(16 * curve.max_order() as usize);
    let metrics = curve_metrics(curve, quad)?;
    let k = metrics.max_curvature;
    let total = curve.arclength(TAU);

    let table_step = TAU / ARCLENGTH_TABLE as f64;
    let table: Vec<f64> = (0..=ARCLENGTH_TABLE).map(|i| curve.arclength(i as f64 * table_step)).collect();
    let thetas: Vec<f64> = (0..n)
        .map(|i| if i == 0 { 0.0 } else { curve.theta_at_arclength(&table, total * i as f64 / n as f64) })
        .collect();

    let arcs: Vec<f64> = thetas.iter().map(|&t| curve.arclength(t)).collect();
    let lambda = (0..n)
        .map(|i| if i + 1 < n { arcs[i + 1] - arcs[i] } else { total - arcs[i] })
        .fold(0.0, f64::max);

    let limit = FRAC_PI_2 / k;
    if lambda >= limit * (1.0 - 1e-12) {
        let min_vertices = (total * k / FRAC_PI_2).floor() as usize + 1;
        return Err(Error::RefinementNeeded { lambda, limit, min_vertices });
    }
    let vertices: Vec<Point> = thetas.iter().map(|&t| curve.point(t)).collect();
    let polygon = validate_polygon(&vertices)?;
    Ok(InscribedPolygon { polygon, thetas, lambda, k })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaBounds {
    pub low: f64,
    pub high: f64,
    /// δ of the inscribed polygon (equal to `low`).
    pub delta_p: f64,
    pub lambda: f64,
    pub k: f64,
    pub curve_length: f64,
    pub polygon_perimeter: f64,
}

impl DeltaBounds {
    pub fn contains(&self, value: f64) -> bool {
        self.low <= value && value <= self.high
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }
}

/// Two-sided bounds `δ(P) ≤ δ(Γ) ≤ δ(P) + λ·tan(kλ)` from an `n`-vertex
/// inscribed polygon.
pub fn delta_bounds(curve: &SupportCurve, n: usize) -> Result<DeltaBounds> {
    let ins = inscribe_polygon(curve, n)?;
    let report = compute_delta(&ins.polygon)?;
    let delta_p = report.delta;
    Ok(DeltaBounds {
        low: delta_p,
        high: delta_p + ins.lambda * (ins.k * ins.lambda).tan(),
        delta_p,
        lambda: ins.lambda,
        k: ins.k,
        curve_length: curve.arclength(TAU),
        polygon_perimeter: ins.polygon.perimeter(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil(eps: f64) -> SupportCurve {
        SupportCurve::new(1.0, vec![Harmonic { order: 3, cos: eps, sin: 0.0 }]).unwrap()
    }

    #[test]
    fn circle_points_and_metrics() {
        let c = SupportCurve::circle(2.5).unwrap();
        assert_eq!(c.point(0.0), Point::new(2.5, 0.0));
        let m = curve_metrics(&SupportCurve::circle(1.0).unwrap(), 256).unwrap();
        assert!((m.length - TAU).abs() < 1e-13);
        assert_eq!(m.max_curvature, 1.0);
        assert_eq!((m.breadth_min, m.breadth_max), (2.0, 2.0));
    }

    #[test]
    fn trefoil_support_point_on_axis() {
        let p = SupportCurve::new(1.0, vec![Harmonic { order: 3, cos: 0.1, sin: 0.0 }])
            .unwrap()
            .point(0.0);
        assert!((p.x - 1.1).abs() < 1e-15 && p.y.abs() < 1e-15);
    }

    #[test]
    fn constant_breadth_metrics() {
        // ρ = 1 - 8ε cos 3θ, so min ρ = 1 - 8ε.
        let eps = 0.05;
        let m = curve_metrics(&trefoil(eps), 2048).unwrap();
        assert!((m.length - TAU).abs() < 1e-12);
        assert!((m.max_curvature - 1.0 / (1.0 - 8.0 * eps)).abs() < 1e-12);
        assert!((m.breadth_min - 2.0).abs() < 1e-14 && (m.breadth_max - 2.0).abs() < 1e-14);
        assert!(trefoil(eps).is_constant_breadth());
    }

    #[test]
    fn even_harmonic_breaks_constant_breadth() {
        let c = SupportCurve::new(1.0, vec![Harmonic { order: 2, cos: 0.1, sin: 0.0 }]).unwrap();
        let m = curve_metrics(&c, 256).unwrap();
        assert!(m.breadth_min < m.breadth_max - 0.1);
        assert!(!c.is_constant_breadth());
    }

    #[test]
    fn invalid_curves() {
        assert!(matches!(
            SupportCurve::new(1.0, vec![Harmonic { order: 3, cos: 0.2, sin: 0.0 }]),
            Err(Error::NotStrictlyConvex { .. })
        ));
        assert!(SupportCurve::new(1.0, vec![Harmonic { order: 1, cos: 0.2, sin: 0.0 }]).is_err());
        assert!(SupportCurve::new(-1.0, vec![]).is_err());
        assert!(curve_metrics(&trefoil(0.05), 32).is_err());
    }

    #[test]
    fn arclength_matches_quadrature_of_rho() {
        let c = SupportCurve::new(
            1.0,
            vec![Harmonic { order: 2, cos: 0.03, sin: -0.02 }, Harmonic { order: 5, cos: 0.01, sin: 0.015 }],
        )
        .unwrap();
        let theta = 2.3;
        let n = 200_000;
        let h = theta / n as f64;
        // composite Simpson
        let mut acc = c.radius_of_curvature(0.0) + c.radius_of_curvature(theta);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * c.radius_of_curvature(i as f64 * h);
        }
        assert!((acc * h / 3.0 - c.arclength(theta)).abs() < 1e-12);
    }

    #[test]
    fn inscribed_circle_polygons() {
        let c = SupportCurve::circle(1.0).unwrap();
        let ins = inscribe_polygon(&c, 64).unwrap();
        assert!((ins.lambda - TAU / 64.0).abs() < 1e-14);
        for (i, v) in ins.polygon.vertices().iter().enumerate() {
            let t = TAU * i as f64 / 64.0;
            assert!(v.dist(Point::new(t.cos(), t.sin())) < 1e-14);
        }
        match inscribe_polygon(&c, 4) {
            Err(Error::RefinementNeeded { lambda, limit, min_vertices }) => {
                assert!((lambda - FRAC_PI_2).abs() < 1e-14);
                assert_eq!(limit, FRAC_PI_2);
                assert_eq!(min_vertices, 5);
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn inscribed_trefoil_gaps_are_uniform() {
        let ins = inscribe_polygon(&trefoil(0.05), 512).unwrap();
        assert!((ins.k - 1.0 / 0.6).abs() < 1e-12);
        assert!((ins.lambda - TAU / 512.0).abs() < 1e-12);
        assert!(ins.lambda < FRAC_PI_2 / ins.k);
    }
}
