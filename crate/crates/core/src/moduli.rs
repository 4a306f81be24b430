//! Triangle moduli, elliptic coordinates, the kite family and quadrangle
//! search.
//!
//! Triangles are normalized to `A = (-1, 0)`, `B = (1, 0)`, `C = (x, y)`
//! with `[A, B]` a longest side and `C` in the right half:
//! `M = {x ≥ 0, y > 0, (x+1)² + y² ≤ 4}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{validate_polygon, ConvexPolygon, Point};
use crate::section::compute_delta;

const MODULI_SLACK: f64 = 1e-12;
/// Allowed disagreement between closed form and section engine.
pub const MISMATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleModulus {
    x: f64,
    y: f64,
}

impl TriangleModulus {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let inside = x.is_finite()
            && y.is_finite()
            && x >= 0.0
            && y > 0.0
            && (x + 1.0).powi(2) + y * y <= 4.0 + MODULI_SLACK;
        if inside {
            Ok(Self { x, y })
        } else {
            Err(Error::OutsideModuli { x, y })
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn vertices(&self) -> [Point; 3] {
        [Point::new(-1.0, 0.0), Point::new(1.0, 0.0), Point::new(self.x, self.y)]
    }

    pub fn polygon(&self) -> Result<ConvexPolygon> {
        validate_polygon(&self.vertices())
    }

    pub fn perimeter(&self) -> f64 {
        let c = Point::new(self.x, self.y);
        2.0 + c.dist(Point::new(-1.0, 0.0)) + c.dist(Point::new(1.0, 0.0))
    }
}

/// `ψ₁(x) = √((1−x)/2) · √(√((9−x)² − 48) − (1−x))` on `[0, 1]`.
pub fn psi1(x: f64) -> f64 {
    let r = ((9.0 - x).powi(2) - 48.0).sqrt();
    ((1.0 - x) / 2.0).max(0.0).sqrt() * (r - (1.0 - x)).sqrt()
}

/// `ψ₃(x) = 1 + x`.
pub fn psi3(x: f64) -> f64 {
    1.0 + x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleRegion {
    /// `x² + y² ≤ 1`: the apex sees both base vertices within distance 1.
    Disk,
    I,
    II,
    III,
    IV,
}

impl TriangleRegion {
    pub fn label(&self) -> &'static str {
        match self {
            TriangleRegion::Disk => "disk",
            TriangleRegion::I => "I",
            TriangleRegion::II => "II",
            TriangleRegion::III => "III",
            TriangleRegion::IV => "IV",
        }
    }
}

/// Every region whose closure contains `m`. Separating curves belong to
/// both neighbours.
pub fn triangle_regions(m: &TriangleModulus) -> Vec<TriangleRegion> {
    let (x, y) = (m.x, m.y);
    if x * x + y * y <= 1.0 {
        return vec![TriangleRegion::Disk];
    }
    let (p1, p3) = (psi1(x), psi3(x));
    let mut out = Vec::new();
    if y >= p1 && y >= p3 {
        out.push(TriangleRegion::I);
    }
    if y >= p3 && y <= p1 {
        out.push(TriangleRegion::II);
    }
    if y <= p1 && y <= p3 {
        out.push(TriangleRegion::III);
    }
    if y >= p1 && y <= p3 {
        out.push(TriangleRegion::IV);
    }
    out
}

/// Distances from the apex construction: `d₂ = |OC|`, `d₃ = y`,
/// `d₄ = ((1+x)² + y²) / (2(1+x))`, `d₅ = √((1+x)² + y²) / (1+x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleDistances {
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
}

pub fn triangle_distances(m: &TriangleModulus) -> TriangleDistances {
    let (x, y) = (m.x, m.y);
    let ra2 = (1.0 + x).powi(2) + y * y;
    TriangleDistances {
        d2: x.hypot(y),
        d3: y,
        d4: ra2 / (2.0 * (1.0 + x)),
        d5: ra2.sqrt() / (1.0 + x),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleDelta {
    pub delta: f64,
    pub region: TriangleRegion,
}

/// δ of a normalized triangle from the region analysis.
pub fn triangle_delta_closed_form(m: &TriangleModulus) -> TriangleDelta {
    let region = triangle_regions(m)[0];
    let d = triangle_distances(m);
    let delta = match region {
        TriangleRegion::Disk => 1.0,
        TriangleRegion::I | TriangleRegion::II => d.d3,
        TriangleRegion::III | TriangleRegion::IV => d.d4,
    };
    TriangleDelta { delta, region }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticCoords {
    pub u: f64,
    pub v: f64,
}

impl EllipticCoords {
    /// Half-sum and half-difference of the distances to `A` and `B`.
    pub fn from_cartesian(x: f64, y: f64) -> Self {
        let p = Point::new(x, y);
        let ra = p.dist(Point::new(-1.0, 0.0));
        let rb = p.dist(Point::new(1.0, 0.0));
        Self { u: 0.5 * (ra + rb), v: 0.5 * (ra - rb) }
    }

    /// Upper half-plane point `(uv, √((u²−1)(1−v²)))`.
    pub fn to_cartesian(&self) -> (f64, f64) {
        let (u, v) = (self.u, self.v);
        let y2 = ((u - 1.0) * (u + 1.0)).max(0.0) * ((1.0 - v) * (1.0 + v)).max(0.0);
        (u * v, y2.sqrt())
    }

    /// `u² + v² ≥ 2` and `u + v ≤ 2`: outside the unit disk, inside the
    /// circle of radius 2 about `A`.
    pub fn in_fundamental_region(&self) -> bool {
        self.u * self.u + self.v * self.v >= 2.0 - MODULI_SLACK && self.u + self.v <= 2.0 + MODULI_SLACK
    }
}

pub fn elliptic_from_cartesian(x: f64, y: f64) -> EllipticCoords {
    EllipticCoords::from_cartesian(x, y)
}

pub fn cartesian_from_elliptic(u: f64, v: f64) -> (f64, f64) {
    EllipticCoords { u, v }.to_cartesian()
}

/// Uniform sample from the moduli set by rejection.
pub fn random_modulus<R: Rng + ?Sized>(rng: &mut R) -> TriangleModulus {
    loop {
        let x = rng.gen_range(0.0..1.0);
        let y = rng.gen_range(0.0..3f64.sqrt());
        if let Ok(m) = TriangleModulus::new(x, y) {
            return m;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleScan {
    pub min_quotient: f64,
    pub argmin: (f64, f64),
    pub points: usize,
    pub max_mismatch: f64,
    pub upper_bound_holds: bool,
}

/// `L/δ` over the grid `x_i = i/(n−1)`, `y_j = j√3/(n−1)` (`j ≥ 1`)
/// restricted to the moduli set, with every point cross-checked against
/// the section engine.
pub fn triangle_scan(grid_n: usize) -> Result<TriangleScan> {
    if grid_n < 50 {
        return Err(Error::InvalidParameter(format!("grid_n must be >= 50, got {grid_n}")));
    }
    let h = 1.0 / (grid_n - 1) as f64;
    let moduli: Vec<TriangleModulus> = (0..grid_n)
        .flat_map(|i| (1..grid_n).map(move |j| (i as f64 * h, j as f64 * h * 3f64.sqrt())))
        .filter_map(|(x, y)| TriangleModulus::new(x, y).ok())
        .collect();

    let evaluated: Vec<(f64, f64, bool)> = moduli
        .par_iter()
        .map(|m| {
            let closed = triangle_delta_closed_form(m).delta;
            let report = compute_delta(&m.polygon()?)?;
            let gap = (report.delta - closed).abs();
            if gap > MISMATCH_TOL {
                return Err(Error::Mismatch { x: m.x, y: m.y, closed_form: closed, algorithm: report.delta });
            }
            let l = m.perimeter();
            Ok((l / closed, gap, l <= 2.0 * std::f64::consts::PI * closed * (1.0 + 1e-12)))
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (k, e) in evaluated.iter().enumerate() {
        if e.0 < evaluated[best].0 {
            best = k;
        }
    }
    Ok(TriangleScan {
        min_quotient: evaluated[best].0,
        argmin: (moduli[best].x, moduli[best].y),
        points: moduli.len(),
        max_mismatch: evaluated.iter().map(|e| e.1).fold(0.0, f64::max),
        upper_bound_holds: evaluated.iter().all(|e| e.2),
    })
}

fn kite_denominator(u: f64) -> Result<f64> {
    let den = 3.0 * u * u - 1.0;
    if !(u.is_finite() && den > 0.0 && u > 0.0) {
        return Err(Error::KiteDomain { u });
    }
    Ok(den)
}

/// `f(u) = 4u(u²+1)/(3u²−1)`, the quotient of the kite with equal
/// perpendiculars.
pub fn kite_quotient(u: f64) -> Result<f64> {
    Ok(4.0 * u * (u * u + 1.0) / kite_denominator(u)?)
}

/// Depth of the lower kite vertex, `v = u(3−u²)/(3u²−1)`.
pub fn kite_v(u: f64) -> Result<f64> {
    Ok(u * (3.0 - u * u) / kite_denominator(u)?)
}

/// Kite `(−1,0), (0,−v), (1,0), (0,u)` with `v = kite_v(u)`.
pub fn kite_polygon(u: f64) -> Result<ConvexPolygon> {
    let v = kite_v(u)?;
    if v <= 0.0 {
        return Err(Error::KiteDomain { u });
    }
    validate_polygon(&[Point::new(-1.0, 0.0), Point::new(0.0, -v), Point::new(1.0, 0.0), Point::new(0.0, u)])
}

/// Top and bottom apex heights of the magic kite.
pub fn magic_kite_params() -> (f64, f64) {
    let s3 = 3f64.sqrt();
    (s3 / 3.0 * (3.0 + 2.0 * s3).sqrt(), (2.0 * s3 - 3.0).sqrt() / 3.0)
}

pub fn magic_kite() -> ConvexPolygon {
    let (u, v) = magic_kite_params();
    validate_polygon(&[Point::new(-1.0, 0.0), Point::new(0.0, -v), Point::new(1.0, 0.0), Point::new(0.0, u)])
        .expect("magic kite is strictly convex")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KiteMinimum {
    pub u: f64,
    pub v: f64,
    pub quotient: f64,
}

/// Derivative-free minimization of `f` over `[0.6, 3]`: golden-section
/// search, then bisection on the sign of the centered difference
/// `f(u+η) − f(u−η)` to get below the golden-section noise floor.
pub fn minimize_kite_quotient() -> KiteMinimum {
    let f = |u: f64| kite_quotient(u).unwrap_or(f64::INFINITY);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.6, 3.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a < 1e-7 {
            break;
        }
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
    let eta = 1e-5;
    let slope = |u: f64| f(u + eta) - f(u - eta);
    let (mut lo, mut hi) = (a - 1e-6, b + 1e-6);
    if slope(lo) < 0.0 && slope(hi) > 0.0 {
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if slope(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let u = 0.5 * (lo + hi);
    KiteMinimum { u, v: kite_v(u).unwrap_or(f64::NAN), quotient: f(u) }
}

/// Free parameters of a quadrangle `B=(−1,0), C=(v0,−v), E=(1,0), A=(u0,u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadParams {
    pub u0: f64,
    pub u: f64,
    pub v0: f64,
    pub v: f64,
}

impl QuadParams {
    fn from_array(p: [f64; 4]) -> Self {
        Self { u0: p[0], u: p[1], v0: p[2], v: p[3] }
    }

    pub fn vertices(&self) -> [Point; 4] {
        [
            Point::new(-1.0, 0.0),
            Point::new(self.v0, -self.v),
            Point::new(1.0, 0.0),
            Point::new(self.u0, self.u),
        ]
    }

    /// `[B, E]` stays a diameter and the apexes lie on opposite sides.
    pub fn is_admissible(&self) -> bool {
        let vs = self.vertices();
        let ok = self.u0.abs() < 1.0 && self.v0.abs() < 1.0 && self.u > 0.0 && self.v > 0.0;
        ok && (0..4).all(|i| (i + 1..4).all(|j| vs[i].dist(vs[j]) <= 2.0 + MODULI_SLACK))
    }

    pub fn polygon(&self) -> Result<ConvexPolygon> {
        validate_polygon(&self.vertices())
    }
}

/// `L/δ` of an admissible quadrangle, `None` otherwise.
pub fn quad_quotient(p: &QuadParams) -> Option<f64> {
    if !p.is_admissible() {
        return None;
    }
    let poly = p.polygon().ok()?;
    compute_delta(&poly).ok().map(|r| r.quotient)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadSearch {
    pub best_quotient: f64,
    pub best: QuadParams,
    pub best_polygon: ConvexPolygon,
    pub evaluations: usize,
    /// Candidates rejected as inadmissible or invalid.
    pub skipped: usize,
    pub restarts: usize,
}

const RANDOM_POLLS: usize = 6;
const MIN_STEP: f64 = 1e-11;

fn pattern_search(rng: &mut ChaCha8Rng, iters: usize) -> (f64, [f64; 4], usize, usize) {
    let (mut evals, mut skipped) = (0, 0);
    let eval = |p: [f64; 4], evals: &mut usize, skipped: &mut usize| {
        *evals += 1;
        quad_quotient(&QuadParams::from_array(p)).unwrap_or_else(|| {
            *skipped += 1;
            f64::INFINITY
        })
    };
    let (mut x, mut fx) = loop {
        let p = [rng.gen_range(-0.5..0.5), rng.gen_range(0.2..1.7), rng.gen_range(-0.5..0.5), rng.gen_range(0.2..1.7)];
        let fp = eval(p, &mut evals, &mut skipped);
        if fp.is_finite() {
            break (p, fp);
        }
    };
    let mut step = 0.1;
    for _ in 0..iters {
        if step < MIN_STEP {
            break;
        }
        let mut dirs: Vec<[f64; 4]> = Vec::with_capacity(8 + RANDOM_POLLS);
        for k in 0..4 {
            for sign in [1.0, -1.0] {
                let mut d = [0.0; 4];
                d[k] = sign;
                dirs.push(d);
            }
        }
        for _ in 0..RANDOM_POLLS {
            let mut d: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let n = d.iter().map(|c| c * c).sum::<f64>().sqrt();
            d.iter_mut().for_each(|c| *c /= n);
            dirs.push(d);
        }
        let mut improved = false;
        for d in dirs {
            let cand: [f64; 4] = std::array::from_fn(|k| x[k] + step * d[k]);
            let fc = eval(cand, &mut evals, &mut skipped);
            if fc < fx {
                x = cand;
                fx = fc;
                improved = true;
            }
        }
        step *= if improved { 1.5 } else { 0.5 };
    }
    (fx, x, evals, skipped)
}

/// Multi-restart pattern search for the minimal `L/δ` among quadrangles
/// with `[B, E]` as a diameter. Restart `r` uses stream `r` of a ChaCha8
/// generator seeded with `seed`, so results do not depend on threading.
/// The best quadrangle is reported with its taller apex on top.
pub fn quadrangle_search(seed: u64, restarts: usize, iters: usize) -> Result<QuadSearch> {
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be positive".into()));
    }
    let runs: Vec<(f64, [f64; 4], usize, usize)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            pattern_search(&mut rng, iters)
        })
        .collect();
    let mut best = 0;
    for (k, run) in runs.iter().enumerate() {
        if run.0 < runs[best].0 {
            best = k;
        }
    }
    let mut params = QuadParams::from_array(runs[best].1);
    if params.u < params.v {
        params = QuadParams { u0: params.v0, u: params.v, v0: params.u0, v: params.u };
    }
    Ok(QuadSearch {
        best_quotient: runs[best].0,
        best: params,
        best_polygon: params.polygon()?,
        evaluations: runs.iter().map(|r| r.2).sum(),
        skipped: runs.iter().map(|r| r.3).sum(),
        restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_values() {
        assert!((psi1(0.0) - ((33f64.sqrt() - 1.0) / 2.0).sqrt()).abs() < 1e-15);
        assert!((psi1(0.0) - 1.5402211929684044).abs() < 1e-15);
        assert_eq!(psi1(1.0), 0.0);
        assert!((psi3(0.2) - 1.2).abs() < 1e-15);
    }

    #[test]
    fn closed_form_examples() {
        let t = triangle_delta_closed_form(&TriangleModulus::new(0.3, 0.8).unwrap());
        assert_eq!((t.delta, t.region), (1.0, TriangleRegion::Disk));
        let t = triangle_delta_closed_form(&TriangleModulus::new(0.2, 1.4).unwrap());
        assert_eq!(t.region, TriangleRegion::I);
        assert!((t.delta - 1.4).abs() < 1e-15);
        let t = triangle_delta_closed_form(&TriangleModulus::new(0.6, 0.9).unwrap());
        assert_eq!(t.region, TriangleRegion::III);
        assert!((t.delta - 1.053125).abs() < 1e-15);
    }

    #[test]
    fn separating_curve_belongs_to_both_regions() {
        let m = TriangleModulus::new(0.1, 1.1).unwrap();
        let regions = triangle_regions(&m);
        assert!(regions.len() >= 2);
        let d = triangle_distances(&m);
        assert!((d.d3 - d.d4).abs() < 1e-9);
    }

    #[test]
    fn moduli_domain() {
        assert!(TriangleModulus::new(-0.1, 1.0).is_err());
        assert!(TriangleModulus::new(0.5, 0.0).is_err());
        assert!(TriangleModulus::new(0.5, 1.3).is_ok());
        assert!(TriangleModulus::new(0.9, 1.0).is_err());
        assert!(TriangleModulus::new(0.0, 3f64.sqrt()).is_ok());
    }

    #[test]
    fn elliptic_examples() {
        let e = elliptic_from_cartesian(0.0, 3f64.sqrt());
        assert!((e.u - 2.0).abs() < 1e-15 && e.v.abs() < 1e-15);
        let e = elliptic_from_cartesian(1.0, 0.0);
        assert_eq!((e.u, e.v), (1.0, 1.0));
        let (x, y) = cartesian_from_elliptic(2.0, 0.0);
        assert!(x.abs() < 1e-15 && (y - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kite_values() {
        assert_eq!(kite_quotient(1.0).unwrap(), 4.0);
        assert!((kite_quotient(0.8).unwrap() - 5.704347826086956).abs() < 1e-13);
        assert!(matches!(kite_quotient(0.5), Err(Error::KiteDomain { .. })));
        assert!(kite_polygon(2.0).is_err());
        let (u, v) = magic_kite_params();
        assert!((kite_v(u).unwrap() - v).abs() < 1e-14);
    }

    #[test]
    fn kite_with_unit_apex_is_the_square() {
        // f assumes equal perpendiculars, which fails for the square itself.
        let r = compute_delta(&kite_polygon(1.0).unwrap()).unwrap();
        assert!((r.quotient - 8.0 * 5f64.sqrt() / 5.0).abs() < 1e-12);
        assert!(r.quotient < kite_quotient(1.0).unwrap());
    }

    #[test]
    fn magic_kite_quotient() {
        let r = compute_delta(&magic_kite()).unwrap();
        assert!((r.quotient - 4.0 / 3.0 * (2.0 * 3f64.sqrt() + 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kite_minimizer_solves_quartic() {
        let m = minimize_kite_quotient();
        let root = ((6.0 + 48f64.sqrt()) / 6.0).sqrt();
        assert!((m.u - root).abs() < 1e-8, "{} vs {}", m.u, root);
    }

    #[test]
    fn square_quadrangle() {
        let q = QuadParams { u0: 0.0, u: 1.0, v0: 0.0, v: 1.0 };
        assert!((quad_quotient(&q).unwrap() - 8.0 * 5f64.sqrt() / 5.0).abs() < 1e-12);
        assert!(quad_quotient(&QuadParams { u0: 0.0, u: 1.8, v0: 0.0, v: 1.0 }).is_none());
    }

    #[test]
    fn small_scan() {
        let s = triangle_scan(50).unwrap();
        assert!(s.min_quotient >= 2.0 * 3f64.sqrt() - 1e-9);
        assert!(s.upper_bound_holds);
        assert!(triangle_scan(10).is_err());
    }
}
