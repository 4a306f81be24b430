//! Seeded random convex polygons and rigid motions for sweeps and tests.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geom::{validate_polygon, ConvexPolygon, Point};

/// Random convex polygon with exactly `n` vertices (Valtr's construction),
/// centered at the origin inside the unit box. Draws that fail strict
/// convexity validation are redrawn.
pub fn random_convex_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ConvexPolygon {
    assert!(n >= 3, "polygon needs at least three vertices");
    loop {
        if let Ok(p) = validate_polygon(&valtr_vertices(rng, n)) {
            return p;
        }
    }
}

fn chain_components<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut coords: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    coords.sort_by(f64::total_cmp);
    let (min, max) = (coords[0], coords[n - 1]);
    let mut out = Vec::with_capacity(n);
    let (mut last_top, mut last_bot) = (min, min);
    for &c in &coords[1..n - 1] {
        if rng.gen::<bool>() {
            out.push(c - last_top);
            last_top = c;
        } else {
            out.push(last_bot - c);
            last_bot = c;
        }
    }
    out.push(max - last_top);
    out.push(last_bot - max);
    out
}

fn valtr_vertices<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Point> {
    let xs = chain_components(rng, n);
    let mut ys = chain_components(rng, n);
    ys.shuffle(rng);
    let mut vecs: Vec<Point> = xs.iter().zip(&ys).map(|(&x, &y)| Point::new(x, y)).collect();
    vecs.sort_by(|a, b| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)));

    let mut pts = Vec::with_capacity(n);
    let mut cur = Point::default();
    for v in vecs {
        pts.push(cur);
        cur = cur + v;
    }
    let c = pts.iter().fold(Point::default(), |acc, &p| acc + p) * (1.0 / n as f64);
    pts.into_iter().map(|p| p - c).collect()
}

/// Rotation followed by translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub angle: f64,
    pub translation: Point,
}

impl RigidMotion {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, span: f64) -> Self {
        Self {
            angle: rng.gen_range(0.0..TAU),
            translation: Point::new(rng.gen_range(-span..span), rng.gen_range(-span..span)),
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        p.rotated(self.angle) + self.translation
    }
}
