//! Brute-force estimate of δ(P) with a certified enclosing interval.
//!
//! μ(p) = max_q d(p, q) is 1-Lipschitz, and for a polygon it is the maximum
//! over vertices. Sampling the boundary at arclength gap at most `g` puts
//! every boundary point within chordal distance `g/2` of a sample, so
//! `min μ(samples) - g/2 ≤ δ ≤ min μ(samples)`.
//!
//! The certificate uses the arclength gap. Chords are never longer than the
//! arcs they span, so this is valid but loose by the chord/arc ratio at
//! vertices; on edges the two coincide and the slack is zero.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::ConvexPolygon;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub max_samples: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { max_samples: 50_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub lower: f64,
    pub upper: f64,
    /// Arclength of the best sample.
    pub argmin_s: f64,
    pub samples: usize,
    /// Largest arclength gap between consecutive samples (cyclically).
    pub max_gap: f64,
}

impl OracleResult {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

pub fn delta_bruteforce(poly: &ConvexPolygon, samples_per_unit: f64) -> Result<OracleResult> {
    delta_bruteforce_with(poly, samples_per_unit, &OracleConfig::default())
}

/// Samples the boundary on a uniform arclength grid with spacing at most
/// `1 / samples_per_unit`, with every vertex added as a mandatory sample.
pub fn delta_bruteforce_with(
    poly: &ConvexPolygon,
    samples_per_unit: f64,
    config: &OracleConfig,
) -> Result<OracleResult> {
    if !(samples_per_unit > 0.0 && samples_per_unit.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "samples_per_unit must be positive, got {samples_per_unit}"
        )));
    }
    let l = poly.perimeter();
    let grid = (l * samples_per_unit).ceil();
    let requested = grid + poly.len() as f64;
    if requested > config.max_samples as f64 {
        return Err(Error::SampleBudget { requested: requested as usize, cap: config.max_samples });
    }
    let grid = grid as usize;

    let step = l / grid as f64;
    let mut s: Vec<f64> = (0..grid).map(|k| k as f64 * step).collect();
    s.extend_from_slice(poly.cum_arclength());
    s.sort_by(f64::total_cmp);
    s.dedup();

    let max_gap = s
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(l - s[s.len() - 1] + s[0], f64::max);

    let (upper, best) = s
        .par_iter()
        .enumerate()
        .map(|(k, &sk)| (poly.mu(poly.point_at_arclength(sk).point), k))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );

    Ok(OracleResult {
        lower: upper - 0.5 * max_gap,
        upper,
        argmin_s: s[best],
        samples: s.len(),
        max_gap,
    })
}

/// Exact μ at `m` arclength-uniform samples, starting at vertex 0.
pub fn mu_profile(poly: &ConvexPolygon, m: usize) -> Result<Vec<(f64, f64)>> {
    if m < poly.len() {
        return Err(Error::InvalidParameter(format!(
            "profile needs at least {} samples, got {m}",
            poly.len()
        )));
    }
    let l = poly.perimeter();
    Ok((0..m)
        .map(|k| {
            let s = l * k as f64 / m as f64;
            (s, poly.mu(poly.point_at_arclength(s).point))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{validate_polygon, Point};

    fn square() -> ConvexPolygon {
        validate_polygon(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_interval_contains_exact_value() {
        let r = delta_bruteforce(&square(), 1e4).unwrap();
        assert!(r.contains(5f64.sqrt() / 2.0));
        assert!(r.width() <= 5e-5 + 1e-15);
    }

    #[test]
    fn equilateral_interval_contains_sqrt3() {
        let eq = validate_polygon(&[Point::new(-1.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 3f64.sqrt())])
            .unwrap();
        let r = delta_bruteforce(&eq, 1e4).unwrap();
        assert!(r.contains(3f64.sqrt()));
    }

    #[test]
    fn budget_and_parameter_errors() {
        let cfg = OracleConfig { max_samples: 1000 };
        assert!(matches!(
            delta_bruteforce_with(&square(), 1e4, &cfg),
            Err(Error::SampleBudget { cap: 1000, .. })
        ));
        assert!(delta_bruteforce(&square(), 0.0).is_err());
        assert!(delta_bruteforce(&square(), f64::NAN).is_err());
    }

    #[test]
    fn square_profile_values() {
        let prof = mu_profile(&square(), 8).unwrap();
        for (k, &(s, mu)) in prof.iter().enumerate() {
            assert!((s - 0.5 * k as f64).abs() < 1e-15);
            let expected = if k % 2 == 0 { 2f64.sqrt() } else { 1.25f64.sqrt() };
            assert!((mu - expected).abs() < 1e-15);
        }
        assert!(mu_profile(&square(), 3).is_err());
        let min = prof.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let r = delta_bruteforce(&square(), 2.0).unwrap();
        assert_eq!(min, r.upper);
    }
}
