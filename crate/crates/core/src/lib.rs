//! The minimax invariant δ(Γ) = min over boundary points p of the farthest
//! boundary distance max_q d(p, q), for convex polygons and smooth ovals.
//!
//! - [`geom`]: points, segments, validated convex polygons.
//! - [`section`]: the exact section algorithm for δ(P) and distinguished chords.
//! - [`oracle`]: brute-force δ estimate with a certified interval.
//! - [`curve`]: support-function curves, inscribed polygons, two-sided δ bounds.
//! - [`moduli`]: closed-form triangle δ, kites, and moduli scans.
//! - [`sample`]: seeded random convex polygons and rigid motions.

pub mod curve;
pub mod error;
pub mod geom;
pub mod moduli;
pub mod oracle;
pub mod sample;
pub mod section;

pub use error::{Error, ErrorKind, Result};
pub use geom::{BoundaryPoint, ConvexPolygon, Point, Segment};
pub use section::{compute_delta, DeltaReport, DistinguishedChord};
