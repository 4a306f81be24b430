use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: malformed polygon, curve or parameter outside its domain.
    Validation,
    /// Numerically coincident structure the section algorithm could not resolve.
    Degeneracy,
    /// The inscribed polygon is too coarse for the approximation bound.
    Hypothesis,
    /// A configured resource cap would be exceeded.
    Resource,
    /// Two independent computations disagreed.
    Consistency,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("n >= 3 required, got {n} vertices")]
    TooFewVertices { n: usize },

    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("vertices {i} and {j} coincide")]
    DuplicateVertex { i: usize, j: usize },

    #[error("collinear triple at vertex {index}")]
    Collinear { index: usize },

    #[error("polygon is not convex at vertex {index}")]
    NonConvex { index: usize },

    #[error("vertex loop winds {turns:.3} times around its interior")]
    NotSimple { turns: f64 },

    #[error("degenerate segment of length {length:e}")]
    DegenerateSegment { length: f64 },

    #[error("farthest vertex is not unique at arclength {s} (vertices {candidates:?})")]
    AmbiguousSection { s: f64, candidates: Vec<usize> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sample budget exceeded: {requested} samples requested, cap is {cap}")]
    SampleBudget { requested: usize, cap: usize },

    #[error("curve is not strictly convex: radius of curvature {rho} at theta = {theta}")]
    NotStrictlyConvex { theta: f64, rho: f64 },

    #[error(
        "approximation hypothesis violated: lambda = {lambda} >= pi/(2k) = {limit}; \
         at least {min_vertices} vertices required"
    )]
    RefinementNeeded { lambda: f64, limit: f64, min_vertices: usize },

    #[error("point ({x}, {y}) lies outside the triangle moduli set")]
    OutsideModuli { x: f64, y: f64 },

    #[error("kite parameter u = {u} outside (1/sqrt(3), inf)")]
    KiteDomain { u: f64 },

    #[error(
        "closed form and section algorithm disagree at ({x}, {y}): {closed_form} vs {algorithm}"
    )]
    Mismatch { x: f64, y: f64, closed_form: f64, algorithm: f64 },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::AmbiguousSection { .. } => ErrorKind::Degeneracy,
            Error::RefinementNeeded { .. } => ErrorKind::Hypothesis,
            Error::SampleBudget { .. } => ErrorKind::Resource,
            Error::Mismatch { .. } => ErrorKind::Consistency,
            _ => ErrorKind::Validation,
        }
    }
}
