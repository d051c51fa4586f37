use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants fall into three families that the command-line front end maps to
/// distinct exit codes: malformed input, domain errors (the input is well formed
/// but outside the region where an operation is defined) and numerical failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate pair: light points are (nearly) proportional")]
    DegeneratePair,
    #[error("spherical length undefined for lambda = {0} >= 1")]
    SphericalUndefined(f64),
    #[error("point or segment outside the chart of curvature {0}")]
    OutsideChart(i8),
    #[error("plane section is not an ellipse")]
    NotElliptic,
    #[error("invalid triangle: {0}")]
    InvalidTriangle(String),
    #[error("triangle is not cyclic")]
    NonCyclic,
    #[error("spherical triangle is not convex")]
    NotConvexSpherical,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("edge {0} cannot be flipped: quadrilateral is not embeddable")]
    FlipNotEmbeddable(usize),
    #[error("flip cap of {cap} exceeded ({flips} flips performed)")]
    IterationCapExceeded { cap: usize, flips: usize },
    #[error("NotInTStar: largest face circumparameter {max_rho_hat} is not below 1")]
    NotInTStar { max_rho_hat: f64 },
    #[error("combinatorics mismatch: {0}")]
    CombinatoricsMismatch(String),
    #[error("dual-edge word is not a closed loop")]
    OpenLoop,
    #[error("degenerate hull input: {0}")]
    DegenerateInput(String),
    #[error("no hull face could be validated at this depth")]
    InsufficientDepth,
    #[error("curvature violates Gauss-Bonnet: {0}")]
    IncompatibleCurvature(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("malformed file: {0}")]
    Malformed(String),
}

impl Error {
    /// Process exit code used by the CLI: 64 malformed input, 2 domain error,
    /// 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Malformed(_) | Error::InvalidTriangulation(_) => 64,
            Error::IterationCapExceeded { .. }
            | Error::NoConvergence { .. }
            | Error::InsufficientDepth
            | Error::DegenerateInput(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
