use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The point set does not span R³ (or R² for planar input).
    #[error("flat body: {0}")]
    FlatBody(String),
    /// A mesh failed the central symmetry check.
    #[error("asymmetric mesh: {0}")]
    Asymmetric(String),
    /// A mesh failed a structural invariant (manifold, convexity, indices).
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    /// Text input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    /// A conformal factor that is not invariant under the antipodal map.
    #[error("metric is not even under the antipodal map: {0}")]
    OddMetric(String),
    /// An atomic measure violating `μ({x}) < 2π` or zero total mass.
    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),
    /// An iterative solver hit its iteration cap.
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
