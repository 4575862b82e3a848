use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parameter {u:?} lies outside the domain of chart {chart}")]
    OutsideDomain { chart: usize, u: Vec<f64> },

    #[error("chart {chart} failed validation at u = {u:?}: {reason}")]
    ValidationFailed { chart: usize, u: Vec<f64>, reason: String },

    #[error(
        "quadrature did not converge at xi = {xi:?}: error estimate {estimate:e} above tolerance {tolerance:e} with {nodes} nodes"
    )]
    QuadratureNotConverged { xi: Vec<f64>, estimate: f64, tolerance: f64, nodes: usize },

    #[error("quadrature budget exceeded: {nodes} nodes requested, limit {limit}")]
    QuadratureBudget { nodes: usize, limit: usize },

    #[error("orientation direction is tangent to the surface at u = {u:?}")]
    AmbiguousOrientation { u: Vec<f64> },

    #[error("direction {direction:?} is attained only on the region boundary (chart {chart}, u = {u:?})")]
    BoundaryTangency { direction: Vec<f64>, chart: usize, u: Vec<f64> },

    #[error("degenerate stationary point on chart {chart} at u = {u:?}: |K| = {curvature:e}")]
    DegenerateStationaryPoint { chart: usize, u: Vec<f64>, curvature: f64 },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("spectrum would contain {count} points (limit {limit})")]
    SpectrumTooLarge { count: usize, limit: usize },

    #[error("Gram matrix is numerically singular (condition number {condition:e})")]
    SingularGram { condition: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
