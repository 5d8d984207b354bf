use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid dimension m = {m} (expected 1 <= m <= {max})")]
    InvalidDimension { m: usize, max: usize },

    #[error("{what} not unit (|{symbol}| = {norm:.17})")]
    NotUnit {
        what: &'static str,
        symbol: &'static str,
        norm: f64,
    },

    #[error("operator is not self-adjoint (defect {defect:.3e} > tol {tol:.3e})")]
    Asymmetric { defect: f64, tol: f64 },

    #[error("{what} is not tangent (normal component {component:.3e})")]
    NotTangent { what: &'static str, component: f64 },

    #[error("Hopf condition required (|S xi - alpha xi| = {defect:.3e})")]
    HopfRequired { defect: f64 },

    #[error("invalid radius r = {r}: {reason}")]
    InvalidRadius { r: f64, reason: String },

    #[error("Reeb curvature alpha must be nonzero")]
    VanishingReebCurvature,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("stored alpha {stored:.17} disagrees with g(S xi, xi) = {computed:.17}")]
    AlphaMismatch { stored: f64, computed: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("non-finite entry in {what}")]
    NonFinite { what: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
