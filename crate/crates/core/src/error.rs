use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("identity word has no curve class")]
    IdentityWord,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension {n} out of range (expected {min}..={max})")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },

    #[error("generator {generator}: determinant {det} is not 1")]
    Determinant { generator: String, det: f64 },

    #[error("generator {generator}: inverse solve failed (relative residual {residual:e})")]
    SingularInverse { generator: String, residual: f64 },

    #[error("relator residual {residual:e} exceeds threshold {threshold:e}")]
    RelatorResidual { residual: f64, threshold: f64 },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("eigenvalues are not real (relative imaginary part {imag:e})")]
    ComplexSpectrum { imag: f64 },

    #[error("not Hitchin-like / numerically degenerate: log-magnitude gap {gap:e} below tolerance")]
    DegenerateGap { gap: f64 },

    #[error("newton deformation diverged: residual {residual:e} after {iterations} iterations; try a smaller epsilon")]
    NewtonDivergence { residual: f64, iterations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
