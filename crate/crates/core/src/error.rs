use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("complex dimension n = {0} is outside the supported range 1..={max}", max = crate::index::MAX_N)]
    UnsupportedDimension(usize),

    #[error("bidegree ({p},{q}) is out of range for n = {n}")]
    DegreeOutOfRange { n: usize, p: usize, q: usize },

    #[error("Lefschetz index k = {k} is out of range for bidegree ({p},{q})")]
    LefschetzIndexOutOfRange { p: usize, q: usize, k: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Lie algebra element has a component of norm {perp_norm:.3e} outside u(n)")]
    NotUnitary { perp_norm: f64 },

    #[error("input matrix is not Hermitian (defect {defect:.3e})")]
    NonHermitianInput { defect: f64 },

    #[error("input matrix is not symmetric (defect {defect:.3e})")]
    NonSymmetricInput { defect: f64 },

    #[error("operator violates the first Bianchi identity (defect {defect:.3e})")]
    BianchiViolation { defect: f64 },

    #[error("torus point is too close to a wall: min |ε_i - ε_j| = {separation:.3e}")]
    NearSingularTorusPoint { separation: f64 },

    #[error("torus point entry {index} does not have unit modulus (|ε| = {modulus})")]
    NotOnTorus { index: usize, modulus: f64 },

    #[error("weighted condition needs {needed} eigenvalues but the spectrum has {available}")]
    SpectrumTooShort { needed: usize, available: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("size mismatch in {field}: expected {expected}, found {found}")]
    SizeMismatch {
        field: String,
        expected: usize,
        found: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
