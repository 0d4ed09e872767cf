use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),

    #[error("invalid factor selection: {0}")]
    InvalidFactors(String),

    #[error("invalid channel table: {0}")]
    InvalidTable(String),

    #[error("parameter `{name}` = {value} is outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("isometry check failed: max |U^dagger U - I| = {0:e}")]
    NotIsometry(f64),

    #[error("table does not factorize as p(y|x) p(z|x) (deviation {0:e}); use the generic numeric path")]
    NotFactorizable(f64),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("mismatched recursion depth: {0} vs {1}")]
    DepthMismatch(u32, u32),

    #[error("bit count mismatch for set {set}: expected {expected}, got {actual}")]
    BitCountMismatch { set: char, expected: usize, actual: usize },

    #[error("trajectory of {0} steps does not saturate; supply a longer bit string")]
    NonSaturating(usize),

    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}
