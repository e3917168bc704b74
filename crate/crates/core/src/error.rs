use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported dimension {0} (expected 2 or 4)")]
    UnsupportedDimension(usize),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("invalid channel literal `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            lo,
            hi,
        })
    }
}
