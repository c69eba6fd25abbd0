use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operation received a parameter outside its domain.
    InvalidParameter(&'static str),
    /// Vector or matrix sizes do not line up.
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    /// The antenna sits outside the coverage span `[0, 2*d_0]` of the cell.
    OutsideCoverage { alpha: f64 },
    /// The Doppler shift maps past the edge of the BEM index range.
    DopplerExceedsOrder { doppler_hz: f64, order: usize },
    /// Basis index outside `0..=Q`.
    IndexOutOfRange { index: usize, order: usize },
    /// A basis sample too small to invert.
    NonInvertibleBasis { index: usize, sample: usize },
    /// A column with zero norm in a coherence computation.
    DegenerateColumn(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "dimension mismatch in {what}: expected {expected}, found {found}"),
            Error::OutsideCoverage { alpha } => {
                write!(f, "antenna outside cell coverage (alpha = {alpha} m)")
            }
            Error::DopplerExceedsOrder { doppler_hz, order } => write!(
                f,
                "Doppler exceeds model order ({doppler_hz} Hz does not fit Q = {order})"
            ),
            Error::IndexOutOfRange { index, order } => {
                write!(f, "basis index {index} outside 0..={order}")
            }
            Error::NonInvertibleBasis { index, sample } => {
                write!(f, "non-invertible basis: b_{index}({sample}) is zero")
            }
            Error::DegenerateColumn(col) => write!(f, "degenerate column {col}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
