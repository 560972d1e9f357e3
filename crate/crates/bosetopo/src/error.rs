use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variants fall into three families, which the command-line front end maps
/// to distinct exit codes: malformed input ([`Error::Parse`]), input that
/// parses but violates a precondition, and numerical trouble encountered
/// while computing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("mode index {index} out of range for {n_modes} modes")]
    IndexOutOfRange { index: usize, n_modes: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not {property} (residual {residual:.3e})")]
    Structure { property: &'static str, residual: f64 },

    #[error("incompatible layout: {0}")]
    IncompatibleLayout(String),

    #[error("model is not translation invariant: {0}")]
    NotTranslationInvariant(String),

    #[error("symmetry precondition failed: {0}")]
    Symmetry(String),

    #[error("non-finite matrix entries")]
    NonFinite,

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("band degeneracy: {0}")]
    BandDegeneracy(String),

    #[error("gap closed (margin {gap_margin:.3e})")]
    GapClosed { gap_margin: f64 },

    #[error("unresolvable: {0}")]
    Unresolvable(String),

    #[error("singular response matrix at {0} Hz")]
    Singular(f64),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the `bosetopo` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 1,
            Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch(_)
            | Error::InvalidParameter(_)
            | Error::Structure { .. }
            | Error::IncompatibleLayout(_)
            | Error::NotTranslationInvariant(_)
            | Error::Symmetry(_) => 2,
            Error::NonFinite
            | Error::LinearAlgebra(_)
            | Error::BandDegeneracy(_)
            | Error::GapClosed { .. }
            | Error::Unresolvable(_)
            | Error::Singular(_) => 3,
        }
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::LinearAlgebra(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
