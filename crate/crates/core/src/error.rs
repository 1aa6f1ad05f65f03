use crate::symbol::LaurentPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("symbol evaluated at z = 0")]
    ZeroArgument,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("inexact division, remainder {remainder}")]
    InexactDivision { remainder: LaurentPoly },

    #[error("s(-1) = {s_at_minus1} != 0, (1+z) does not divide the symbol")]
    NotFactorable { s_at_minus1: String },

    #[error("zero mask has no symbol representation")]
    ZeroMask,

    #[error("unknown catalog scheme {0:?}")]
    UnknownScheme(String),

    #[error("invalid rational {input:?}: {reason}")]
    InvalidRational { input: String, reason: &'static str },

    #[error("parse error in {field} (line {line}, column {column}): {message}")]
    Parse {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("local matrix needs a mask of width >= 2, got {0}")]
    WidthTooSmall(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("eigenvalue iteration did not converge: {0}")]
    NumericalFailure(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for filesystem failures, as opposed to domain errors.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
