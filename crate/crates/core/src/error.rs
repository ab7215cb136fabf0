use thiserror::Error;

/// Errors raised by the thermoshift library.
///
/// Row, column and vertex indices carried by the variants are 1-based, matching
/// the letters `1..=d` used in every external format.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("transition matrix has no rows")]
    EmptyMatrix,

    #[error("transition matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("row {0} of the transition matrix is identically zero")]
    ZeroRow(usize),

    #[error("column {0} of the transition matrix is identically zero")]
    ZeroColumn(usize),

    #[error("entry ({0}, {1}) of the transition matrix is not 0 or 1")]
    NonBinaryEntry(usize, usize),

    #[error("word length must be at least 1")]
    LengthZero,

    #[error("letter {letter} is outside the alphabet 1..={d}")]
    LetterOutOfRange { letter: usize, d: usize },

    #[error("word {0} is not admissible")]
    Inadmissible(String),

    #[error("word of length {len} is too short, need at least {needed} letters")]
    WordTooShort { len: usize, needed: usize },

    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),

    #[error("labeled graph is not right-resolving: vertex {vertex} has two outgoing edges labeled {label}")]
    NotRightResolving { vertex: usize, label: usize },

    #[error("labeled graph presents an empty shift")]
    EmptyShift,

    #[error("potentials are defined over different transition matrices")]
    AlphabetMismatch,

    #[error("potential range {found} does not match the expected range {expected}")]
    RangeMismatch { expected: usize, found: usize },

    #[error("potential table is missing admissible word {0}")]
    MissingWord(String),

    #[error("potential value for word {0} is not finite")]
    NonFiniteValue(String),

    #[error("transition matrix is not aperiodic (primitive)")]
    NotAperiodic,

    #[error("enumeration would visit {words} words, above the limit of {limit}")]
    MemoryGuard { words: u128, limit: u128 },

    #[error("invalid Markov measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid algebra data: {0}")]
    InvalidAlgebra(String),

    #[error("the sum of the corner projections rho_i(I) is not invertible")]
    NotInvertibleCornerSum,

    #[error("element is not positive: smallest eigenvalue {0}")]
    NotPositive(f64),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// True for failures of an iterative solver, as opposed to invalid input.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(self, Error::NoConvergence(_))
    }

    pub(crate) fn parse(path: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
