//! Crate-wide error type with a coarse classification used for process exit
//! codes: input errors (1), precision failures (2), internal inconsistencies (3).

use thiserror::Error;

use crate::scalar::Field;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error class; the CLI maps these to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-contract input. Exit code 1.
    Input,
    /// The requested truncation cannot support the computation, or results
    /// changed when recomputed at doubled truncation. Exit code 2.
    Precision,
    /// A cross-check that must hold by theory failed. Exit code 3.
    Internal,
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("coefficient field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),

    #[error("unsupported coefficient field: {0}")]
    InvalidField(String),

    #[error("scalar has no inverse: {0}")]
    NonInvertibleScalar(String),

    #[error("division by a series indistinguishable from zero at truncation {truncation}")]
    DivisionByZeroSeries { truncation: u32 },

    #[error("series division would leave the power series ring: divisor order {divisor} exceeds dividend order {dividend}")]
    DivisionOrder { divisor: u32, dividend: String },

    #[error("dimension mismatch: form has dimension {form}, vector has length {vector}")]
    DimensionMismatch { form: usize, vector: usize },

    #[error("dimension {dim} exceeds the exhaustive enumeration bound {bound}")]
    EnumerationBound { dim: usize, bound: usize },

    #[error("the associated bilinear form is degenerate")]
    DegenerateForm,

    #[error("generator set is empty")]
    EmptyGenerators,

    #[error("generators {0:?} have gcd {1} != 1, the generated monoid is not co-finite")]
    NonCoprimeGenerators(Vec<u64>, u64),

    #[error("operation requires an Arf semigroup, but the input is not Arf")]
    NotArf,

    #[error("branch has no coordinates")]
    EmptyBranch,

    #[error("all branch coordinates are indistinguishable from zero at the current truncation")]
    AllCoordinatesZero,

    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    #[error("truncation instability: {0}")]
    TruncationInstability(String),

    #[error("no stable tail of attained orders below truncation {truncation}; re-run with a larger truncation")]
    NoStableTail { truncation: u32 },

    #[error("blow-up did not reach a smooth point within {max_steps} steps; partial multiplicity sequence {partial:?}")]
    MaxStepsExhausted { max_steps: u32, partial: Vec<u64> },

    #[error("closure recursion exceeded depth {0} without reaching an Arf ring")]
    RecursionDepthExceeded(u32),

    #[error("argument {0} is below -1, outside the domain of the Herbrand function")]
    BelowMinusOne(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            FieldMismatch(..)
            | InvalidField(..)
            | NonInvertibleScalar(..)
            | DivisionByZeroSeries { .. }
            | DivisionOrder { .. }
            | DimensionMismatch { .. }
            | EnumerationBound { .. }
            | DegenerateForm
            | EmptyGenerators
            | NonCoprimeGenerators(..)
            | NotArf
            | EmptyBranch
            | BelowMinusOne(..)
            | InvalidFiltration(..)
            | Parse(..)
            | InvalidOption(..) => ErrorKind::Input,
            AllCoordinatesZero
            | InsufficientTruncation(..)
            | TruncationInstability(..)
            | NoStableTail { .. }
            | MaxStepsExhausted { .. }
            | RecursionDepthExceeded(..) => ErrorKind::Precision,
            Inconsistency(..) => ErrorKind::Internal,
        }
    }

    /// Exit code used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Input => 1,
            ErrorKind::Precision => 2,
            ErrorKind::Internal => 3,
        }
    }
}
