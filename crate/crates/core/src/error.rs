use thiserror::Error;

/// Errors raised by table validation, reflection and corpus handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table has {rows} rows but order is {order}")]
    Shape { order: usize, rows: usize },

    #[error("table entry ({row},{col}) = {value} is out of range")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },

    #[error("multiplication is not associative at ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),

    #[error("order {order} exceeds the bound {bound}")]
    OrderTooLarge { order: usize, bound: usize },

    #[error("map is not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("partition is not a congruence: {0} ~ {1} but the classes are not compatible")]
    NotACongruence(usize, usize),

    #[error("semigroup does not belong to the domain of variety `{0}`")]
    NotInDomain(String),

    #[error("target does not belong to the subvariety of `{0}`")]
    NotInSubvariety(String),

    #[error("function is not surjective")]
    NotSurjective,

    #[error("element {element} is not idempotent, so it is not a point of the reflection")]
    NotAPoint { element: usize },

    #[error("no enumerated corpus available for order {0}")]
    CorpusMissing(usize),

    #[error("invalid identity `{0}`")]
    InvalidIdentity(String),

    #[error("unknown variety `{0}`")]
    UnknownVariety(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
