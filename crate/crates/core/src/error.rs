use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("degenerate cone: rays are parallel or opposite")]
    DegenerateCone,
    #[error("map is not unimodular: determinant is {0}")]
    NotUnimodular(String),
    #[error("cone is smooth; no continued fraction")]
    Smooth,
    #[error("not in lowest terms")]
    NotLowestTerms,
    #[error("not in normal-form range")]
    OutOfRange,
    #[error("invalid continued fraction: {0}")]
    InvalidContinuedFraction(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid characteristic {0}")]
    InvalidCharacteristic(String),
    #[error("localization undefined at non-vertex {0}")]
    NotAVertex(usize),
    #[error("empty generator set")]
    EmptyGenerators,
    #[error("unpointed semigroup; membership search would not terminate")]
    Unpointed,
    #[error("the Nash mode is only defined in characteristic zero")]
    NashRequiresCharZero,
    #[error("value too large for a residue table: {0}")]
    TooLarge(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
