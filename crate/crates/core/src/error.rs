use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {point} is outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),

    #[error("malformed cycle notation at byte {offset}: {reason}")]
    MalformedCycles { offset: usize, reason: &'static str },

    #[error("image table is not a bijection of 1..={0}")]
    NotABijection(usize),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("a permutation group needs at least one generator")]
    NoGenerators,

    #[error("invalid degree {degree} for {what}")]
    InvalidDegree { degree: usize, what: &'static str },

    #[error("{what} of size {size} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: u128,
        bound: u128,
    },

    #[error("vector entries must be pairwise distinct")]
    NotDistinct,

    #[error("input contains a non-finite value")]
    NonFinite,

    #[error("averaging projections need a tensor action")]
    AveragingNeedsTensor,

    #[error("factor {0} does not contain the full cycle (1 2 ... n)")]
    MissingCycle(usize),

    #[error("generating set element {0} is not in the group")]
    GeneratorNotInGroup(usize),

    #[error("invalid group spec: {0}")]
    Spec(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
