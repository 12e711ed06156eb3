use thiserror::Error;

use crate::field::Elem;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} exceeds the supported bound of 65536")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("modulus {0:?} is not a monic irreducible polynomial of the declared degree")]
    BadModulus(Vec<u32>),
    #[error("element code {code} out of range for a field of order {q}")]
    ElementOutOfRange { code: u32, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial degree must be at least 1")]
    ConstantPolynomial,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a spread needs at least two members, got {0}")]
    TooFewMembers(usize),
    #[error("{s} members exceed the maximum q^k+1 = {max}")]
    TooManyMembers { s: usize, max: usize },
    #[error("ambient dimension {0} is not even")]
    OddAmbient(usize),
    #[error("member {index} has dimension {found}, expected {expected}")]
    WrongMemberDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("members {i} and {j} share the nonzero vector {witness:?}")]
    NontrivialIntersection {
        i: usize,
        j: usize,
        witness: Vec<Elem>,
    },
    #[error("invalid spread parameter: {0}")]
    InvalidParameter(String),
    #[error("target s = {target} not reached: stopped at {reached} members")]
    TargetNotReached { target: usize, reached: usize },
    #[error("index {index} out of range for a spread of {len} members")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index {0} selected twice")]
    DuplicateIndex(usize),

    #[error("defining set contains the zero vector at position {0}")]
    ZeroInDefiningSet(usize),
    #[error("defining set has rank {rank} < ambient dimension {m}")]
    RankDeficient { rank: usize, m: usize },
    #[error("message vector must be nonzero")]
    ZeroMessage,
    #[error("message is minimal (V(y,D) has full dimension m-1); no covering certificate exists")]
    NoCertificate,
    #[error("brute-force check needs q^m <= 2^20, got {q}^{m}")]
    BruteForceTooLarge { q: u32, m: usize },
    #[error("first defining set is not a sub-multiset of the second")]
    NotSubMultiset,
    #[error("empty weight distribution")]
    EmptyDistribution,

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
