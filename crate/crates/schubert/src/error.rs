use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("unknown root system family `{0}`")]
    UnknownFamily(String),
    #[error("rank {rank} is not valid for family {family}")]
    InvalidRank { family: String, rank: usize },
    #[error("rank mismatch: expected {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("simple root index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("root enumeration exceeded {0} roots; the Cartan matrix is not of finite type")]
    GuardExceeded(usize),
    #[error("variable space mismatch: {0} vs {1}")]
    VarspaceMismatch(String, String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("fixed point {0} missing from table")]
    MissingFixedPoint(String),
    #[error("mask length {found} does not match tower height {expected}")]
    MaskLength { expected: usize, found: usize },
    #[error("dominating word does not dominate {0}")]
    NotDominated(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
