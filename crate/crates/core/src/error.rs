use thiserror::Error;

/// Errors raised by the library. Obstruction variants carry a readable
/// description of the offending class.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group of order {order} exceeds the configured bound {bound}")]
    OrderTooLarge { order: usize, bound: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("operands live in different coefficient rings")]
    MixedRings,
    #[error("operands live over different groups")]
    MixedGroups,
    #[error("operation needs an abelian group")]
    NonAbelianGroup,
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("lift obstruction: {0}")]
    NotLiftable(String),
    #[error("normal subgroup is not perfect: {0}")]
    NotPerfect(String),
    #[error("matrix is not invertible over the group ring: {0}")]
    NotInvertible(String),
    #[error("framing system is inconsistent: {0}")]
    NotASummand(String),
    #[error("complex is not acyclic: {0}")]
    NotAcyclic(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("model is not a one-sided h-cobordism: {0}")]
    NotOneSidedH(String),
    #[error("models do not share the same base")]
    MismatchedBase,
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("H2 obstruction: {0}")]
    H2Obstruction(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
