use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("singular basis: columns are linearly dependent")]
    Singular,
    #[error("generators span the zero lattice")]
    EmptyLattice,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("rank {rank} exceeds the enumeration cap {cap}")]
    RankCapExceeded { rank: usize, cap: usize },
    #[error("promise violation: {0}")]
    PromiseViolation(String),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;
