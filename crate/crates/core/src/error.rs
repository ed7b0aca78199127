use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice size must be at least 1, got {0}")]
    InvalidLatticeSize(usize),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("size mismatch: |nu| = {nu} but |lambda| + |mu| = {sum}")]
    SizeMismatch { nu: u64, sum: u64 },
    #[error("partition has {parts} nonzero parts, more than n = {n}")]
    TooManyParts { parts: usize, n: usize },
    #[error("input too large: |nu| = {0} exceeds the supported bound 2^30")]
    InputTooLarge(u64),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("integer overflow in flow arithmetic")]
    Overflow,
    #[error("invalid flow: {0}")]
    InvalidFlow(String),
    #[error("flow is not an integral hive flow with the required border")]
    NotInPolytope,
    #[error("invalid turnpath: {0}")]
    InvalidTurnPath(String),
    #[error("turnpath is not extendable")]
    NotExtendable,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error("operation budget of {0} exceeded")]
    OpBudgetExceeded(u64),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
