use alloc::string::String;

/// Errors raised by problem construction, region building and search.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed problem notation at byte {offset}: {reason}")]
    Syntax { offset: usize, reason: String },
    #[error("receiver {0} appears more than once")]
    DuplicateReceiver(usize),
    #[error("receiver {0} is missing (ids must be exactly 1..n)")]
    MissingReceiver(usize),
    #[error("receiver {0} lists its own message as side information")]
    SelfSideInfo(usize),
    #[error("side information of receiver {receiver} names message {message} outside [n]")]
    SideInfoOutOfRange { receiver: usize, message: usize },
    #[error("capacity of server {{{0}}} is negative")]
    NegativeCapacity(String),
    #[error("capacity key {0:?} is not a nonempty subset of [n]")]
    BadCapacityKey(String),
    #[error("invalid rational {0:?}")]
    BadRational(String),
    #[error("receiver index {index} out of range 1..={n}")]
    ReceiverOutOfRange { index: usize, n: usize },
    #[error("problem size n = {n} outside supported range 1..={max}")]
    UnsupportedSize { n: usize, max: usize },
    #[error("polyhedron is infeasible")]
    Infeasible,
    #[error("constraint references undeclared variable {0}")]
    UndeclaredVariable(String),
    #[error("invalid decoding set for receiver {receiver}: {reason}")]
    InvalidDecoding { receiver: usize, reason: String },
    #[error("invalid server grouping: {0}")]
    InvalidGrouping(String),
    #[error("search directions must be nonnegative, got weight {0}")]
    NegativeWeight(String),
    #[error("search space of {required} configurations exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

pub type Result<T> = core::result::Result<T, Error>;
