use thiserror::Error;

use crate::grammar::VarId;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("variable {0} is reachable from itself")]
    CyclicGrammar(String),
    #[error("variable {0} is defined more than once")]
    Redefinition(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("terminal {0} has non-positive weight")]
    NonPositiveWeight(String),
    #[error("length or weight of variable {0} overflows 64 bits")]
    Overflow(String),
    #[error("output of length {len} exceeds the limit {limit}")]
    OutputTooLarge { len: u64, limit: u64 },
    #[error("variable {0} derives the empty string")]
    EpsilonDerivation(String),
    #[error("occurrence {index} in the rule of {var} is not a variable")]
    NotAVariable { var: VarId, index: usize },
    #[error("position {pos} out of range 1..={len}")]
    PositionOutOfRange { pos: u64, len: u64 },
    #[error("symbol is not an ancestor of the target in the derivation tree")]
    NotAnAncestor,
    #[error("tree is not a caterpillar: node {0} has two non-leaf children")]
    NotACaterpillar(usize),
    #[error("no prefix variable for heavy-tree node {0}")]
    MissingPrefixVariable(String),
    #[error("predecessor set capacity {0} exceeded")]
    CapacityExceeded(usize),
    #[error("tree has {nodes} nodes, more than the word size {limit}")]
    TreeTooLarge { nodes: usize, limit: usize },
    #[error("tree height {height} exceeds the supported bound {limit}")]
    HeightTooLarge { height: usize, limit: usize },
    #[error("grammar is not contracting: {0}")]
    NotContracting(String),
    #[error("grammar is not in Chomsky normal form: {0}")]
    NotCnf(String),
    #[error("finger has not been set")]
    FingerNotSet,
    #[error("FSLP rule shape violation: {0}")]
    ShapeViolation(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("no start variable")]
    NoStart,
    #[error("expectation failed: expected {expected}, got {got}")]
    ExpectationFailed { expected: String, got: String },
}

pub type Result<T> = std::result::Result<T, Error>;
