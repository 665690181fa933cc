use alloc::string::String;

use crate::selector::Label;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("k = {k} exceeds universe size N = {n}")]
    KExceedsUniverse { k: usize, n: usize },
    #[error("q = {q} must satisfy 1 <= q <= k = {k}")]
    InvalidQ { k: usize, q: usize },
    #[error("q = {q} does not divide k = {k}")]
    QNotDivisor { k: usize, q: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("label {label} outside universe [0, {universe})")]
    LabelOutOfRange { label: Label, universe: usize },
    #[error("duplicate label {0}")]
    DuplicateLabel(Label),
    #[error("enumeration needs {required} primitive checks, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("no verified selector after {attempts} attempts")]
    AttemptsExhausted { attempts: usize },
    #[error("node {node} is unreachable from source {origin}")]
    Unreachable { origin: Label, node: Label },
    #[error("network is not strongly connected (node {0} cannot reach or be reached from node 0)")]
    NotStronglyConnected(Label),
    #[error("gossip incomplete: node {node} is missing rumor {rumor}")]
    GossipIncomplete { node: Label, rumor: Label },
    #[error("protocol invariant violated: {0}")]
    InvariantViolated(String),
}
