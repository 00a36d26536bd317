use alloc::string::String;

use thiserror::Error;

/// Failures raised by the core operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("{what} must not be empty")]
    Empty { what: &'static str },
    #[error("duplicate label `{label}` in {what}")]
    DuplicateLabel { what: &'static str, label: String },
    #[error("profile space is too large to index")]
    SpaceTooLarge,
    #[error("type `{type_label}` of agent {} has zero marginal probability", agent + 1)]
    ZeroMarginal { agent: usize, type_label: String },
    #[error("search space of {size} strategy profiles exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("strategy profile does not fit the mechanism: {reason}")]
    InvalidProfile { reason: String },
    #[error("certificate does not verify against this instance")]
    StaleBne,
    #[error("mechanism is not direct: strategies of agent {} differ from its types", agent + 1)]
    NotDirect { agent: usize },
    #[error("agent count must be at least 1")]
    NoAgents,
    #[error("energy parameter `{name}` is negative")]
    NegativeEnergy { name: &'static str },
}
