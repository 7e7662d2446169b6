use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a network needs at least one node")]
    NoNodes,
    #[error("node {node} out of range for a network of {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("link ({0}, {1}) already present")]
    DuplicateLink(usize, usize),
    #[error("link weight must be positive and finite, got {0}")]
    BadWeight(f64),
    #[error("self-loop on node {0} but the network disallows self-loops")]
    SelfLoopNotAllowed(usize),
    #[error("operation needs at least one link")]
    NoLinks,
    #[error("automorphism search exceeded its budget of {0} nodes")]
    BudgetExceeded(u64),
    #[error("brute-force enumeration is limited to {max} nodes, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("cannot place {links} links in {slots} slots")]
    Infeasible { links: u64, slots: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors caused by exhausted limits or infeasible requests, as
    /// opposed to malformed input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded(_) | Error::TooLarge { .. } | Error::Infeasible { .. }
        )
    }
}
