use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("malformed graph document: {0}")]
    Malformed(String),

    #[error("duplicate node identifier `{0}`")]
    DuplicateNode(String),

    #[error("edge references unknown node `{0}`")]
    UnknownNode(String),

    #[error("self-loop on node `{0}`")]
    SelfLoop(String),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),

    #[error("edge {{{u}, {v}}} has label {label}, outside [1, {k}]")]
    LabelOutOfRange {
        u: String,
        v: String,
        label: usize,
        k: usize,
    },

    #[error("node `{0}` is isolated")]
    IsolatedNode(String),

    #[error("path enumeration for edge {{{u}, {v}}} exceeded the limit of {limit} (found {found} before stopping)")]
    PathOverflow {
        u: String,
        v: String,
        limit: usize,
        found: usize,
    },

    #[error("check only applies to graphs with K = 2 sources (got K = {0})")]
    Inapplicable(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no verified code after {attempts} attempts (last prime {last_prime})")]
    ConstructionFailed { attempts: usize, last_prime: u64 },

    #[error("code does not match graph: {0}")]
    ShapeMismatch(String),

    #[error("exhaustive oracle needs {needed} evaluations, above the cap of {cap}")]
    CapExceeded { needed: u128, cap: u128 },
}
