use thiserror::Error;

use crate::tree::TreeAddress;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("address {0} does not resolve")]
    Address(TreeAddress),

    #[error("cannot adjoin {tree} at {addr}: {reason}")]
    Adjunction {
        tree: String,
        addr: TreeAddress,
        reason: String,
    },

    #[error("adjoining constraint at {addr} forbids {tree}")]
    Constraint { tree: String, addr: TreeAddress },

    #[error("invalid operation site {addr}: {reason}")]
    Site { addr: TreeAddress, reason: String },

    #[error("malformed elementary tree {tree}: {reason}")]
    Malformed { tree: String, reason: String },

    #[error("unknown tree {0}")]
    UnknownTree(String),

    #[error("ill-formed derivation: {0}")]
    Derivation(String),

    #[error("more than one predicative tree adjoined at {0}")]
    MultiAdjunction(TreeAddress),

    #[error("cannot start rewriting from {0}: not an initial pair")]
    State(String),

    #[error("link {0} is not present in the current state")]
    Link(String),

    #[error("token {0:?} is not in the grammar's terminal alphabet")]
    Lexicon(String),

    #[error("{line}:{column}: {message}")]
    Load {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn load(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Load {
            line,
            column,
            message: message.into(),
        }
    }
}
