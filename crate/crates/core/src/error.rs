//! Error type shared across the crate.
//!
//! Every variant renders as a single line so the CLI can emit
//! machine-parsable failures.

use std::fmt;
use std::io;
use std::path::PathBuf;

#[derive(Debug)]
pub enum Error {
    /// Underlying I/O failure, annotated with the path involved.
    Io { path: PathBuf, source: io::Error },
    /// Malformed input file; `line` is 1-based.
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    /// A node id outside `0..node_count`.
    NodeOutOfRange { node: usize, node_count: usize },
    /// A subset violated its contract (empty, bad ids, u == v, ...).
    InvalidSubset(String),
    /// Matrix dimensions do not line up.
    ShapeMismatch(String),
    /// A configuration value is out of range or inconsistent.
    InvalidConfig(String),
    /// Requested subset size exceeds what the point set can provide.
    InfeasibleSize { requested: usize, available: usize },
    /// Training produced a non-finite loss.
    NonFiniteLoss { epoch: usize },
    /// Random graph generation ran out of proposal budget.
    GenerationBudget {
        target_edges: usize,
        achieved_edges: usize,
        proposals: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io { path, source } => write!(f, "io error on {}: {}", path.display(), source),
            Error::Parse { path, line, msg } => {
                write!(f, "parse error at {}:{}: {}", path.display(), line, msg)
            }
            Error::NodeOutOfRange { node, node_count } => {
                write!(f, "node id {} out of range (graph has {} nodes)", node, node_count)
            }
            Error::InvalidSubset(msg) => write!(f, "invalid subset: {}", msg),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {}", msg),
            Error::InvalidConfig(msg) => write!(f, "invalid config: {}", msg),
            Error::InfeasibleSize { requested, available } => write!(
                f,
                "infeasible size constraint: requested {}, only {} points available",
                requested, available
            ),
            Error::NonFiniteLoss { epoch } => {
                write!(f, "training aborted: non-finite loss at epoch {}", epoch)
            }
            Error::GenerationBudget {
                target_edges,
                achieved_edges,
                proposals,
            } => write!(
                f,
                "generator budget exhausted: {} of {} target edges after {} proposals",
                achieved_edges, target_edges, proposals
            ),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
