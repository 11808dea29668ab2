use thiserror::Error;

use crate::game::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A path cap or profile budget was exceeded; `count` is how many were
    /// seen before giving up (a lower bound on the true count).
    #[error("explosion: {what} exceeds limit {limit} (counted at least {count})")]
    Explosion { what: String, limit: u128, count: u128 },

    #[error("player {player} has no path from {source_vertex} to {target}")]
    NoPath { player: usize, source_vertex: usize, target: usize },

    #[error("budget exhausted after {steps} steps: {detail}")]
    Budget { steps: usize, detail: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("structure error: {0}")]
    Structure(String),

    #[error("degenerate ratio: {0}")]
    Degenerate(String),

    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse { line: usize, column: usize, reason: String },

    #[error("invalid game: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidGame(Vec<Violation>),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("invalid search spec: {0}")]
    SearchSpec(String),

    #[error("scaled arithmetic overflow: {0}")]
    Overflow(String),

    /// An internal invariant failed; carries a witness dump.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
