use thiserror::Error;

use crate::model::TeamId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the ranking, simulation and ingest layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("invalid team id {0:?}: must be a non-empty token without whitespace or parentheses")]
    InvalidTeamId(String),

    #[error("team {0} cannot play itself")]
    SelfPair(TeamId),

    #[error("team {0} listed more than once")]
    DuplicateTeam(TeamId),

    #[error("team {0} is not part of the matrix")]
    UnknownTeam(TeamId),

    #[error("pair {0}-{1} listed more than once")]
    DuplicatePair(TeamId, TeamId),

    #[error("incomplete matrix: missing pair {0}-{1}")]
    IncompleteMatrix(TeamId, TeamId),

    #[error("pair {a}-{b}: {msg}")]
    InconsistentPair { a: TeamId, b: TeamId, msg: String },

    #[error("pair {a}-{b}: win/draw/loss counts are required for the continuous scheme")]
    CountsRequired { a: TeamId, b: TeamId },

    #[error("pair {a}-{b} has no games")]
    EmptyPair { a: TeamId, b: TeamId },

    #[error("points table is empty")]
    EmptyTable,

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("rankings cover different teams (only in first: {only_first:?}, only in second: {only_second:?})")]
    DomainMismatch {
        only_first: Vec<TeamId>,
        only_second: Vec<TeamId>,
    },

    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("line {line}: negative goals")]
    NegativeGoals { line: u64 },

    #[error("no games in input")]
    EmptyInput,

    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },

    #[error("benchmark row does not cover the base teams (missing: {missing:?}, extra: {extra:?})")]
    BenchmarkCoverage {
        missing: Vec<TeamId>,
        extra: Vec<TeamId>,
    },

    #[error("incomplete model: no score model for pair {0}-{1}")]
    IncompleteModel(TeamId, TeamId),

    #[error("scenario sequence is empty")]
    EmptyScenario,

    #[error("unknown fixture @{0}")]
    UnknownFixture(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
