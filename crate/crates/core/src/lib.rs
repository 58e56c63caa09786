//! Evaluation toolkit for round-robin soccer-simulation tournaments.
//!
//! Ranks averaged results matrices under a discrete (3/1/0 on rounded
//! averages) and a continuous (per-pair win/draw rates) scheme, measures
//! ranking disagreement with the L1 rank distance, simulates score models
//! and handles the coach command that switches on weather overrides.

pub mod challenge;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod report;
pub mod schemes;
pub mod simlab;

pub use error::{Error, Result};
pub use model::{GameRecord, Outcomes, PairAggregate, PointsRow, Ranking, ScoreMatrix, TeamId};
pub use schemes::{points_table, rank, PointsTable, SchemeKind};
