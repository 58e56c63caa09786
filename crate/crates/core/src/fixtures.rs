//! Published league results embedded as fixtures.
//!
//! Result grids are transcribed cell by cell (average goals, row team first);
//! the goals, points and rank columns are kept alongside so the engine's
//! output can be audited against them.

use crate::error::{Error, Result};
use crate::ingest::{merge_benchmark, BenchmarkRow};
use crate::model::{canonical_pairs, PairAggregate, Ranking, ScoreMatrix, TeamId};

pub const FIXTURE_NAMES: [&str; 6] = [
    "table1",
    "table2",
    "table3",
    "table4",
    "rank_actual_2016",
    "rank_chronological",
];

/// 2016 estimation round robin, teams in final competition order.
const TABLE1_GRID: &str = "
Gliders   |    -    | 0.3:0.4 | 2.8:0.3 | 1.9:0.3 | 0.7:0.8 | 3.8:0.4 | 5.0:0.0 | 2.5:0.2
HELIOS    | 0.4:0.3 |    -    | 1.8:0.1 | 3.0:0.2 | 1.2:0.5 | 4.3:0.3 | 3.6:0.0 | 2.5:0.0
Ri-one    | 0.3:2.8 | 0.1:1.8 |    -    | 1.1:1.1 | 0.2:1.8 | 0.6:0.5 | 0.4:0.0 | 0.6:0.5
CSU_Yunlu | 0.3:1.9 | 0.2:3.0 | 1.1:1.1 |    -    | 0.5:1.2 | 2.0:0.7 | 1.4:0.0 | 1.2:0.4
Oxsy      | 0.8:0.7 | 0.5:1.2 | 1.8:0.2 | 1.2:0.5 |    -    | 3.5:0.5 | 4.4:0.0 | 3.0:0.1
Shiraz    | 0.4:3.8 | 0.3:4.3 | 0.5:0.6 | 0.7:2.0 | 0.5:3.5 |    -    | 0.5:0.1 | 0.8:1.0
MT2016    | 0.0:5.0 | 0.0:3.6 | 0.0:0.4 | 0.0:1.4 | 0.0:4.4 | 0.1:0.5 |    -    | 0.0:0.0
FURY      | 0.2:2.5 | 0.0:2.5 | 0.5:0.6 | 0.4:1.2 | 0.1:3.0 | 1.0:0.8 | 0.0:0.0 |    -
";
const TABLE1_GOALS: [(i64, i64); 8] = [(18, 1), (17, 1), (3, 10), (6, 8), (16, 4), (5, 16), (0, 15), (2, 12)];
const TABLE1_POINTS: [u32; 8] = [17, 17, 4, 11, 15, 5, 2, 3];
const TABLE1_RANKS: [usize; 8] = [1, 2, 6, 4, 3, 5, 8, 7];
const TABLE1_GAMES: u64 = 4000;

/// Evaluation round against the previous champion: single games played at
/// the event (top row) and averages over 1000 games (bottom row).
const TABLE2_OPPONENTS: [&str; 8] = ["Gliders", "HELIOS", "Ri-one", "CSU_Yunlu", "Oxsy", "Shiraz", "MT2016", "FURY"];
const TABLE2_SINGLE: &str = "0:1 | 1:2 | 7:1 | 2:0 | 4:1 | 3:2 | 4:0 | 11:2";
const TABLE2_AVERAGES: &str = "1.4:1.8 | 1.3:1.7 | 5.0:0.5 | 2.7:0.5 | 3.5:1.3 | 4.0:0.8 | 5.9:0.0 | 4.8:0.4";
const BENCHMARK_TEAM: &str = "WE2015";
const TABLE2_GAMES: u64 = 1000;

const TABLE3_GRID: &str = "
Gliders   |    -    | 0.3:0.4 | 1.8:1.4 | 2.8:0.3 | 1.9:0.3 | 0.7:0.8 | 3.8:0.4 | 5.0:0.0 | 2.5:0.2
HELIOS    | 0.4:0.3 |    -    | 1.7:1.3 | 1.8:0.1 | 3.0:0.2 | 1.2:0.5 | 4.3:0.3 | 3.6:0.0 | 2.5:0.0
WE2015    | 1.4:1.8 | 1.3:1.7 |    -    | 5.0:0.5 | 2.7:0.5 | 3.5:1.3 | 4.0:0.8 | 5.9:0.0 | 4.8:0.4
Ri-one    | 0.3:2.8 | 0.1:1.8 | 0.5:5.0 |    -    | 1.1:1.1 | 0.2:1.8 | 0.6:0.5 | 0.4:0.0 | 0.6:0.5
CSU_Yunlu | 0.3:1.9 | 0.2:3.0 | 0.5:2.7 | 1.1:1.1 |    -    | 0.5:1.2 | 2.0:0.7 | 1.4:0.0 | 1.2:0.4
Oxsy      | 0.8:0.7 | 0.5:1.2 | 1.3:3.5 | 1.8:0.2 | 1.2:0.5 |    -    | 3.5:0.5 | 4.4:0.0 | 3.0:0.1
Shiraz    | 0.4:3.8 | 0.3:4.3 | 0.8:4.0 | 0.5:0.6 | 0.7:2.0 | 0.5:3.5 |    -    | 0.5:0.1 | 0.8:1.0
MT2016    | 0.0:5.0 | 0.0:3.6 | 0.0:5.9 | 0.0:0.4 | 0.0:1.4 | 0.0:4.4 | 0.1:0.5 |    -    | 0.0:0.0
FURY      | 0.2:2.5 | 0.0:2.5 | 0.4:4.8 | 0.5:0.6 | 0.4:1.2 | 0.1:3.0 | 1.0:0.8 | 0.0:0.0 |    -
";
const TABLE3_GOALS: [(i64, i64); 9] =
    [(20, 2), (19, 2), (29, 8), (4, 15), (7, 11), (17, 8), (6, 20), (0, 21), (2, 17)];
const TABLE3_POINTS: [u32; 9] = [20, 20, 18, 4, 11, 15, 5, 2, 3];
const TABLE3_RANKS: [usize; 9] = [1, 2, 3, 7, 5, 4, 6, 9, 8];

/// Champions league, teams in chronological order (newest first).
const TABLE4_GRID: &str = "
Gliders2016 |    -    | 1.8:1.4 | 1.8:1.3 | 1.7:0.9 | 1.2:0.1 | 2.0:1.0
WE2015      | 1.4:1.8 |    -    | 2.5:2.5 | 3.0:2.5 | 2.2:0.9 | 4.0:2.9
WE2014      | 1.3:1.8 | 2.5:2.5 |    -    | 2.8:2.6 | 2.3:0.8 | 3.9:3.0
WE2013      | 0.9:1.7 | 2.5:3.0 | 2.6:2.8 |    -    | 1.9:0.9 | 2.9:3.2
HELIOS2012  | 0.1:1.2 | 0.9:2.2 | 0.8:2.3 | 0.9:1.9 |    -    | 2.6:1.8
WE2011      | 1.0:2.0 | 2.9:4.0 | 3.0:3.9 | 3.2:2.9 | 1.8:2.6 |    -
";
const TABLE4_GOALS: [(i64, i64); 6] = [(9, 4), (13, 12), (13, 12), (12, 12), (6, 9), (12, 16)];
const TABLE4_POINTS: [u32; 6] = [15, 8, 8, 6, 3, 1];
const TABLE4_RANKS: [usize; 6] = [1, 2, 3, 4, 5, 6];
const TABLE4_GAMES: u64 = 1000;

/// Published L1 distance between the final competition ranking and the
/// discrete estimate of Table 1.
pub const PUBLISHED_D1_ACTUAL_VS_DISCRETE: u64 = 8;
/// Published distance between the champions league ranking and the
/// chronological order.
pub const PUBLISHED_D1_LEAGUE_VS_CHRONOLOGICAL: u64 = 0;

/// Published continuous points of equal pairs `(q, q)` from 10,000 sampled
/// scores: `(q, points, mean goals a, mean goals b)`.
pub const PUBLISHED_EQUAL_PAIRS: [(f64, f64, f64, f64); 4] = [
    (0.0, 1.23, 0.38, 0.38),
    (1.0, 1.33, 1.07, 1.08),
    (2.0, 1.36, 1.99, 2.00),
    (3.0, 1.38, 3.02, 3.00),
];

/// Published points of asymmetric pairs `(q, 0)`:
/// `(q, winner points, loser points, mean goals a, mean goals b)`.
pub const PUBLISHED_ASYMMETRIC_PAIRS: [(f64, f64, f64, f64, f64); 3] = [
    (1.0, 2.31, 0.32, 1.07, 0.38),
    (2.0, 2.75, 0.13, 2.00, 0.38),
    (3.0, 2.94, 0.04, 2.97, 0.38),
];

/// Published per-team columns, in the table's row order.
#[derive(Debug, Clone, PartialEq)]
pub struct PublishedColumns {
    pub goals: Vec<(i64, i64)>,
    pub points: Vec<u32>,
    pub ranks: Vec<usize>,
}

/// A results grid with its published columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultsTable {
    pub matrix: ScoreMatrix,
    pub published: PublishedColumns,
}

impl ResultsTable {
    pub fn published_ranking(&self) -> Result<Ranking> {
        Ranking::from_ranks(self.matrix.teams().iter().cloned().zip(self.published.ranks.iter().copied()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRound {
    pub single_games: BenchmarkRow,
    pub averages: BenchmarkRow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fixture {
    Table(ResultsTable),
    Evaluation(EvaluationRound),
    Ranking(Ranking),
}

/// All embedded fixtures; the report runs on one of these so tests can
/// inject faults.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSet {
    pub table1: ResultsTable,
    pub table2: EvaluationRound,
    pub table3: ResultsTable,
    pub table4: ResultsTable,
    pub rank_actual_2016: Ranking,
    pub rank_chronological: Ranking,
}

impl FixtureSet {
    pub fn embedded() -> Self {
        FixtureSet {
            table1: table1(),
            table2: table2(),
            table3: table3(),
            table4: table4(),
            rank_actual_2016: rank_actual_2016(),
            rank_chronological: rank_chronological(),
        }
    }

    /// Table 1 extended with the benchmark team's averages, laid out in
    /// Table 3's team order.
    pub fn merged_evaluation(&self) -> Result<ScoreMatrix> {
        let merged = merge_benchmark(&self.table1.matrix, &self.table2.averages)?;
        merged.reordered(self.table3.matrix.teams())
    }
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let name = name.strip_prefix('@').unwrap_or(name);
    Ok(match name {
        "table1" => Fixture::Table(table1()),
        "table2" => Fixture::Evaluation(table2()),
        "table3" => Fixture::Table(table3()),
        "table4" => Fixture::Table(table4()),
        "rank_actual_2016" => Fixture::Ranking(rank_actual_2016()),
        "rank_chronological" => Fixture::Ranking(rank_chronological()),
        other => return Err(Error::UnknownFixture(other.to_string())),
    })
}

pub fn table1() -> ResultsTable {
    results_table(TABLE1_GRID, &|_, _| TABLE1_GAMES, &TABLE1_GOALS, &TABLE1_POINTS, &TABLE1_RANKS)
}

pub fn table2() -> EvaluationRound {
    EvaluationRound {
        single_games: benchmark_row(TABLE2_SINGLE, 1),
        averages: benchmark_row(TABLE2_AVERAGES, TABLE2_GAMES),
    }
}

pub fn table3() -> ResultsTable {
    let games = |a: &str, b: &str| {
        if a == BENCHMARK_TEAM || b == BENCHMARK_TEAM {
            TABLE2_GAMES
        } else {
            TABLE1_GAMES
        }
    };
    results_table(TABLE3_GRID, &games, &TABLE3_GOALS, &TABLE3_POINTS, &TABLE3_RANKS)
}

pub fn table4() -> ResultsTable {
    results_table(TABLE4_GRID, &|_, _| TABLE4_GAMES, &TABLE4_GOALS, &TABLE4_POINTS, &TABLE4_RANKS)
}

/// Final competition ranking of 2016 (Table 1 row order).
pub fn rank_actual_2016() -> Ranking {
    Ranking::from_order(grid_teams(TABLE1_GRID)).expect("distinct teams")
}

/// Champions ordered newest first.
pub fn rank_chronological() -> Ranking {
    Ranking::from_order(grid_teams(TABLE4_GRID)).expect("distinct teams")
}

fn grid_rows(grid: &str) -> impl Iterator<Item = Vec<&str>> {
    grid.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split('|').map(str::trim).collect())
}

fn grid_teams(grid: &str) -> Vec<TeamId> {
    grid_rows(grid)
        .map(|cells| TeamId::new(cells[0]).expect("valid team id"))
        .collect()
}

fn score_cell(cell: &str) -> (f64, f64) {
    let (a, b) = cell.split_once(':').expect("score cell");
    (a.trim().parse().expect("number"), b.trim().parse().expect("number"))
}

fn results_table(
    grid: &str,
    games: &dyn Fn(&str, &str) -> u64,
    goals: &[(i64, i64)],
    points: &[u32],
    ranks: &[usize],
) -> ResultsTable {
    let teams = grid_teams(grid);
    let rows: Vec<Vec<&str>> = grid_rows(grid).collect();
    let n = teams.len();
    let mut pairs = Vec::new();
    for (i, j) in canonical_pairs(n) {
        let (a, b) = score_cell(rows[i][j + 1]);
        let (rb, ra) = score_cell(rows[j][i + 1]);
        assert_eq!((a, b), (ra, rb), "grid not symmetric at {}/{}", teams[i], teams[j]);
        pairs.push(
            PairAggregate::averages_only(
                teams[i].clone(),
                teams[j].clone(),
                games(teams[i].as_str(), teams[j].as_str()),
                a,
                b,
            )
            .expect("valid cell"),
        );
    }
    ResultsTable {
        matrix: ScoreMatrix::new(teams, pairs).expect("complete grid"),
        published: PublishedColumns {
            goals: goals.to_vec(),
            points: points.to_vec(),
            ranks: ranks.to_vec(),
        },
    }
}

fn benchmark_row(cells: &str, n_games: u64) -> BenchmarkRow {
    BenchmarkRow {
        team: TeamId::new(BENCHMARK_TEAM).expect("valid team id"),
        n_games,
        entries: cells
            .split('|')
            .zip(TABLE2_OPPONENTS)
            .map(|(cell, opp)| {
                let (g, o) = score_cell(cell);
                (TeamId::new(opp).expect("valid team id"), g, o)
            })
            .collect(),
    }
}
