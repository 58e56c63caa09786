//! File formats and matrix assembly.
//!
//! * Game log: CSV `left,right,goals_left,goals_right`, `#` comment lines,
//!   blank lines ignored, LF or CRLF.
//! * Matrix file: JSON `{teams, pairs: [{a, b, n_games, avg_a, avg_b,
//!   counts_known, wins_a?, draws?, wins_b?}]}`.
//! * Ranking file: JSON array of team ids, best first.
//! * Model file: JSON `{teams, sigma?, pairs: [{a, b, mean_a, mean_b, sigma?}]}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{canonical_pairs, pair_slot, GameRecord, Outcomes, PairAggregate, Ranking, ScoreMatrix, TeamId};
use crate::simlab::{aggregate_from_tally, PairTally, RoundRobinModel, ScoreModel, DEFAULT_SIGMA};

pub fn parse_results(text: &str) -> Result<Vec<GameRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.iter().all(str::is_empty) || row.get(0).is_some_and(|f| f.starts_with('#')) {
            continue;
        }
        if row.len() != 4 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 4 fields (left,right,goals_left,goals_right), found {}", row.len()),
            });
        }
        let team = |i: usize| {
            TeamId::new(&row[i]).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })
        };
        let goals = |i: usize| -> Result<u32> {
            let v: i64 = row[i].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("goals must be an integer, found {:?}", &row[i]),
            })?;
            if v < 0 {
                return Err(Error::NegativeGoals { line });
            }
            u32::try_from(v).map_err(|_| Error::Parse {
                line,
                msg: format!("goal count {v} too large"),
            })
        };
        let (left, right) = (team(0)?, team(1)?);
        if left == right {
            return Err(Error::Parse {
                line,
                msg: format!("team {left} cannot play itself"),
            });
        }
        records.push(GameRecord {
            left,
            right,
            goals_left: goals(2)?,
            goals_right: goals(3)?,
        });
    }
    Ok(records)
}

pub fn render_results(records: &[GameRecord]) -> String {
    records
        .iter()
        .map(|g| format!("{},{},{},{}\n", g.left, g.right, g.goals_left, g.goals_right))
        .collect()
}

/// Builds a counts-known matrix; teams are ordered by first appearance and
/// every pair of teams must have played at least once.
pub fn aggregate(records: &[GameRecord]) -> Result<ScoreMatrix> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut teams: Vec<TeamId> = Vec::new();
    let mut index: HashMap<TeamId, usize> = HashMap::new();
    let mut intern = |t: &TeamId| -> usize {
        *index.entry(t.clone()).or_insert_with(|| {
            teams.push(t.clone());
            teams.len() - 1
        })
    };
    let mut tallies: HashMap<(usize, usize), PairTally> = HashMap::new();
    for g in records {
        let (i, j) = (intern(&g.left), intern(&g.right));
        if i == j {
            return Err(Error::SelfPair(g.left.clone()));
        }
        if i < j {
            tallies.entry((i, j)).or_default().push(g.goals_left, g.goals_right);
        } else {
            tallies.entry((j, i)).or_default().push(g.goals_right, g.goals_left);
        }
    }
    let mut pairs = Vec::with_capacity(tallies.len());
    for (i, j) in canonical_pairs(teams.len()) {
        let tally = tallies
            .get(&(i, j))
            .ok_or_else(|| Error::IncompleteMatrix(teams[i].clone(), teams[j].clone()))?;
        pairs.push(aggregate_from_tally(teams[i].clone(), teams[j].clone(), tally)?);
    }
    ScoreMatrix::new(teams, pairs)
}

/// Expands a counts-known matrix into per-game records that aggregate back
/// to the same matrix. Games are emitted in canonical pair order.
pub fn explode(matrix: &ScoreMatrix) -> Result<Vec<GameRecord>> {
    let mut games = Vec::new();
    for pair in matrix.pairs() {
        let counts = pair.counts.ok_or_else(|| Error::CountsRequired {
            a: pair.a.clone(),
            b: pair.b.clone(),
        })?;
        for (ga, gb) in explode_pair(pair, counts)? {
            games.push(GameRecord {
                left: pair.a.clone(),
                right: pair.b.clone(),
                goals_left: ga,
                goals_right: gb,
            });
        }
    }
    Ok(games)
}

fn explode_pair(pair: &PairAggregate, c: Outcomes) -> Result<Vec<(u32, u32)>> {
    let infeasible = |msg: &str| Error::InconsistentPair {
        a: pair.a.clone(),
        b: pair.b.clone(),
        msg: msg.to_string(),
    };
    let n = pair.n_games as f64;
    let total = |avg: f64| -> Result<u64> {
        let t = avg * n;
        if (t - t.round()).abs() > 1e-6 {
            return Err(infeasible("average goals times n_games is not an integer"));
        }
        Ok(t.round() as u64)
    };
    let (goals_a, goals_b) = (total(pair.avg_goals_a)?, total(pair.avg_goals_b)?);

    // minimal scores: 1:0 wins, 0:0 draws, 0:1 losses
    let mut games: Vec<(u64, u64)> = Vec::with_capacity(pair.n_games as usize);
    games.extend(std::iter::repeat_n((1, 0), c.wins_a as usize));
    games.extend(std::iter::repeat_n((0, 0), c.draws as usize));
    games.extend(std::iter::repeat_n((0, 1), c.wins_b as usize));
    let (extra_a, extra_b) = match (goals_a.checked_sub(c.wins_a), goals_b.checked_sub(c.wins_b)) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(infeasible("too few goals for the recorded wins")),
    };
    if games.is_empty() {
        return if goals_a == 0 && goals_b == 0 {
            Ok(vec![])
        } else {
            Err(infeasible("goals without games"))
        };
    }

    // Goals added to both sides of one game keep its outcome; the rest goes
    // to the winner of a game that side already wins.
    let shared = match (c.wins_a > 0, c.wins_b > 0) {
        (true, true) => 0,
        (true, false) => extra_b,
        (false, true) => extra_a,
        (false, false) => {
            if extra_a != extra_b {
                return Err(infeasible("all games drawn but goal totals differ"));
            }
            extra_a
        }
    };
    let (rest_a, rest_b) = match (extra_a.checked_sub(shared), extra_b.checked_sub(shared)) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(infeasible("goal totals incompatible with outcomes")),
    };
    games[0].0 += shared;
    games[0].1 += shared;
    if rest_a > 0 {
        games[0].0 += rest_a; // games[0] is an A win whenever rest_a > 0
    }
    if rest_b > 0 {
        let k = (c.wins_a + c.draws) as usize; // first B win
        games[k].1 += rest_b;
    }
    games
        .into_iter()
        .map(|(a, b)| match (u32::try_from(a), u32::try_from(b)) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(infeasible("goal count overflow")),
        })
        .collect()
}

/// Average scores of one benchmark team against each opponent.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub team: TeamId,
    pub n_games: u64,
    /// `(opponent, benchmark goals, opponent goals)`.
    pub entries: Vec<(TeamId, f64, f64)>,
}

/// Adds `bench.team` to `base` (appended last). Existing aggregates are kept
/// as-is; new pairs are averages-only.
pub fn merge_benchmark(base: &ScoreMatrix, bench: &BenchmarkRow) -> Result<ScoreMatrix> {
    if base.position(&bench.team).is_some() {
        return Err(Error::DuplicateTeam(bench.team.clone()));
    }
    let covered: Vec<&TeamId> = bench.entries.iter().map(|e| &e.0).collect();
    let missing: Vec<TeamId> = base.teams().iter().filter(|t| !covered.contains(t)).cloned().collect();
    let mut extra: Vec<TeamId> = Vec::new();
    for (i, t) in covered.iter().enumerate() {
        if base.position(t).is_none() || covered[..i].contains(t) {
            extra.push((*t).clone());
        }
    }
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::BenchmarkCoverage { missing, extra });
    }
    let mut teams = base.teams().to_vec();
    teams.push(bench.team.clone());
    let mut pairs = base.pairs().to_vec();
    for (opp, bench_goals, opp_goals) in &bench.entries {
        pairs.push(PairAggregate::averages_only(
            bench.team.clone(),
            opp.clone(),
            bench.n_games,
            *bench_goals,
            *opp_goals,
        )?);
    }
    ScoreMatrix::new(teams, pairs)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    teams: Vec<String>,
    pairs: Vec<PairDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDoc {
    a: String,
    b: String,
    n_games: u64,
    avg_a: f64,
    avg_b: f64,
    #[serde(default)]
    counts_known: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wins_a: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    draws: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wins_b: Option<u64>,
}

fn schema(path: impl Into<String>, msg: impl ToString) -> Error {
    Error::Schema {
        path: path.into(),
        msg: msg.to_string(),
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner())
    })
}

fn team_at(path: String, s: &str) -> Result<TeamId> {
    TeamId::new(s).map_err(|e| schema(path, e))
}

/// Canonical JSON: teams in matrix order, pairs in canonical order, fixed
/// key order, shortest round-trip floats, trailing newline.
pub fn dump_matrix(matrix: &ScoreMatrix) -> String {
    let doc = MatrixDoc {
        teams: matrix.teams().iter().map(|t| t.to_string()).collect(),
        pairs: matrix
            .pairs()
            .iter()
            .map(|p| PairDoc {
                a: p.a.to_string(),
                b: p.b.to_string(),
                n_games: p.n_games,
                avg_a: p.avg_goals_a,
                avg_b: p.avg_goals_b,
                counts_known: Some(p.counts_known()),
                wins_a: p.counts.map(|c| c.wins_a),
                draws: p.counts.map(|c| c.draws),
                wins_b: p.counts.map(|c| c.wins_b),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("matrix document serializes");
    out.push('\n');
    out
}

pub fn load_matrix(text: &str) -> Result<ScoreMatrix> {
    let doc: MatrixDoc = from_json(text)?;
    let teams = doc
        .teams
        .iter()
        .enumerate()
        .map(|(i, s)| team_at(format!("teams[{i}]"), s))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::with_capacity(doc.pairs.len());
    for (i, p) in doc.pairs.iter().enumerate() {
        let at = |field: &str| format!("pairs[{i}].{field}");
        let a = team_at(at("a"), &p.a)?;
        let b = team_at(at("b"), &p.b)?;
        let counts = match (p.wins_a, p.draws, p.wins_b) {
            (Some(wins_a), Some(draws), Some(wins_b)) => Some(Outcomes { wins_a, draws, wins_b }),
            (None, None, None) => None,
            _ => return Err(schema(format!("pairs[{i}]"), "wins_a, draws and wins_b must appear together")),
        };
        if let Some(flag) = p.counts_known {
            if flag != counts.is_some() {
                return Err(schema(at("counts_known"), "flag disagrees with presence of win/draw/loss counts"));
            }
        }
        let agg = PairAggregate {
            a,
            b,
            n_games: p.n_games,
            avg_goals_a: p.avg_a,
            avg_goals_b: p.avg_b,
            counts,
        };
        agg.validate().map_err(|e| schema(format!("pairs[{i}]"), e))?;
        pairs.push(agg);
    }
    ScoreMatrix::new(teams, pairs)
}

/// Ranking file: JSON array of team ids, best first.
pub fn load_ranking(text: &str) -> Result<Ranking> {
    let ids: Vec<String> = from_json(text)?;
    let order = ids
        .iter()
        .enumerate()
        .map(|(i, s)| team_at(format!("[{i}]"), s))
        .collect::<Result<Vec<_>>>()?;
    Ranking::from_order(order)
}

pub fn dump_ranking(ranking: &Ranking) -> String {
    let ids: Vec<&str> = ranking.order().iter().map(TeamId::as_str).collect();
    let mut out = serde_json::to_string_pretty(&ids).expect("ranking serializes");
    out.push('\n');
    out
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    teams: Vec<String>,
    #[serde(default)]
    sigma: Option<f64>,
    pairs: Vec<ModelPairDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelPairDoc {
    a: String,
    b: String,
    mean_a: f64,
    mean_b: f64,
    #[serde(default)]
    sigma: Option<f64>,
}

/// Model file for round-robin simulation. Per-pair `sigma` overrides the
/// file-level one, which overrides `default_sigma`.
pub fn load_model(text: &str, default_sigma: Option<f64>) -> Result<RoundRobinModel> {
    let doc: ModelDoc = from_json(text)?;
    let teams = doc
        .teams
        .iter()
        .enumerate()
        .map(|(i, s)| team_at(format!("teams[{i}]"), s))
        .collect::<Result<Vec<_>>>()?;
    let base_sigma = doc.sigma.or(default_sigma).unwrap_or(DEFAULT_SIGMA);
    let mut pairs = Vec::with_capacity(doc.pairs.len());
    for (i, p) in doc.pairs.iter().enumerate() {
        let model = ScoreModel::new(p.mean_a, p.mean_b, p.sigma.unwrap_or(base_sigma))
            .map_err(|e| schema(format!("pairs[{i}]"), e))?;
        pairs.push((team_at(format!("pairs[{i}].a"), &p.a)?, team_at(format!("pairs[{i}].b"), &p.b)?, model));
    }
    RoundRobinModel::new(teams, pairs)
}

/// Index of `(a, b)` in canonical pair order of `teams`, if both are present.
pub fn pair_index(teams: &[TeamId], a: &TeamId, b: &TeamId) -> Option<usize> {
    let i = teams.iter().position(|t| t == a)?;
    let j = teams.iter().position(|t| t == b)?;
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Some(pair_slot(teams.len(), i, j)),
        std::cmp::Ordering::Greater => Some(pair_slot(teams.len(), j, i)),
        std::cmp::Ordering::Equal => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TeamId {
        TeamId::new(s).unwrap()
    }

    #[test]
    fn parses_game_lines() {
        let games = parse_results("# header\r\ngliders,helios,2,1\r\n\r\n  a , b , 0 , 3\n").unwrap();
        assert_eq!(games.len(), 2);
        assert_eq!(games[0], GameRecord::new(t("gliders"), t("helios"), 2, 1).unwrap());
        assert_eq!(games[1].goals_right, 3);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_results("a,b,1,0\na,a,1,0\n").unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("itself"));
            }
            e => panic!("{e}"),
        }
        assert!(matches!(parse_results("a,b,-1,0").unwrap_err(), Error::NegativeGoals { line: 1 }));
        assert!(matches!(parse_results("x,y,1,0\na,b,1").unwrap_err(), Error::Parse { line: 2, .. }));
        assert!(matches!(parse_results("a,b,one,0").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(parse_results("a b,c,1,0").unwrap_err(), Error::Parse { line: 1, .. }));
    }

    #[test]
    fn aggregate_examples() {
        let games = parse_results("a,b,1,0\nb,a,1,0\n").unwrap();
        let m = aggregate(&games).unwrap();
        let p = m.pair(&t("a"), &t("b")).unwrap();
        assert_eq!((p.avg_goals_a, p.avg_goals_b), (0.5, 0.5));
        assert_eq!(p.counts, Some(Outcomes { wins_a: 1, draws: 0, wins_b: 1 }));

        let m = aggregate(&parse_results("a,b,3,3").unwrap()).unwrap();
        let p = &m.pairs()[0];
        assert_eq!(p.counts.unwrap().draws, 1);
        assert_eq!((p.avg_goals_a, p.avg_goals_b), (3.0, 3.0));

        assert!(matches!(aggregate(&[]), Err(Error::EmptyInput)));
        let partial = parse_results("a,b,1,0\nb,c,1,0").unwrap();
        assert!(matches!(aggregate(&partial), Err(Error::IncompleteMatrix(..))));
    }

    #[test]
    fn explode_round_trips_awkward_pairs() {
        let log = "a,b,0,0\na,b,2,2\nc,a,5,1\nc,b,0,1\nc,b,4,0\nb,c,3,3\n";
        let m = aggregate(&parse_results(log).unwrap()).unwrap();
        assert_eq!(aggregate(&explode(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn explode_needs_counts() {
        let m = ScoreMatrix::new(
            vec![t("a"), t("b")],
            vec![PairAggregate::averages_only(t("a"), t("b"), 4, 1.0, 0.0).unwrap()],
        )
        .unwrap();
        assert!(matches!(explode(&m), Err(Error::CountsRequired { .. })));
    }

    #[test]
    fn merge_rejects_bad_coverage() {
        let base = ScoreMatrix::new(
            vec![t("a"), t("b")],
            vec![PairAggregate::averages_only(t("a"), t("b"), 4, 1.0, 0.0).unwrap()],
        )
        .unwrap();
        let row = BenchmarkRow {
            team: t("bench"),
            n_games: 10,
            entries: vec![(t("a"), 1.0, 1.0), (t("z"), 1.0, 0.0)],
        };
        match merge_benchmark(&base, &row).unwrap_err() {
            Error::BenchmarkCoverage { missing, extra } => {
                assert_eq!(missing, vec![t("b")]);
                assert_eq!(extra, vec![t("z")]);
            }
            e => panic!("{e}"),
        }
        let dup = BenchmarkRow { team: t("a"), n_games: 1, entries: vec![] };
        assert!(matches!(merge_benchmark(&base, &dup), Err(Error::DuplicateTeam(_))));
    }

    #[test]
    fn merge_into_empty_base() {
        let base = ScoreMatrix::new(vec![], vec![]).unwrap();
        let row = BenchmarkRow { team: t("bench"), n_games: 1, entries: vec![] };
        let m = merge_benchmark(&base, &row).unwrap();
        assert_eq!(m.teams(), &[t("bench")]);
        assert!(m.pairs().is_empty());
    }

    #[test]
    fn load_reports_paths() {
        let missing_pair = r#"{"teams":["a","b","c"],"pairs":[{"a":"a","b":"b","n_games":1,"avg_a":1,"avg_b":0}]}"#;
        assert!(matches!(load_matrix(missing_pair), Err(Error::IncompleteMatrix(..))));

        let bad_type = r#"{"teams":["a","b"],"pairs":[{"a":"a","b":"b","n_games":"x","avg_a":1,"avg_b":0}]}"#;
        match load_matrix(bad_type).unwrap_err() {
            Error::Schema { path, .. } => assert_eq!(path, "pairs[0].n_games"),
            e => panic!("{e}"),
        }

        let partial_counts =
            r#"{"teams":["a","b"],"pairs":[{"a":"a","b":"b","n_games":1,"avg_a":1,"avg_b":0,"wins_a":1}]}"#;
        assert!(matches!(load_matrix(partial_counts), Err(Error::Schema { .. })));

        let bad_flag = r#"{"teams":["a","b"],"pairs":[{"a":"a","b":"b","n_games":1,"avg_a":1,"avg_b":0,"counts_known":true}]}"#;
        match load_matrix(bad_flag).unwrap_err() {
            Error::Schema { path, .. } => assert_eq!(path, "pairs[0].counts_known"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn dump_load_round_trip_with_counts() {
        let m = aggregate(&parse_results("a,b,1,0\nb,a,2,2\nc,a,0,1\nb,c,1,1").unwrap()).unwrap();
        let text = dump_matrix(&m);
        assert_eq!(load_matrix(&text).unwrap(), m);
        assert_eq!(dump_matrix(&load_matrix(&text).unwrap()), text);
        assert!(text.contains("\"counts_known\": true"));
    }

    #[test]
    fn ranking_and_model_files() {
        let r = load_ranking(r#"["b","a"]"#).unwrap();
        assert_eq!(r.rank_of(&t("a")), Some(2));
        assert_eq!(load_ranking(&dump_ranking(&r)).unwrap(), r);
        assert!(load_ranking(r#"["a","a"]"#).is_err());

        let model = load_model(
            r#"{"teams":["x","y","z"],"sigma":0.5,"pairs":[
                {"a":"x","b":"y","mean_a":1,"mean_b":0},
                {"a":"z","b":"x","mean_a":2,"mean_b":1,"sigma":0},
                {"a":"y","b":"z","mean_a":1,"mean_b":1}]}"#,
            None,
        )
        .unwrap();
        assert_eq!(model.teams().len(), 3);
        let incomplete = r#"{"teams":["x","y","z"],"pairs":[{"a":"x","b":"y","mean_a":1,"mean_b":0}]}"#;
        assert!(matches!(load_model(incomplete, None), Err(Error::IncompleteModel(..))));
        assert_eq!(pair_index(model.teams(), &t("z"), &t("y")), Some(2));
    }
}
