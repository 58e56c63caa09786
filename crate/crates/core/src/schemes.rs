//! Discrete and continuous point allocation, and the tie-break chains that
//! turn a points table into a total order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{round_half_away, PairAggregate, PointsRow, Ranking, ScoreMatrix};

pub const WIN_POINTS: u32 = 3;
pub const DRAW_POINTS: u32 = 1;

/// Comparison tolerance for real-valued points and goal tallies.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Round each pair's average score, then award 3/1/0.
    Discrete,
    /// Average the per-game 3/1/0 points over all games of a pairing.
    Continuous,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Discrete => "discrete",
            SchemeKind::Continuous => "continuous",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "discrete" => Ok(SchemeKind::Discrete),
            "continuous" => Ok(SchemeKind::Continuous),
            other => Err(Error::InvalidValue(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscretePairPoints {
    pub points_a: u32,
    pub points_b: u32,
    pub rounded_a: i64,
    pub rounded_b: i64,
}

pub fn discrete_pair_points(avg_a: f64, avg_b: f64) -> Result<DiscretePairPoints> {
    for avg in [avg_a, avg_b] {
        if !avg.is_finite() || avg < 0.0 {
            return Err(Error::InvalidValue(format!(
                "average goals must be finite and >= 0, got {avg}"
            )));
        }
    }
    let rounded_a = round_half_away(avg_a)?;
    let rounded_b = round_half_away(avg_b)?;
    let (points_a, points_b) = match rounded_a.cmp(&rounded_b) {
        Ordering::Greater => (WIN_POINTS, 0),
        Ordering::Less => (0, WIN_POINTS),
        Ordering::Equal => (DRAW_POINTS, DRAW_POINTS),
    };
    Ok(DiscretePairPoints {
        points_a,
        points_b,
        rounded_a,
        rounded_b,
    })
}

/// Mean per-game points of both sides; needs win/draw/loss counts.
pub fn continuous_pair_points(agg: &PairAggregate) -> Result<(f64, f64)> {
    let counts = agg.counts.ok_or_else(|| Error::CountsRequired {
        a: agg.a.clone(),
        b: agg.b.clone(),
    })?;
    if agg.n_games == 0 {
        return Err(Error::EmptyPair {
            a: agg.a.clone(),
            b: agg.b.clone(),
        });
    }
    let n = agg.n_games as f64;
    let draws = counts.draws as f64;
    Ok((
        (3.0 * counts.wins_a as f64 + draws) / n,
        (3.0 * counts.wins_b as f64 + draws) / n,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointsTable {
    pub scheme: SchemeKind,
    /// One row per team, in matrix team order.
    pub rows: Vec<PointsRow>,
}

impl PointsTable {
    pub fn row(&self, team: &crate::model::TeamId) -> Option<&PointsRow> {
        self.rows.iter().find(|r| &r.team == team)
    }
}

pub fn points_table(matrix: &ScoreMatrix, scheme: SchemeKind) -> Result<PointsTable> {
    // Opponents are summed in team-id order so the totals do not depend on
    // the matrix's input order.
    let mut by_id: Vec<&crate::model::TeamId> = matrix.teams().iter().collect();
    by_id.sort();

    let mut rows = Vec::with_capacity(matrix.len());
    for team in matrix.teams() {
        let mut row = PointsRow {
            team: team.clone(),
            points: 0.0,
            goals_for_rounded: 0,
            goals_against_rounded: 0,
            goals_for_raw: 0.0,
            goals_against_raw: 0.0,
        };
        for &opp in by_id.iter().filter(|&&o| o != team) {
            let agg = matrix.pair(team, opp).expect("complete matrix");
            let discrete = discrete_pair_points(agg.avg_goals_a, agg.avg_goals_b)?;
            row.points += match scheme {
                SchemeKind::Discrete => discrete.points_a as f64,
                SchemeKind::Continuous => continuous_pair_points(&agg)?.0,
            };
            row.goals_for_rounded += discrete.rounded_a;
            row.goals_against_rounded += discrete.rounded_b;
            row.goals_for_raw += agg.avg_goals_a;
            row.goals_against_raw += agg.avg_goals_b;
        }
        rows.push(row);
    }
    Ok(PointsTable { scheme, rows })
}

fn quantized(x: f64) -> i64 {
    (x / TIE_TOLERANCE).round() as i64
}

/// Full tie-break comparison; `Less` means `x` ranks ahead of `y`.
pub fn compare_rows(scheme: SchemeKind, x: &PointsRow, y: &PointsRow) -> Ordering {
    let desc = |f: fn(&PointsRow) -> i64| f(y).cmp(&f(x));
    let points = desc(|r| quantized(r.points));
    let rounded_gd = desc(PointsRow::rounded_goal_difference);
    let raw_gd = desc(|r| quantized(r.raw_goal_difference()));
    let raw_gf = desc(|r| quantized(r.goals_for_raw));
    let id = x.team.cmp(&y.team);
    match scheme {
        SchemeKind::Discrete => points.then(rounded_gd).then(raw_gd).then(raw_gf).then(id),
        SchemeKind::Continuous => points.then(raw_gd).then(raw_gf).then(id),
    }
}

/// Orders the table with the scheme's tie-break chain.
///
/// Discrete: points, rounded goal difference, raw goal difference, raw goals
/// for, team id. Continuous: points, raw goal difference, raw goals for,
/// team id.
pub fn rank(table: &PointsTable) -> Result<Ranking> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut rows: Vec<&PointsRow> = table.rows.iter().collect();
    rows.sort_by(|x, y| compare_rows(table.scheme, x, y));
    Ranking::from_order(rows.into_iter().map(|r| r.team.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Outcomes, TeamId};
    use proptest::prelude::*;

    fn t(s: &str) -> TeamId {
        TeamId::new(s).unwrap()
    }

    #[test]
    fn discrete_examples() {
        let p = discrete_pair_points(1.2, 0.5).unwrap();
        assert_eq!((p.points_a, p.points_b, p.rounded_a, p.rounded_b), (1, 1, 1, 1));
        let p = discrete_pair_points(2.8, 0.3).unwrap();
        assert_eq!((p.points_a, p.points_b, p.rounded_a, p.rounded_b), (3, 0, 3, 0));
        let p = discrete_pair_points(0.0, 0.0).unwrap();
        assert_eq!((p.points_a, p.points_b, p.rounded_a, p.rounded_b), (1, 1, 0, 0));
        assert!(discrete_pair_points(-0.1, 0.0).is_err());
        assert!(discrete_pair_points(f64::NAN, 0.0).is_err());
    }

    fn counted(w: u64, d: u64, l: u64) -> PairAggregate {
        PairAggregate::with_counts(t("a"), t("b"), 1.0, 1.0, Outcomes { wins_a: w, draws: d, wins_b: l })
            .unwrap()
    }

    #[test]
    fn continuous_examples() {
        assert_eq!(continuous_pair_points(&counted(0, 10, 0)).unwrap(), (1.0, 1.0));
        assert_eq!(continuous_pair_points(&counted(5, 0, 5)).unwrap(), (1.5, 1.5));
        let (pa, pb) = continuous_pair_points(&counted(6, 2, 2)).unwrap();
        assert!((pa - 2.0).abs() < 1e-12 && (pb - 0.8).abs() < 1e-12);

        let avg_only = PairAggregate::averages_only(t("a"), t("b"), 10, 1.0, 1.0).unwrap();
        assert!(matches!(continuous_pair_points(&avg_only), Err(Error::CountsRequired { .. })));
        assert!(matches!(continuous_pair_points(&counted(0, 0, 0)), Err(Error::EmptyPair { .. })));
    }

    #[test]
    fn single_pair_draw_and_single_team() {
        let m = ScoreMatrix::new(
            vec![t("a"), t("b")],
            vec![PairAggregate::averages_only(t("a"), t("b"), 1, 0.0, 0.0).unwrap()],
        )
        .unwrap();
        let table = points_table(&m, SchemeKind::Discrete).unwrap();
        assert!(table.rows.iter().all(|r| r.points == 1.0));

        let solo = ScoreMatrix::new(vec![t("solo")], vec![]).unwrap();
        let r = rank(&points_table(&solo, SchemeKind::Discrete).unwrap()).unwrap();
        assert_eq!(r.rank_of(&t("solo")), Some(1));

        let empty = PointsTable { scheme: SchemeKind::Discrete, rows: vec![] };
        assert!(matches!(rank(&empty), Err(Error::EmptyTable)));
    }

    #[test]
    fn continuous_refuses_averages_only_and_names_pair() {
        let m = ScoreMatrix::new(
            vec![t("a"), t("b")],
            vec![PairAggregate::averages_only(t("a"), t("b"), 1, 0.0, 0.0).unwrap()],
        )
        .unwrap();
        let err = points_table(&m, SchemeKind::Continuous).unwrap_err();
        assert!(err.to_string().contains("a-b") || err.to_string().contains("b-a"), "{err}");
    }

    #[test]
    fn tie_break_falls_through_to_team_id() {
        let row = |id: &str| PointsRow {
            team: t(id),
            points: 4.0,
            goals_for_rounded: 3,
            goals_against_rounded: 1,
            goals_for_raw: 2.9,
            goals_against_raw: 1.1,
        };
        let table = PointsTable { scheme: SchemeKind::Discrete, rows: vec![row("zeta"), row("alpha")] };
        assert_eq!(rank(&table).unwrap().order(), &[t("alpha"), t("zeta")]);
    }

    prop_compose! {
        fn avg()(tenths in 0u32..60) -> f64 { tenths as f64 / 10.0 }
    }

    proptest! {
        #[test]
        fn discrete_pair_sums_to_two_or_three(a in avg(), b in avg()) {
            let p = discrete_pair_points(a, b).unwrap();
            let sum = p.points_a + p.points_b;
            prop_assert!(sum == 2 || sum == 3);
        }

        #[test]
        fn continuous_pair_sum_is_three_minus_draw_rate(w in 0u64..50, d in 0u64..50, l in 0u64..50) {
            prop_assume!(w + d + l > 0);
            let agg = counted(w, d, l);
            let (pa, pb) = continuous_pair_points(&agg).unwrap();
            let draw_rate = d as f64 / (w + d + l) as f64;
            prop_assert!((pa + pb - (3.0 - draw_rate)).abs() < 1e-12);
            prop_assert!((2.0..=3.0).contains(&(pa + pb)));
        }
    }
}
