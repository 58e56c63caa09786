//! Domain types shared across the crate: teams, games, pairwise aggregates,
//! score matrices and rankings, plus the rounding rule behind the discrete
//! scheme.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Team identifier. A plain token: non-empty, no whitespace, no parentheses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TeamId(String);

impl TeamId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        let valid = !id.is_empty()
            && !id
                .chars()
                .any(|c| c.is_whitespace() || c == '(' || c == ')' || c.is_control());
        if valid {
            Ok(TeamId(id))
        } else {
            Err(Error::InvalidTeamId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TeamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for TeamId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TeamId::new(s)
    }
}

impl AsRef<str> for TeamId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// One played game with its final integer score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameRecord {
    pub left: TeamId,
    pub right: TeamId,
    pub goals_left: u32,
    pub goals_right: u32,
}

impl GameRecord {
    pub fn new(left: TeamId, right: TeamId, goals_left: u32, goals_right: u32) -> Result<Self> {
        if left == right {
            return Err(Error::SelfPair(left));
        }
        Ok(GameRecord {
            left,
            right,
            goals_left,
            goals_right,
        })
    }
}

/// Win/draw/loss counts of a pairing, from the point of view of side `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Outcomes {
    pub wins_a: u64,
    pub draws: u64,
    pub wins_b: u64,
}

impl Outcomes {
    pub fn total(&self) -> u64 {
        self.wins_a + self.draws + self.wins_b
    }

    pub fn swapped(self) -> Self {
        Outcomes {
            wins_a: self.wins_b,
            draws: self.draws,
            wins_b: self.wins_a,
        }
    }
}

/// Aggregate of all games between two teams.
///
/// Published result tables only carry average goals, so `counts` is optional:
/// `None` marks an averages-only aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAggregate {
    pub a: TeamId,
    pub b: TeamId,
    pub n_games: u64,
    pub avg_goals_a: f64,
    pub avg_goals_b: f64,
    pub counts: Option<Outcomes>,
}

impl PairAggregate {
    /// Averages-only aggregate, as transcribed from a results table.
    pub fn averages_only(a: TeamId, b: TeamId, n_games: u64, avg_a: f64, avg_b: f64) -> Result<Self> {
        let agg = PairAggregate {
            a,
            b,
            n_games,
            avg_goals_a: avg_a,
            avg_goals_b: avg_b,
            counts: None,
        };
        agg.validate()?;
        Ok(agg)
    }

    pub fn with_counts(
        a: TeamId,
        b: TeamId,
        avg_a: f64,
        avg_b: f64,
        counts: Outcomes,
    ) -> Result<Self> {
        let agg = PairAggregate {
            a,
            b,
            n_games: counts.total(),
            avg_goals_a: avg_a,
            avg_goals_b: avg_b,
            counts: Some(counts),
        };
        agg.validate()?;
        Ok(agg)
    }

    pub fn counts_known(&self) -> bool {
        self.counts.is_some()
    }

    /// The same aggregate seen from `b`'s side.
    pub fn swapped(&self) -> Self {
        PairAggregate {
            a: self.b.clone(),
            b: self.a.clone(),
            n_games: self.n_games,
            avg_goals_a: self.avg_goals_b,
            avg_goals_b: self.avg_goals_a,
            counts: self.counts.map(Outcomes::swapped),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.a == self.b {
            return Err(Error::SelfPair(self.a.clone()));
        }
        for avg in [self.avg_goals_a, self.avg_goals_b] {
            if !avg.is_finite() || avg < 0.0 {
                return Err(self.inconsistent(format!("average goals must be finite and >= 0, got {avg}")));
            }
        }
        if let Some(c) = self.counts {
            if c.total() != self.n_games {
                return Err(self.inconsistent(format!(
                    "wins_a + draws + wins_b = {} but n_games = {}",
                    c.total(),
                    self.n_games
                )));
            }
        }
        Ok(())
    }

    fn inconsistent(&self, msg: String) -> Error {
        Error::InconsistentPair {
            a: self.a.clone(),
            b: self.b.clone(),
            msg,
        }
    }
}

/// Complete round-robin over a team set: one aggregate per unordered pair.
///
/// Pairs are stored in canonical order (`teams[i]` vs `teams[j]`, `i < j`),
/// oriented so that `a` is the earlier team.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    teams: Vec<TeamId>,
    pairs: Vec<PairAggregate>,
}

impl ScoreMatrix {
    pub fn new(teams: Vec<TeamId>, pairs: Vec<PairAggregate>) -> Result<Self> {
        let index = team_index(&teams)?;
        let n = teams.len();
        let mut slots: Vec<Option<PairAggregate>> = vec![None; n * n.saturating_sub(1) / 2];
        for pair in pairs {
            pair.validate()?;
            let i = *index.get(&pair.a).ok_or_else(|| Error::UnknownTeam(pair.a.clone()))?;
            let j = *index.get(&pair.b).ok_or_else(|| Error::UnknownTeam(pair.b.clone()))?;
            let (lo, hi, oriented) = if i < j { (i, j, pair) } else { (j, i, pair.swapped()) };
            let slot = &mut slots[pair_slot(n, lo, hi)];
            if slot.is_some() {
                return Err(Error::DuplicatePair(oriented.a, oriented.b));
            }
            *slot = Some(oriented);
        }
        let mut out = Vec::with_capacity(slots.len());
        for (i, j) in canonical_pairs(n) {
            match slots[pair_slot(n, i, j)].take() {
                Some(p) => out.push(p),
                None => return Err(Error::IncompleteMatrix(teams[i].clone(), teams[j].clone())),
            }
        }
        Ok(ScoreMatrix { teams, pairs: out })
    }

    pub fn teams(&self) -> &[TeamId] {
        &self.teams
    }

    /// Pairs in canonical order.
    pub fn pairs(&self) -> &[PairAggregate] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.teams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.teams.is_empty()
    }

    pub fn position(&self, team: &TeamId) -> Option<usize> {
        self.teams.iter().position(|t| t == team)
    }

    /// Aggregate for `a` against `b`, oriented with `a` first.
    pub fn pair(&self, a: &TeamId, b: &TeamId) -> Option<PairAggregate> {
        let i = self.position(a)?;
        let j = self.position(b)?;
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some(self.pairs[pair_slot(self.len(), i, j)].clone()),
            std::cmp::Ordering::Greater => Some(self.pairs[pair_slot(self.len(), j, i)].swapped()),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn all_counts_known(&self) -> bool {
        self.pairs.iter().all(PairAggregate::counts_known)
    }

    /// Same matrix with a different team order. `order` must be a permutation
    /// of the current team set.
    pub fn reordered(&self, order: &[TeamId]) -> Result<Self> {
        let mut current: Vec<&TeamId> = self.teams.iter().collect();
        let mut wanted: Vec<&TeamId> = order.iter().collect();
        current.sort();
        wanted.sort();
        if current != wanted {
            return Err(Error::DomainMismatch {
                only_first: self.teams.iter().filter(|t| !order.contains(t)).cloned().collect(),
                only_second: order.iter().filter(|t| !self.teams.contains(t)).cloned().collect(),
            });
        }
        ScoreMatrix::new(order.to_vec(), self.pairs.clone())
    }
}

fn team_index(teams: &[TeamId]) -> Result<HashMap<TeamId, usize>> {
    let mut index = HashMap::with_capacity(teams.len());
    for (i, t) in teams.iter().enumerate() {
        if index.insert(t.clone(), i).is_some() {
            return Err(Error::DuplicateTeam(t.clone()));
        }
    }
    Ok(index)
}

/// Unordered pairs `(i, j)`, `i < j`, in canonical order.
pub fn canonical_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Position of pair `(i, j)`, `i < j`, in [`canonical_pairs`] order.
pub fn pair_slot(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Per-team tally of a points table.
#[derive(Debug, Clone, PartialEq)]
pub struct PointsRow {
    pub team: TeamId,
    pub points: f64,
    pub goals_for_rounded: i64,
    pub goals_against_rounded: i64,
    pub goals_for_raw: f64,
    pub goals_against_raw: f64,
}

impl PointsRow {
    pub fn rounded_goal_difference(&self) -> i64 {
        self.goals_for_rounded - self.goals_against_rounded
    }

    pub fn raw_goal_difference(&self) -> f64 {
        self.goals_for_raw - self.goals_against_raw
    }
}

/// Bijection from teams onto ranks `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    order: Vec<TeamId>,
}

impl Ranking {
    /// Ranking from teams listed best first.
    pub fn from_order(order: Vec<TeamId>) -> Result<Self> {
        team_index(&order).map_err(|e| Error::InvalidRanking(e.to_string()))?;
        Ok(Ranking { order })
    }

    /// Ranking from explicit `(team, rank)` assignments; ranks must be exactly `1..=n`.
    pub fn from_ranks(entries: impl IntoIterator<Item = (TeamId, usize)>) -> Result<Self> {
        let entries: Vec<(TeamId, usize)> = entries.into_iter().collect();
        let n = entries.len();
        let mut slots: Vec<Option<TeamId>> = vec![None; n];
        for (team, rank) in entries {
            if rank == 0 || rank > n {
                return Err(Error::InvalidRanking(format!("rank {rank} of {team} outside 1..={n}")));
            }
            if slots[rank - 1].is_some() {
                return Err(Error::InvalidRanking(format!("rank {rank} assigned twice")));
            }
            slots[rank - 1] = Some(team);
        }
        Ranking::from_order(slots.into_iter().map(|t| t.expect("all ranks filled")).collect())
    }

    /// Teams best first.
    pub fn order(&self) -> &[TeamId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn rank_of(&self, team: &TeamId) -> Option<usize> {
        self.order.iter().position(|t| t == team).map(|p| p + 1)
    }
}

/// Rounds half away from zero: `sign(x) * floor(|x| + 0.5)`.
pub fn round_half_away(x: f64) -> Result<i64> {
    if !x.is_finite() {
        return Err(Error::InvalidValue(format!("cannot round non-finite value {x}")));
    }
    let r = (x.abs() + 0.5).floor();
    if r > i64::MAX as f64 {
        return Err(Error::InvalidValue(format!("{x} out of integer range")));
    }
    Ok(if x < 0.0 { -(r as i64) } else { r as i64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> TeamId {
        TeamId::new(s).unwrap()
    }

    #[test]
    fn rounding_examples() {
        assert_eq!(round_half_away(1.2).unwrap(), 1);
        assert_eq!(round_half_away(2.5).unwrap(), 3);
        assert_eq!(round_half_away(0.5).unwrap(), 1);
        assert_eq!(round_half_away(0.0).unwrap(), 0);
        assert_eq!(round_half_away(-2.5).unwrap(), -3);
        assert_eq!(round_half_away(0.49999).unwrap(), 0);
        assert!(round_half_away(f64::NAN).is_err());
        assert!(round_half_away(f64::INFINITY).is_err());
    }

    #[test]
    fn team_id_rejects_bad_tokens() {
        assert!(TeamId::new("").is_err());
        assert!(TeamId::new("two words").is_err());
        assert!(TeamId::new("(x").is_err());
        assert!(TeamId::new("CSU_Yunlu").is_ok());
    }

    #[test]
    fn game_record_rejects_self_pair() {
        assert!(matches!(GameRecord::new(t("a"), t("a"), 1, 0), Err(Error::SelfPair(_))));
    }

    #[test]
    fn matrix_symmetric_lookup_and_completeness() {
        let p = PairAggregate::averages_only(t("b"), t("a"), 10, 1.5, 0.25).unwrap();
        let m = ScoreMatrix::new(vec![t("a"), t("b")], vec![p]).unwrap();
        let ab = m.pair(&t("a"), &t("b")).unwrap();
        let ba = m.pair(&t("b"), &t("a")).unwrap();
        assert_eq!(ab.avg_goals_a, 0.25);
        assert_eq!(ba.avg_goals_a, 1.5);
        assert_eq!(ab.avg_goals_a, ba.avg_goals_b);
        assert!(m.pair(&t("a"), &t("a")).is_none());

        let err = ScoreMatrix::new(vec![t("a"), t("b"), t("c")], m.pairs().to_vec()).unwrap_err();
        assert!(matches!(err, Error::IncompleteMatrix(..)));
    }

    #[test]
    fn matrix_rejects_duplicates_and_bad_counts() {
        let p = PairAggregate::averages_only(t("a"), t("b"), 1, 1.0, 0.0).unwrap();
        let err = ScoreMatrix::new(vec![t("a"), t("b")], vec![p.clone(), p.swapped()]).unwrap_err();
        assert!(matches!(err, Error::DuplicatePair(..)));
        assert!(matches!(
            ScoreMatrix::new(vec![t("a"), t("a")], vec![]),
            Err(Error::DuplicateTeam(_))
        ));
        let mut bad = p;
        bad.counts = Some(Outcomes { wins_a: 1, draws: 1, wins_b: 0 });
        assert!(matches!(
            ScoreMatrix::new(vec![t("a"), t("b")], vec![bad]),
            Err(Error::InconsistentPair { .. })
        ));
    }

    #[test]
    fn pair_slots_are_dense() {
        for n in 0..9 {
            let slots: Vec<usize> = canonical_pairs(n).map(|(i, j)| pair_slot(n, i, j)).collect();
            assert_eq!(slots, (0..n * n.saturating_sub(1) / 2).collect::<Vec<_>>());
        }
    }

    #[test]
    fn ranking_from_ranks_validates() {
        let r = Ranking::from_ranks([(t("x"), 2), (t("y"), 1)]).unwrap();
        assert_eq!(r.order(), &[t("y"), t("x")]);
        assert_eq!(r.rank_of(&t("x")), Some(2));
        assert!(Ranking::from_ranks([(t("x"), 1), (t("y"), 1)]).is_err());
        assert!(Ranking::from_ranks([(t("x"), 3), (t("y"), 1)]).is_err());
    }

    proptest! {
        #[test]
        fn rounding_is_monotone(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(round_half_away(lo).unwrap() <= round_half_away(hi).unwrap());
        }

        #[test]
        fn rounding_fixes_integers(k in -1_000_000i64..1_000_000) {
            prop_assert_eq!(round_half_away(k as f64).unwrap(), k);
        }

        #[test]
        fn rounding_stays_within_floor_plus_one(x in 0f64..1e6) {
            let r = round_half_away(x).unwrap();
            let f = x.floor() as i64;
            prop_assert!(r == f || r == f + 1);
        }
    }
}
