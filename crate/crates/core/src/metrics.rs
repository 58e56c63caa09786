//! Rank-position distances between rankings over the same team set.

use crate::error::{Error, Result};
use crate::model::{Ranking, TeamId};

/// Sum of absolute rank differences over all teams.
pub fn l1_distance(first: &Ranking, second: &Ranking) -> Result<u64> {
    Ok(rank_differences(first, second)?.iter().map(|d| d.abs_diff()).sum())
}

/// Per-team rank pair, in the first ranking's order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankDelta {
    pub team: TeamId,
    pub first: usize,
    pub second: usize,
}

impl RankDelta {
    pub fn abs_diff(&self) -> u64 {
        self.first.abs_diff(self.second) as u64
    }
}

pub fn rank_differences(first: &Ranking, second: &Ranking) -> Result<Vec<RankDelta>> {
    check_domain(first, second)?;
    Ok(first
        .order()
        .iter()
        .enumerate()
        .map(|(pos, team)| RankDelta {
            team: team.clone(),
            first: pos + 1,
            second: second.rank_of(team).expect("same domain"),
        })
        .collect())
}

fn check_domain(first: &Ranking, second: &Ranking) -> Result<()> {
    let only_first: Vec<TeamId> = first
        .order()
        .iter()
        .filter(|t| second.rank_of(t).is_none())
        .cloned()
        .collect();
    let only_second: Vec<TeamId> = second
        .order()
        .iter()
        .filter(|t| first.rank_of(t).is_none())
        .cloned()
        .collect();
    if only_first.is_empty() && only_second.is_empty() {
        Ok(())
    } else {
        Err(Error::DomainMismatch {
            only_first,
            only_second,
        })
    }
}

/// Distance between `ranking` and the reference order (best first).
pub fn chronological_concordance(ranking: &Ranking, reference: &[TeamId]) -> Result<u64> {
    let reference = Ranking::from_order(reference.to_vec())?;
    l1_distance(ranking, &reference)
}
