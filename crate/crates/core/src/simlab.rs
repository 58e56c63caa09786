//! Score-model laboratory for the continuous scheme.
//!
//! Goals of each side are drawn from a Gaussian around the side's mean,
//! rounded half away from zero and clamped at zero. Two routes estimate the
//! per-pair continuous points: Monte Carlo over simulated games, and an exact
//! summation over the discretized normal distribution. The closed-form
//! scenario bounds complete the picture.
//!
//! Every simulated pair owns a ChaCha stream keyed by `(master_seed,
//! pair_index)`, so results do not depend on evaluation order or thread count.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{canonical_pairs, pair_slot, Outcomes, PairAggregate, ScoreMatrix, TeamId};

pub const DEFAULT_SIGMA: f64 = 1.0;
pub const BIAS_GAMES: u64 = 10_000;
pub const TOURNAMENT_GAMES: u64 = 4_000;

/// Cumulative mass after which the goal pmf is truncated; the remainder is
/// lumped into the last bucket.
pub const PMF_TAIL: f64 = 1e-9;

/// Latent mean goals of both sides and the shared standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreModel {
    pub mean_a: f64,
    pub mean_b: f64,
    pub sigma: f64,
}

impl ScoreModel {
    /// `sigma = 0` is accepted and yields deterministic games; the exact
    /// oracle requires `sigma > 0`.
    pub fn new(mean_a: f64, mean_b: f64, sigma: f64) -> Result<Self> {
        for (what, v) in [("mean_a", mean_a), ("mean_b", mean_b), ("sigma", sigma)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidValue(format!("{what} must be finite and >= 0, got {v}")));
            }
        }
        Ok(ScoreModel { mean_a, mean_b, sigma })
    }

    pub fn swapped(self) -> Self {
        ScoreModel {
            mean_a: self.mean_b,
            mean_b: self.mean_a,
            sigma: self.sigma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_games: u64,
    pub master_seed: u64,
    pub sigma: f64,
}

impl SimConfig {
    pub fn new(n_games: u64, master_seed: u64, sigma: f64) -> Result<Self> {
        if n_games == 0 {
            return Err(Error::InvalidValue("n_games must be > 0".into()));
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::InvalidValue(format!("sigma must be finite and >= 0, got {sigma}")));
        }
        Ok(SimConfig {
            n_games,
            master_seed,
            sigma,
        })
    }

    pub fn bias(master_seed: u64) -> Self {
        SimConfig {
            n_games: BIAS_GAMES,
            master_seed,
            sigma: DEFAULT_SIGMA,
        }
    }

    pub fn tournament(master_seed: u64) -> Self {
        SimConfig {
            n_games: TOURNAMENT_GAMES,
            master_seed,
            sigma: DEFAULT_SIGMA,
        }
    }
}

/// Independent random stream for one pair.
pub fn stream_rng(master_seed: u64, pair_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(pair_index);
    rng
}

/// One integer goal count: Gaussian draw, rounded half away from zero,
/// clamped at zero.
pub fn sample_goals<R: Rng + ?Sized>(mean: f64, sigma: f64, rng: &mut R) -> u32 {
    let z: f64 = rng.sample(StandardNormal);
    let x = mean + sigma * z;
    if x <= 0.0 {
        // negative draws round to <= 0 and clamp
        0
    } else {
        (x + 0.5).floor().min(u32::MAX as f64) as u32
    }
}

/// Endless sequence of simulated game scores for one pairing.
pub struct Games<R> {
    model: ScoreModel,
    rng: R,
}

impl<R: Rng> Iterator for Games<R> {
    type Item = (u32, u32);

    fn next(&mut self) -> Option<(u32, u32)> {
        let a = sample_goals(self.model.mean_a, self.model.sigma, &mut self.rng);
        let b = sample_goals(self.model.mean_b, self.model.sigma, &mut self.rng);
        Some((a, b))
    }
}

/// Games of the pair at `pair_index` under `master_seed`.
pub fn pair_games(model: ScoreModel, master_seed: u64, pair_index: u64) -> Games<ChaCha8Rng> {
    Games {
        model,
        rng: stream_rng(master_seed, pair_index),
    }
}

/// Running totals over a batch of games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairTally {
    pub outcomes: Outcomes,
    pub goals_a: u64,
    pub goals_b: u64,
    pub goals_a_sq: u128,
    pub goals_b_sq: u128,
}

impl PairTally {
    pub fn from_games(games: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut tally = PairTally::default();
        for (a, b) in games {
            tally.push(a, b);
        }
        tally
    }

    pub fn push(&mut self, a: u32, b: u32) {
        let (a, b) = (a as u64, b as u64);
        self.goals_a += a;
        self.goals_b += b;
        self.goals_a_sq += u128::from(a) * u128::from(a);
        self.goals_b_sq += u128::from(b) * u128::from(b);
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => self.outcomes.wins_a += 1,
            std::cmp::Ordering::Less => self.outcomes.wins_b += 1,
            std::cmp::Ordering::Equal => self.outcomes.draws += 1,
        }
    }

    pub fn n_games(&self) -> u64 {
        self.outcomes.total()
    }

    pub fn estimate(&self) -> PairPointsEstimate {
        let n = self.n_games() as f64;
        let c = self.outcomes;
        PairPointsEstimate::from_rates(
            c.wins_a as f64 / n,
            c.draws as f64 / n,
            c.wins_b as f64 / n,
            self.goals_a as f64 / n,
            self.goals_b as f64 / n,
        )
    }

    /// Standard errors of the per-game points of each side (sample standard
    /// deviation over sqrt(n)).
    pub fn points_standard_errors(&self) -> (f64, f64) {
        let c = self.outcomes;
        let se = |wins: u64| {
            let sum = (3 * wins + c.draws) as f64;
            let sum_sq = (9 * wins + c.draws) as f64;
            sample_se(sum, sum_sq, self.n_games())
        };
        (se(c.wins_a), se(c.wins_b))
    }

    /// Standard errors of the mean goals of each side.
    pub fn goal_standard_errors(&self) -> (f64, f64) {
        let n = self.n_games();
        (
            sample_se(self.goals_a as f64, self.goals_a_sq as f64, n),
            sample_se(self.goals_b as f64, self.goals_b_sq as f64, n),
        )
    }
}

fn sample_se(sum: f64, sum_sq: f64, n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    (var / nf).sqrt()
}

/// Plays `cfg.n_games` games of the pair on its own stream.
pub fn simulate_pair(
    a: TeamId,
    b: TeamId,
    model: &ScoreModel,
    cfg: &SimConfig,
    pair_index: u64,
) -> Result<PairAggregate> {
    let tally = simulate_tally(model, cfg, pair_index);
    aggregate_from_tally(a, b, &tally)
}

pub fn simulate_tally(model: &ScoreModel, cfg: &SimConfig, pair_index: u64) -> PairTally {
    PairTally::from_games(pair_games(*model, cfg.master_seed, pair_index).take(cfg.n_games as usize))
}

pub(crate) fn aggregate_from_tally(a: TeamId, b: TeamId, tally: &PairTally) -> Result<PairAggregate> {
    let n = tally.n_games();
    let (avg_a, avg_b) = if n == 0 {
        (0.0, 0.0)
    } else {
        (tally.goals_a as f64 / n as f64, tally.goals_b as f64 / n as f64)
    };
    PairAggregate::with_counts(a, b, avg_a, avg_b, tally.outcomes)
}

/// Win/draw/loss rates of a pairing and the continuous points they imply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPointsEstimate {
    pub points_a: f64,
    pub points_b: f64,
    pub win_rate_a: f64,
    pub draw_rate: f64,
    pub win_rate_b: f64,
    pub mean_goals_a: f64,
    pub mean_goals_b: f64,
}

impl PairPointsEstimate {
    pub fn from_rates(win_a: f64, draw: f64, win_b: f64, mean_a: f64, mean_b: f64) -> Self {
        PairPointsEstimate {
            points_a: 3.0 * win_a + draw,
            points_b: 3.0 * win_b + draw,
            win_rate_a: win_a,
            draw_rate: draw,
            win_rate_b: win_b,
            mean_goals_a: mean_a,
            mean_goals_b: mean_b,
        }
    }

    /// `points_a + points_b - (3 - draw_rate)`; zero up to rounding.
    pub fn identity_residual(&self) -> f64 {
        self.points_a + self.points_b - (3.0 - self.draw_rate)
    }
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn std_normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Mass of the standard normal on `[lo, hi]`, computed on the side of the
/// distribution that keeps precision.
fn normal_interval(lo: f64, hi: f64) -> f64 {
    if lo >= 0.0 {
        std_normal_sf(lo) - std_normal_sf(hi)
    } else {
        std_normal_cdf(hi) - std_normal_cdf(lo)
    }
}

/// Exact pmf of the clamped, rounded Gaussian goal count.
///
/// `pmf[0]` holds all mass below 0.5; the vector ends at the first bucket
/// whose cumulative mass reaches `1 - PMF_TAIL`, which absorbs the tail.
pub fn exact_pair_distribution(mean: f64, sigma: f64) -> Result<Vec<f64>> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidValue(format!("sigma must be > 0, got {sigma}")));
    }
    if !mean.is_finite() {
        return Err(Error::InvalidValue(format!("mean must be finite, got {mean}")));
    }
    let z = |g: f64| (g - mean) / sigma;
    let mut pmf = Vec::new();
    let mut below = 0.0_f64;
    let mut k = 0u64;
    loop {
        let upper = z(k as f64 + 0.5);
        let mass = if k == 0 {
            std_normal_cdf(upper)
        } else {
            normal_interval(z(k as f64 - 0.5), upper)
        };
        if std_normal_cdf(upper) >= 1.0 - PMF_TAIL {
            pmf.push((1.0 - below).max(0.0));
            return Ok(pmf);
        }
        pmf.push(mass);
        below += mass;
        k += 1;
    }
}

/// Exact win/draw/loss probabilities and continuous points of a pairing.
pub fn exact_pair_points(model: &ScoreModel) -> Result<PairPointsEstimate> {
    let pa = exact_pair_distribution(model.mean_a, model.sigma)?;
    let pb = exact_pair_distribution(model.mean_b, model.sigma)?;
    let cum = |p: &[f64]| -> Vec<f64> {
        p.iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    };
    let (ca, cb) = (cum(&pa), cum(&pb));
    // P(X <= k) for k beyond the support is 1
    let below = |c: &[f64], k: usize| -> f64 {
        if k == 0 {
            0.0
        } else {
            c.get(k - 1).copied().unwrap_or(1.0)
        }
    };
    let draw: f64 = pa.iter().zip(&pb).map(|(x, y)| x * y).sum();
    let win_a: f64 = pa.iter().enumerate().map(|(k, p)| p * below(&cb, k)).sum();
    let win_b: f64 = pb.iter().enumerate().map(|(k, p)| p * below(&ca, k)).sum();
    let mean = |p: &[f64]| p.iter().enumerate().map(|(k, x)| k as f64 * x).sum::<f64>();
    Ok(PairPointsEstimate::from_rates(win_a, draw, win_b, mean(&pa), mean(&pb)))
}

/// Relative strength of a team against one opponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Contest {
    EqualStrength,
    Stronger,
    Weaker,
}

impl Contest {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Contest::EqualStrength => (1.0, 1.5),
            Contest::Stronger => (1.5, 3.0),
            Contest::Weaker => (0.0, 1.5),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Contest::EqualStrength => "⇔",
            Contest::Stronger => "⇒",
            Contest::Weaker => "⇐",
        }
    }
}

/// Range of a team's combined continuous points over a sequence of contests.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioBound {
    pub scenario: Vec<Contest>,
    pub lower: f64,
    pub upper: f64,
}

impl fmt::Display for ScenarioBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.scenario.iter().map(|c| c.symbol()).collect();
        write!(f, "{s} -> [{:.1}, {:.1}]", self.lower, self.upper)
    }
}

pub fn scenario_bounds(scenario: &[Contest]) -> Result<ScenarioBound> {
    if scenario.is_empty() {
        return Err(Error::EmptyScenario);
    }
    let (lower, upper) = scenario
        .iter()
        .map(|c| c.bounds())
        .fold((0.0, 0.0), |(l, u), (cl, cu)| (l + cl, u + cu));
    Ok(ScenarioBound {
        scenario: scenario.to_vec(),
        lower,
        upper,
    })
}

/// Monte Carlo and exact view of one pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct PairComparison {
    pub model: ScoreModel,
    pub tally: PairTally,
    pub monte_carlo: PairPointsEstimate,
    pub exact: PairPointsEstimate,
    pub points_se: (f64, f64),
}

impl PairComparison {
    fn run(model: ScoreModel, cfg: &SimConfig, pair_index: u64) -> Result<Self> {
        let tally = simulate_tally(&model, cfg, pair_index);
        Ok(PairComparison {
            model,
            tally,
            monte_carlo: tally.estimate(),
            exact: exact_pair_points(&model)?,
            points_se: tally.points_standard_errors(),
        })
    }

    /// Largest |MC - exact| of either side's points, in standard errors.
    pub fn points_z(&self) -> f64 {
        let z = |mc: f64, ex: f64, se: f64| {
            if se > 0.0 {
                (mc - ex).abs() / se
            } else if (mc - ex).abs() < 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        };
        z(self.monte_carlo.points_a, self.exact.points_a, self.points_se.0)
            .max(z(self.monte_carlo.points_b, self.exact.points_b, self.points_se.1))
    }
}

/// Equal pairing `(q, q)` and asymmetric pairing `(q, 0)` for one `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasRow {
    pub q: f64,
    pub equal: PairComparison,
    pub asymmetric: PairComparison,
}

/// One row per `q`, in input order. Row `i` uses streams `2i` (equal pair)
/// and `2i + 1` (asymmetric pair).
pub fn bias_table(q_values: &[f64], cfg: &SimConfig) -> Result<Vec<BiasRow>> {
    if q_values.is_empty() {
        return Err(Error::InvalidValue("at least one q value is required".into()));
    }
    if cfg.sigma.is_nan() || cfg.sigma <= 0.0 {
        return Err(Error::InvalidValue("bias analysis needs sigma > 0".into()));
    }
    q_values
        .par_iter()
        .enumerate()
        .map(|(i, &q)| {
            let equal = ScoreModel::new(q, q, cfg.sigma)?;
            let asym = ScoreModel::new(q, 0.0, cfg.sigma)?;
            Ok(BiasRow {
                q,
                equal: PairComparison::run(equal, cfg, 2 * i as u64)?,
                asymmetric: PairComparison::run(asym, cfg, 2 * i as u64 + 1)?,
            })
        })
        .collect()
}

/// Score models for every pair of a round robin.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRobinModel {
    teams: Vec<TeamId>,
    /// Canonical pair order, oriented like the team list.
    models: Vec<ScoreModel>,
}

impl RoundRobinModel {
    /// `pairs` holds `(a, b, model)` with the model oriented `a` first.
    pub fn new(teams: Vec<TeamId>, pairs: Vec<(TeamId, TeamId, ScoreModel)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, t) in teams.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::DuplicateTeam(t.clone()));
            }
        }
        let n = teams.len();
        let mut slots: Vec<Option<ScoreModel>> = vec![None; n * n.saturating_sub(1) / 2];
        for (a, b, model) in pairs {
            let i = *index.get(&a).ok_or_else(|| Error::UnknownTeam(a.clone()))?;
            let j = *index.get(&b).ok_or_else(|| Error::UnknownTeam(b.clone()))?;
            if i == j {
                return Err(Error::SelfPair(a));
            }
            let (lo, hi, model) = if i < j { (i, j, model) } else { (j, i, model.swapped()) };
            let slot = &mut slots[pair_slot(n, lo, hi)];
            if slot.is_some() {
                return Err(Error::DuplicatePair(a, b));
            }
            *slot = Some(model);
        }
        let mut models = Vec::with_capacity(slots.len());
        for (i, j) in canonical_pairs(n) {
            match slots[pair_slot(n, i, j)] {
                Some(m) => models.push(m),
                None => return Err(Error::IncompleteModel(teams[i].clone(), teams[j].clone())),
            }
        }
        Ok(RoundRobinModel { teams, models })
    }

    pub fn teams(&self) -> &[TeamId] {
        &self.teams
    }

    /// Every pair at the same means, e.g. an equal-strength field.
    pub fn uniform(teams: Vec<TeamId>, mean: f64, sigma: f64) -> Result<Self> {
        let model = ScoreModel::new(mean, mean, sigma)?;
        let pairs = canonical_pairs(teams.len())
            .map(|(i, j)| (teams[i].clone(), teams[j].clone(), model))
            .collect();
        RoundRobinModel::new(teams, pairs)
    }
}

/// Simulates every pair on its own stream (stream id = canonical pair index).
pub fn simulate_round_robin(model: &RoundRobinModel, cfg: &SimConfig) -> Result<ScoreMatrix> {
    let teams = &model.teams;
    let pairs: Vec<(usize, usize)> = canonical_pairs(teams.len()).collect();
    let aggregates = pairs
        .par_iter()
        .enumerate()
        .map(|(slot, &(i, j))| {
            simulate_pair(teams[i].clone(), teams[j].clone(), &model.models[slot], cfg, slot as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    ScoreMatrix::new(teams.clone(), aggregates)
}
