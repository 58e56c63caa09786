//! Markdown rendering of points tables, the self-auditing results report and
//! the bias analysis report.

use std::fmt::Write as _;

use crate::error::Result;
use crate::fixtures::{
    FixtureSet, ResultsTable, PUBLISHED_ASYMMETRIC_PAIRS, PUBLISHED_D1_ACTUAL_VS_DISCRETE,
    PUBLISHED_D1_LEAGUE_VS_CHRONOLOGICAL, PUBLISHED_EQUAL_PAIRS,
};
use crate::metrics::{chronological_concordance, l1_distance};
use crate::model::{Ranking, ScoreMatrix};
use crate::schemes::{points_table, rank, PointsTable, SchemeKind};
use crate::simlab::{scenario_bounds, BiasRow, Contest, SimConfig};

/// Published values within this distance of the exact oracle are considered
/// consistent with it.
pub const PUBLISHED_TOLERANCE: f64 = 0.03;

fn fmt_points(scheme: SchemeKind, p: f64) -> String {
    match scheme {
        SchemeKind::Discrete => format!("{p:.0}"),
        SchemeKind::Continuous => format!("{p:.4}"),
    }
}

pub fn render_points_markdown(table: &PointsTable, ranking: &Ranking) -> String {
    let mut out = String::from("| Team | Points | Goals (rounded) | Goals (raw) | Rank |\n|---|---:|---:|---:|---:|\n");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {}:{} | {:.3}:{:.3} | {} |",
            row.team,
            fmt_points(table.scheme, row.points),
            row.goals_for_rounded,
            row.goals_against_rounded,
            row.goals_for_raw,
            row.goals_against_raw,
            ranking.rank_of(&row.team).expect("ranked team"),
        );
    }
    out
}

pub fn render_points_csv(table: &PointsTable, ranking: &Ranking) -> String {
    let mut out = String::from("team,points,goals_for_rounded,goals_against_rounded,goals_for_raw,goals_against_raw,rank\n");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.team,
            row.points,
            row.goals_for_rounded,
            row.goals_against_rounded,
            row.goals_for_raw,
            row.goals_against_raw,
            ranking.rank_of(&row.team).expect("ranked team"),
        );
    }
    out
}

/// Rendered report plus every cell that disagrees with the published values.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportOutcome {
    pub markdown: String,
    pub mismatches: Vec<String>,
}

struct Audit {
    mismatches: Vec<String>,
}

impl Audit {
    fn check<T: PartialEq + std::fmt::Display>(&mut self, cell: String, computed: T, published: T) {
        if computed != published {
            self.mismatches
                .push(format!("{cell}: computed {computed}, published {published}"));
        }
    }
}

fn render_grid(out: &mut String, matrix: &ScoreMatrix, table: &PointsTable, ranking: &Ranking, rank_label: &str) {
    let teams = matrix.teams();
    let _ = write!(out, "| |");
    for t in teams {
        let _ = write!(out, " {t} |");
    }
    let _ = writeln!(out, " Goals | Points | {rank_label} |");
    let _ = writeln!(out, "|---|{}---:|---:|---:|", "---|".repeat(teams.len()));
    for (row, team) in table.rows.iter().zip(teams) {
        let _ = write!(out, "| {team} |");
        for opp in teams {
            match matrix.pair(team, opp) {
                Some(p) => {
                    let _ = write!(out, " {:.1} : {:.1} |", p.avg_goals_a, p.avg_goals_b);
                }
                None => out.push_str(" - |"),
            }
        }
        let _ = writeln!(
            out,
            " {} : {} | {} | {} |",
            row.goals_for_rounded,
            row.goals_against_rounded,
            fmt_points(table.scheme, row.points),
            ranking.rank_of(team).expect("ranked team")
        );
    }
}

fn audit_table(audit: &mut Audit, label: &str, table: &PointsTable, ranking: &Ranking, published: &ResultsTable) {
    for (i, row) in table.rows.iter().enumerate() {
        let team = &row.team;
        if let Some(&pts) = published.published.points.get(i) {
            audit.check(format!("{label} {team} points"), row.points, pts as f64);
        }
        if let Some(&(gf, ga)) = published.published.goals.get(i) {
            audit.check(
                format!("{label} {team} goals"),
                format!("{}:{}", row.goals_for_rounded, row.goals_against_rounded),
                format!("{gf}:{ga}"),
            );
        }
        if let Some(&r) = published.published.ranks.get(i) {
            audit.check(format!("{label} {team} rank"), ranking.rank_of(team).unwrap_or(0), r);
        }
    }
    audit.check(
        format!("{label} team count"),
        table.rows.len(),
        published.published.points.len(),
    );
}

fn discrete(matrix: &ScoreMatrix) -> Result<(PointsTable, Ranking)> {
    let table = points_table(matrix, SchemeKind::Discrete)?;
    let ranking = rank(&table)?;
    Ok((table, ranking))
}

/// Recomputes the four results tables from the fixtures and audits every
/// goals, points and rank cell against the published columns.
pub fn build_report(set: &FixtureSet) -> Result<ReportOutcome> {
    let mut out = String::new();
    let mut audit = Audit { mismatches: Vec::new() };

    // Table 1
    let (t1, r1) = discrete(&set.table1.matrix)?;
    out.push_str("# Round-robin results\n\n## Table 1: top 8 teams of 2016, discrete scheme (r^d)\n\n");
    render_grid(&mut out, &set.table1.matrix, &t1, &r1, "r^d");
    audit_table(&mut audit, "table1", &t1, &r1, &set.table1);
    let d_actual = l1_distance(&set.rank_actual_2016, &r1)?;
    let _ = writeln!(out, "\nL1 distance between the competition ranking r^a and r^d: {d_actual}\n");
    audit.check("table1 d1(r^a, r^d)".into(), d_actual, PUBLISHED_D1_ACTUAL_VS_DISCRETE);

    // Table 2
    out.push_str("## Table 2: evaluation round against WE2015\n\n");
    let eval = &set.table2;
    let _ = write!(out, "| |");
    for (opp, _, _) in &eval.averages.entries {
        let _ = write!(out, " {opp} |");
    }
    let _ = writeln!(out, "\n|---|{}", "---|".repeat(eval.averages.entries.len()));
    for (label, row, precision) in [("single game", &eval.single_games, 0), ("average", &eval.averages, 1)] {
        let _ = write!(out, "| {} ({label}) |", row.team);
        for (_, g, o) in &row.entries {
            let _ = write!(out, " {g:.precision$} : {o:.precision$} |");
        }
        out.push('\n');
    }
    out.push('\n');

    // Table 3
    let merged = set.merged_evaluation()?;
    let (t3, r3) = discrete(&merged)?;
    out.push_str("## Table 3: Table 1 merged with the WE2015 averages, discrete scheme (r^e)\n\n");
    render_grid(&mut out, &merged, &t3, &r3, "r^e");
    audit_table(&mut audit, "table3", &t3, &r3, &set.table3);
    for (m, f) in merged.pairs().iter().zip(set.table3.matrix.pairs()) {
        audit.check(
            format!("table3 cell {}-{}", m.a, m.b),
            format!("{}:{}", m.avg_goals_a, m.avg_goals_b),
            format!("{}:{}", f.avg_goals_a, f.avg_goals_b),
        );
    }
    out.push('\n');

    // Table 4
    let (t4, r4) = discrete(&set.table4.matrix)?;
    out.push_str("## Table 4: champions league, discrete scheme (r^l)\n\n");
    render_grid(&mut out, &set.table4.matrix, &t4, &r4, "r^l");
    audit_table(&mut audit, "table4", &t4, &r4, &set.table4);
    let d_chrono = chronological_concordance(&r4, set.rank_chronological.order())?;
    let _ = writeln!(out, "\nL1 distance between r^l and the chronological order r^t: {d_chrono}");
    audit.check("table4 d1(r^l, r^t)".into(), d_chrono, PUBLISHED_D1_LEAGUE_VS_CHRONOLOGICAL);

    out.push_str("\n## Audit\n\n");
    if audit.mismatches.is_empty() {
        out.push_str("All goals, points, rank and distance cells match the published values.\n");
    } else {
        for m in &audit.mismatches {
            let _ = writeln!(out, "- MISMATCH {m}");
        }
    }
    Ok(ReportOutcome {
        markdown: out,
        mismatches: audit.mismatches,
    })
}

/// Scenario sequences shown in the bias report.
pub fn report_scenarios() -> Vec<Vec<Contest>> {
    use Contest::*;
    vec![
        vec![EqualStrength],
        vec![Stronger],
        vec![Weaker],
        vec![EqualStrength, EqualStrength],
        vec![Stronger, Weaker],
    ]
}

fn published_equal(q: f64) -> Option<(f64, f64, f64)> {
    PUBLISHED_EQUAL_PAIRS
        .iter()
        .find(|p| p.0 == q)
        .map(|&(_, pts, ma, mb)| (pts, ma, mb))
}

fn published_asym(q: f64) -> Option<(f64, f64)> {
    PUBLISHED_ASYMMETRIC_PAIRS
        .iter()
        .find(|p| p.0 == q)
        .map(|&(_, win, loss, _, _)| (win, loss))
}

fn opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.prec$}"))
}

pub fn render_bias_report(rows: &[BiasRow], cfg: &SimConfig) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "# Continuous-scheme bias analysis\n");
    let _ = writeln!(
        out,
        "Gaussian goals (rounded half away from zero, clamped at 0), sigma = {}, n = {} games per pair, seed = {}.\n",
        cfg.sigma, cfg.n_games, cfg.master_seed
    );

    out.push_str("## Equal-strength pairs (q : q)\n\n");
    out.push_str("| q | p_eq MC | p_eq exact | SE | max abs z | mean goals MC | mean goals exact | draw rate MC | draw rate exact | published p_eq | published means |\n");
    out.push_str("|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n");
    for row in rows {
        let e = &row.equal;
        let published = published_equal(row.q);
        let _ = writeln!(
            out,
            "| {} | {:.4} | {:.4} | {:.4} | {:.2} | {:.3} : {:.3} | {:.3} : {:.3} | {:.4} | {:.4} | {} | {} |",
            row.q,
            e.monte_carlo.points_a,
            e.exact.points_a,
            e.points_se.0,
            e.points_z(),
            e.monte_carlo.mean_goals_a,
            e.monte_carlo.mean_goals_b,
            e.exact.mean_goals_a,
            e.exact.mean_goals_b,
            e.monte_carlo.draw_rate,
            e.exact.draw_rate,
            opt(published.map(|p| p.0), 2),
            published.map_or_else(|| "-".into(), |p| format!("{:.2} : {:.2}", p.1, p.2)),
        );
    }

    out.push_str("\n## Stronger vs weaker pairs (q : 0)\n\n");
    out.push_str("| q | p_win MC | p_win exact | p_loss MC | p_loss exact | draw rate MC | draw rate exact | identity residual MC | identity residual exact | published p_win | published p_loss |\n");
    out.push_str("|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n");
    for row in rows {
        let a = &row.asymmetric;
        let published = published_asym(row.q);
        let _ = writeln!(
            out,
            "| {} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} | {:.1e} | {:.1e} | {} | {} |",
            row.q,
            a.monte_carlo.points_a,
            a.exact.points_a,
            a.monte_carlo.points_b,
            a.exact.points_b,
            a.monte_carlo.draw_rate,
            a.exact.draw_rate,
            a.monte_carlo.identity_residual(),
            a.exact.identity_residual(),
            opt(published.map(|p| p.0), 2),
            opt(published.map(|p| p.1), 2),
        );
    }

    out.push_str("\n## Scenario bounds (combined continuous points)\n\n| scenario | lower | upper |\n|---|---:|---:|\n");
    for s in report_scenarios() {
        let b = scenario_bounds(&s)?;
        let sym: String = s.iter().map(|c| c.symbol()).collect();
        let _ = writeln!(out, "| {sym} | {:.1} | {:.1} |", b.lower, b.upper);
    }

    out.push_str("\n## Notes\n\n");
    let monotone = rows.windows(2).all(|w| {
        w[0].q > w[1].q || w[0].equal.exact.points_a <= w[1].equal.exact.points_a + 1e-12
    });
    let _ = writeln!(
        out,
        "- Exact equal-pair points are {} in q over the listed values.",
        if monotone { "non-decreasing" } else { "NOT monotone" }
    );
    for row in rows {
        if let Some((pts, _, _)) = published_equal(row.q) {
            let diff = pts - row.equal.exact.points_a;
            let verdict = if diff.abs() <= PUBLISHED_TOLERANCE { "consistent" } else { "DIVERGES" };
            let _ = writeln!(
                out,
                "- q = {}: published p_eq {pts:.2} vs exact {:.4} (difference {diff:+.4}): {verdict}.",
                row.q, row.equal.exact.points_a
            );
        }
        if let Some((win, loss)) = published_asym(row.q) {
            let a = &row.asymmetric;
            let implied_draw = 3.0 - (win + loss);
            let _ = writeln!(
                out,
                "- q = {}: published p_win {win:.2} vs exact {:.4} (difference {:+.4}); published p_loss {loss:.2} vs exact {:.4} (difference {:+.4}).",
                row.q,
                a.exact.points_a,
                win - a.exact.points_a,
                a.exact.points_b,
                loss - a.exact.points_b,
            );
            if implied_draw < 0.0 || implied_draw > loss + 1e-12 || implied_draw > win + 1e-12 {
                let _ = writeln!(
                    out,
                    "  - The published pair violates points_a + points_b = 3 - draw_rate: the sum {:.2} implies a draw rate of {implied_draw:.2}, but the loser's points (3·losses + draws) cannot be below the draw rate ({loss:.2} < {implied_draw:.2}). No pairing model reproduces both values; the exact oracle is used instead.",
                    win + loss
                );
            }
            if (loss - a.exact.draw_rate).abs() <= 0.01 {
                let _ = writeln!(
                    out,
                    "  - The published p_loss {loss:.2} matches the exact draw rate {:.4} of this pairing, not the loser's points.",
                    a.exact.draw_rate
                );
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_report_is_clean_and_stable() {
        let set = FixtureSet::embedded();
        let a = build_report(&set).unwrap();
        assert!(a.mismatches.is_empty(), "{:?}", a.mismatches);
        assert_eq!(a, build_report(&set).unwrap());
        assert!(a.markdown.contains("| Gliders | - | 0.3 : 0.4 |"));
    }

    #[test]
    fn corrupted_published_column_is_reported() {
        let mut set = FixtureSet::embedded();
        set.table4.published.points[1] = 9;
        let out = build_report(&set).unwrap();
        assert_eq!(out.mismatches.len(), 1);
        assert!(out.mismatches[0].contains("table4 WE2015 points"));
    }
}
