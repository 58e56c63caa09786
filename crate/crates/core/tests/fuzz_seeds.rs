//! Replays the fuzz corpus seeds through the fuzz-target invariants, and
//! throws arbitrary text at every parser.

use std::path::PathBuf;

use league_eval::challenge::{emit_change_command, parse_change_command, ParamRegistry};
use league_eval::ingest::{
    dump_matrix, dump_ranking, load_matrix, load_model, load_ranking, parse_results, render_results,
};
use league_eval::simlab::{simulate_round_robin, SimConfig};
use proptest::prelude::*;

fn check_results(text: &str) {
    if let Ok(records) = parse_results(text) {
        assert_eq!(parse_results(&render_results(&records)).unwrap(), records);
    }
}

fn check_matrix(text: &str) {
    if let Ok(m) = load_matrix(text) {
        assert_eq!(load_matrix(&dump_matrix(&m)).unwrap(), m);
    }
}

fn check_ranking(text: &str) {
    if let Ok(r) = load_ranking(text) {
        assert_eq!(load_ranking(&dump_ranking(&r)).unwrap(), r);
    }
}

fn check_model(text: &str) {
    if let Ok(model) = load_model(text, None) {
        let m = simulate_round_robin(&model, &SimConfig::new(3, 0, 1.0).unwrap()).unwrap();
        assert_eq!(m.teams(), model.teams());
    }
}

fn check_command(text: &str) {
    if let Ok(o) = parse_change_command(text) {
        assert_eq!(parse_change_command(&emit_change_command(&o).unwrap()).unwrap(), o);
    }
}

fn check_registry(text: &str) {
    if let Ok(reg) = ParamRegistry::from_json(text) {
        for spec in reg.entries() {
            assert!(reg.get(&spec.name).is_some());
        }
    }
}

type Target = (&'static str, fn(&str));

const TARGETS: [Target; 6] = [
    ("parse_results", check_results),
    ("load_matrix", check_matrix),
    ("load_ranking", check_ranking),
    ("load_model", check_model),
    ("parse_change_command", check_command),
    ("registry_from_json", check_registry),
];

#[test]
fn corpus_seeds_hold_invariants() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    for (target, check) in TARGETS {
        let dir = root.join(target);
        let mut seeds = 0;
        for entry in std::fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())) {
            let path = entry.unwrap().path();
            let bytes = std::fs::read(&path).unwrap();
            if let Ok(text) = std::str::from_utf8(&bytes) {
                check(text);
            }
            seeds += 1;
        }
        assert!(seeds > 0, "no seeds for {target}");
    }
}

#[test]
fn corpus_has_accepted_inputs() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let read = |t: &str, s: &str| std::fs::read_to_string(root.join(t).join(s)).unwrap();
    assert!(parse_results(&read("parse_results", "seed_basic")).is_ok());
    assert!(parse_results(&read("parse_results", "seed_whitespace_crlf")).is_ok());
    assert!(load_matrix(&read("load_matrix", "seed_counts_known")).is_ok());
    assert!(load_matrix(&read("load_matrix", "seed_averages_only")).is_ok());
    assert!(load_matrix(&read("load_matrix", "seed_flag_conflict")).is_err());
    assert!(load_model(&read("load_model", "seed_huge_mean"), None).is_ok());
    assert!(parse_change_command(&read("parse_change_command", "seed_spacing")).is_ok());
    assert!(ParamRegistry::from_json(&read("registry_from_json", "seed_bad_range")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parsers_never_panic(text in "\\PC{0,200}") {
        for (_, check) in TARGETS {
            check(&text);
        }
    }

    #[test]
    fn near_miss_commands_never_panic(body in "[a-z_ ()0-9.eE+-]{0,60}") {
        check_command(&format!("(change_player_param {body}"));
    }

    #[test]
    fn near_miss_logs_never_panic(rows in prop::collection::vec("[A-C]{0,2},[A-C ]{0,2},[0-9 -]{0,3},[0-9x]{0,2}", 0..8)) {
        check_results(&rows.join("\n"));
    }
}
