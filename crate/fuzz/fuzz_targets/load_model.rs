#![no_main]

use league_eval::ingest::load_model;
use league_eval::simlab::{simulate_round_robin, SimConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = load_model(text, None) {
        // any accepted model must simulate, whatever its means
        let cfg = SimConfig::new(3, 0, 1.0).expect("valid config");
        let matrix = simulate_round_robin(&model, &cfg).expect("loaded model simulates");
        assert_eq!(matrix.teams(), model.teams());
    }
});
