#![no_main]

use league_eval::ingest::{parse_results, render_results};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = parse_results(text) {
        let again = parse_results(&render_results(&records)).expect("rendered log parses");
        assert_eq!(again, records);
    }
});
