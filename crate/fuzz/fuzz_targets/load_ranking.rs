#![no_main]

use league_eval::ingest::{dump_ranking, load_ranking};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ranking) = load_ranking(text) {
        assert_eq!(load_ranking(&dump_ranking(&ranking)).expect("dumped ranking loads"), ranking);
    }
});
