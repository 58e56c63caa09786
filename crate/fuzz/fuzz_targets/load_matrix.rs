#![no_main]

use league_eval::ingest::{dump_matrix, load_matrix};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(matrix) = load_matrix(text) {
        let dumped = dump_matrix(&matrix);
        assert_eq!(load_matrix(&dumped).expect("dumped matrix loads"), matrix);
    }
});
