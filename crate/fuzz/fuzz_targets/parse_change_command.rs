#![no_main]

use league_eval::challenge::{emit_change_command, parse_change_command};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(overrides) = parse_change_command(text) {
        let emitted = emit_change_command(&overrides).expect("parsed command emits");
        assert_eq!(parse_change_command(&emitted).expect("emitted command parses"), overrides);
    }
});
