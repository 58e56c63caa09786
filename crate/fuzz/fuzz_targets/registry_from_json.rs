#![no_main]

use league_eval::challenge::ParamRegistry;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(reg) = ParamRegistry::from_json(text) {
        for spec in reg.entries() {
            assert!(reg.get(&spec.name).is_some());
        }
    }
});
