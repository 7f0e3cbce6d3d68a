#![no_main]

use libfuzzer_sys::fuzz_target;
use logbm_core::io::parse_measure;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_measure(text);
    }
});
