#![no_main]

use libfuzzer_sys::fuzz_target;
use logbm_core::io::BodiesFile;

fuzz_target!(|data: &[u8]| {
    let _ = BodiesFile::parse_bytes(data);
});
