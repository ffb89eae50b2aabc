#![no_main]

use libfuzzer_sys::fuzz_target;
use phasefit::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = RunConfig::parse(text) {
            let _ = cfg.to_plan();
        }
    }
});
