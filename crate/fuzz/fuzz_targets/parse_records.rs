#![no_main]

use libfuzzer_sys::fuzz_target;
use phasefit::harness::{parse_records, records_to_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = parse_records(data) {
        // whatever parses must survive a write/read cycle
        if let Ok(text) = records_to_csv(&records) {
            let again = parse_records(text.as_bytes()).expect("reparse");
            assert_eq!(again.len(), records.len());
        }
    }
});
