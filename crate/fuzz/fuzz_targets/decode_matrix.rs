#![no_main]

use libfuzzer_sys::fuzz_target;
use phasefit::signals::{decode_matrix, encode_matrix};

fuzz_target!(|data: &[u8]| {
    if let Ok(a) = decode_matrix(data) {
        assert_eq!(encode_matrix(&a), data);
    }
});
