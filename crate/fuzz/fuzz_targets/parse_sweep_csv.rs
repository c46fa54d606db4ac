#![no_main]

use harmonic::report::{parse_csv, HEADER};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if s.len() > 4096 {
        return;
    }
    if let Ok(records) = parse_csv(s) {
        assert!(s.starts_with(HEADER));
        assert!(records.len() < s.lines().count().max(1));
        for rec in &records {
            let _ = rec.is_consistent();
        }
    }
});
