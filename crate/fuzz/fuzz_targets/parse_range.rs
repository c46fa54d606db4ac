#![no_main]

use harmonic::cli::parse_range;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(range) = parse_range(s) {
        assert!(range.start() <= range.end());
        let canonical = format!("{}..={}", range.start(), range.end());
        assert_eq!(parse_range(&canonical).unwrap(), range);
    }
});
