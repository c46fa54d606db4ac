#![no_main]

use harmonic::numerics::{format_rational, parse_decimal, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if s.len() > 512 {
        return;
    }
    if let Ok(q) = parse_decimal(s) {
        assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }
});
