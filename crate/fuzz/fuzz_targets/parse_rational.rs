#![no_main]

use harmonic::numerics::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(q) = parse_rational(s) {
        assert!(q.denom() > &0.into());
        let printed = format_rational(&q);
        assert_eq!(parse_rational(&printed).unwrap(), q);
    }
});
