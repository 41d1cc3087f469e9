#![no_main]

use libfuzzer_sys::fuzz_target;
use maxrank::binary::parse_rational;
use maxrank_cli::parse_usize_set;

// Flag values parsed outside clap: integer ranges and rational coefficients.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(set) = parse_usize_set(s) {
        assert!(!set.0.is_empty());
    }
    if let Ok(q) = parse_rational(s) {
        assert_eq!(parse_rational(&q.to_string()).expect("re-parses"), q);
    }
});
