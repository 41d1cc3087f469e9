#![no_main]

use libfuzzer_sys::fuzz_target;
use maxrank::binary::parse_binary_form;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_binary_form(s) {
        if f.is_zero() {
            return;
        }
        // Display output must parse back to the same form.
        let back = parse_binary_form(&f.to_string()).expect("display re-parses");
        assert_eq!(back, f);
    }
});
