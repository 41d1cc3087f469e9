#![no_main]

use libfuzzer_sys::fuzz_target;
use maxrank::binary::BinaryForm;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = serde_json::from_slice::<BinaryForm>(data) {
        let text = serde_json::to_string(&f).expect("serializes");
        let back: BinaryForm = serde_json::from_str(&text).expect("re-parses");
        assert_eq!(back, f);
    }
});
