#![no_main]

use libfuzzer_sys::fuzz_target;
use maxrank::{evaluate, Decomposition};

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = serde_json::from_slice::<Decomposition>(data) {
        // Accepted input is internally consistent, so evaluation succeeds.
        evaluate(&d).expect("validated decomposition evaluates");
        let text = serde_json::to_string(&d).expect("serializes");
        let back: Decomposition = serde_json::from_str(&text).expect("re-parses");
        assert_eq!(back, d);
    }
});
