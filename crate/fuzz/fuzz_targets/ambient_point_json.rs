#![no_main]

use libfuzzer_sys::fuzz_target;
use maxrank::AmbientPoint;

fuzz_target!(|data: &[u8]| {
    if let Ok(p) = serde_json::from_slice::<AmbientPoint>(data) {
        assert_eq!(p.coeffs().len(), p.spec().ambient_affine_dim());
        let text = serde_json::to_string(&p).expect("serializes");
        let back: AmbientPoint = serde_json::from_str(&text).expect("re-parses");
        assert_eq!(back, p);
    }
});
