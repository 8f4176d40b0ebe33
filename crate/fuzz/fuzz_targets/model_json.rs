#![no_main]

use libfuzzer_sys::fuzz_target;
use atc_core::kripke::{model_from_json, model_to_json};
use atc_core::Signature;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let sig = Signature::new(["token", "coffee", "hot"], ["buy"]).unwrap();
    if let Ok(m) = model_from_json(text, &sig) {
        let back = model_from_json(&model_to_json(&m, &sig).to_string(), &sig).expect("emitted JSON is accepted");
        assert_eq!(back, m);
    }
});
