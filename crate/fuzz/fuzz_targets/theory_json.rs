#![no_main]

use libfuzzer_sys::fuzz_target;
use atc_core::syntax::{theory_from_json, theory_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = theory_from_json(text) {
        let back = theory_from_json(&theory_to_json(&t).to_string()).expect("emitted JSON is accepted");
        assert_eq!(back, t);
    }
});
