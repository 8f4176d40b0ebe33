#![no_main]

use libfuzzer_sys::fuzz_target;
use atc_core::syntax::{parse_formula, parse_modal};
use atc_core::Signature;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let sig = Signature::new(["token", "coffee", "hot"], ["buy"]).unwrap();
    if let Ok(f) = parse_formula(&sig, text) {
        // printing and re-reading must not change the meaning
        let again = parse_formula(&sig, &f.display(&sig).to_string()).expect("printed formula parses");
        assert!(atc_core::formula::classical::equivalent(&f, &again, 3));
    }
    let _ = parse_modal(&sig, text);
});
