#![no_main]

use libfuzzer_sys::fuzz_target;
use atc_core::syntax::{parse_law, parse_query};
use atc_core::Signature;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let sig = Signature::new(["token", "coffee", "hot"], ["buy"]).unwrap();
    let _ = parse_law(&sig, text);
    let _ = parse_query(&sig, text);
});
