//! Rendering a parsed theory and parsing it again gives the same theory.

#![no_main]

use libfuzzer_sys::fuzz_target;
use atc_core::syntax::parse_theory;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_theory(text) {
        let rendered = t.render();
        let again = parse_theory(&rendered).expect("rendered theory parses");
        assert_eq!(again, t);
        assert_eq!(again.render(), rendered);
    }
});
