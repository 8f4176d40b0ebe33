mod common;

use std::fs;

use atc_core::entailment::theory_equivalent;
use atc_core::kripke::{canonical_frame, model_from_json, model_to_dot, model_to_json, ModelJsonError};
use atc_core::syntax::{
    parse_formula, parse_law, parse_query, parse_theory, parse_theory_with_warnings, theory_from_json,
    theory_to_json, ParseErrorKind, QueryError, Warning,
};
use atc_core::theory_change::{candidates_to_json, contract, ContractOptions};
use common::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn corpus_files() -> Vec<std::path::PathBuf> {
    let dir = corpus_path("coffee").parent().unwrap().to_path_buf();
    let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

#[test]
fn corpus_render_is_a_fixpoint() {
    for path in corpus_files() {
        let text = fs::read_to_string(&path).unwrap();
        let t = parse_theory(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let once = t.render();
        let again = parse_theory(&once).unwrap();
        assert_eq!(again, t, "{}", path.display());
        assert_eq!(again.render(), once);
    }
}

#[test]
fn theory_json_round_trips() {
    for path in corpus_files() {
        let t = parse_theory(&fs::read_to_string(&path).unwrap()).unwrap();
        let v = theory_to_json(&t);
        let back = theory_from_json(&v.to_string()).unwrap();
        assert_eq!(back, t, "{}", path.display());
    }
    let mut rng = StdRng::seed_from_u64(21);
    let s = sig(3, 2);
    for _ in 0..200 {
        let t = random_theory(&mut rng, &s, 8);
        let back = theory_from_json(&theory_to_json(&t).to_string()).unwrap();
        assert!(theory_equivalent(&back, &t));
        assert_eq!(back.render(), t.render());
    }
}

#[test]
fn model_json_round_trips() {
    let mut rng = StdRng::seed_from_u64(22);
    let s = sig(3, 2);
    for _ in 0..200 {
        let m = random_model(&mut rng, 3, 2, 8, 0.2);
        let text = model_to_json(&m, &s).to_string();
        assert_eq!(model_from_json(&text, &s).unwrap(), m);
    }
}

#[test]
fn model_json_rejects_malformed_worlds() {
    let s = sig(2, 1);
    let cases = [
        (r#"{"worlds":[["p1"]]}"#, "unassigned"),
        (r#"{"worlds":[["p1","~p1","p2"]]}"#, "twice"),
        (r#"{"worlds":[["p1","q"]]}"#, "unknown atom"),
        (r#"{"worlds":[["p1","p2"],["p2","p1"]]}"#, "same valuation"),
        (r#"{"worlds":[["p1","p2"]],"relations":{"a":[[0,1]]}}"#, "out of range"),
        (r#"{"worlds":[["p1","p2"]],"relations":{"z":[]}}"#, "unknown action"),
        (r#"{"worlds":"#, "invalid JSON"),
    ];
    for (text, needle) in cases {
        let err = model_from_json(text, &s).unwrap_err();
        assert!(err.to_string().contains(needle), "{text}: {err}");
    }
    assert!(matches!(model_from_json("[]", &s), Err(ModelJsonError::Syntax(_))));
}

#[test]
fn coffee_canonical_model_exports() {
    let t = corpus("coffee");
    let m = canonical_frame(&t);
    let v = model_to_json(&m, t.sig());
    assert_eq!(v["worlds"].as_array().unwrap().len(), 6);
    assert_eq!(v["relations"]["buy"].as_array().unwrap().len(), 3);
    let dot = model_to_dot(&m, t.sig());
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("label=\"buy\"").count(), 3);
}

#[test]
fn candidates_serialize_with_provenance() {
    let t = corpus("coffee");
    let l = law(&t, "effect token => [buy] hot");
    let cands = contract(&t, &l, &ContractOptions::default()).unwrap();
    let v = candidates_to_json(&cands);
    let list = v["candidates"].as_array().unwrap();
    assert_eq!(list.len(), 3);
    for c in list {
        assert!(c["provenance"]["context"].is_string());
        assert!(c["provenance"]["piPrime"].is_string());
        assert_eq!(c["provenance"]["kernels"].as_array().unwrap().len(), 2);
        theory_from_json(&c["theory"].to_string()).unwrap();
    }
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_theory("theory t\natoms p\nactions a\neffect q => [a] p\n").unwrap_err();
    assert_eq!((err.line, err.column), (4, 8));
    assert!(matches!(err.kind, ParseErrorKind::UndeclaredAtom(ref n) if n == "q"));

    let err = parse_theory("theory t\natoms p\nactions a\nexec p => <b>\n").unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::UndeclaredAction(ref n) if n == "b"));

    let err = parse_theory("theory t\natoms p\nactions a\nstatic p &\n").unwrap_err();
    assert_eq!(err.line, 4);
    assert!(matches!(err.kind, ParseErrorKind::Unexpected { .. }));

    assert!(parse_theory("theory t\natoms\nactions a\n").is_err());
    assert!(parse_theory("theory t\natoms p, p\nactions a\n").is_err());
}

#[test]
fn formulas_parse_with_usual_precedence() {
    let t = corpus("coffee");
    let s = t.sig();
    let n = s.atom_count();
    let pairs = [
        ("token & coffee | hot", "(token & coffee) | hot"),
        ("~token -> coffee -> hot", "~token -> (coffee -> hot)"),
        ("token <-> ~~token", "true"),
        ("token | ~token", "true"),
        ("false -> hot", "true"),
    ];
    for (a, b) in pairs {
        let (fa, fb) = (parse_formula(s, a).unwrap(), parse_formula(s, b).unwrap());
        assert!(atc_core::formula::classical::equivalent(&fa, &fb, n), "{a} vs {b}");
    }
}

#[test]
fn laws_render_and_reparse() {
    let t = corpus("coffee");
    for l in t.laws() {
        let text = l.display(t.sig()).to_string();
        assert_eq!(parse_law(t.sig(), &text).unwrap(), l, "{text}");
    }
}

#[test]
fn queries_accept_law_shapes_only() {
    let t = corpus("coffee");
    let q = parse_query(t.sig(), "token -> [buy] hot").unwrap();
    assert_eq!(q.laws().len(), 1);
    assert!(parse_query(t.sig(), "coffee -> hot").is_ok());
    assert!(parse_query(t.sig(), "token -> <buy> true").is_ok());
    assert!(matches!(parse_query(t.sig(), "[buy][buy] hot"), Err(QueryError::Unsupported(_))));
    assert!(matches!(parse_query(t.sig(), "token &"), Err(QueryError::Parse(_))));
}

#[test]
fn executability_without_effects_warns() {
    let (_, warnings) = parse_theory_with_warnings("theory t\natoms p\nactions a, b\nexec p => <b>\n").unwrap();
    assert_eq!(warnings, vec![Warning::ExecWithoutEffects { action: "b".into() }]);
    let (_, warnings) = parse_theory_with_warnings(&fs::read_to_string(corpus_path("coffee")).unwrap()).unwrap();
    assert!(warnings.is_empty());
}

// Same invariants the fuzz targets assert, run over their checked-in seeds.
#[test]
fn fuzz_seeds_hold_invariants() {
    let seeds = |target: &str| -> Vec<String> {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
        let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files.iter().map(|p| fs::read_to_string(p).unwrap()).collect()
    };
    let sig = atc_core::Signature::new(["token", "coffee", "hot"], ["buy"]).unwrap();

    for text in seeds("roundtrip") {
        let t = parse_theory(&text).unwrap();
        let again = parse_theory(&t.render()).unwrap();
        assert_eq!(again, t);
        assert_eq!(again.render(), t.render());
    }
    let mut formulas = 0;
    for text in seeds("parse_formula") {
        if let Ok(f) = parse_formula(&sig, &text) {
            let again = parse_formula(&sig, &f.display(&sig).to_string()).unwrap();
            assert!(atc_core::formula::classical::equivalent(&f, &again, 3));
            formulas += 1;
        }
    }
    assert!(formulas >= 4);
    let laws = seeds("parse_law");
    let accepted = laws.iter().filter(|s| parse_law(&sig, s).is_ok() || parse_query(&sig, s).is_ok()).count();
    // nested modalities are a deliberate negative seed
    assert_eq!(accepted, laws.len() - 1);
    for text in seeds("theory_json") {
        let t = theory_from_json(&text).unwrap();
        assert_eq!(theory_from_json(&theory_to_json(&t).to_string()).unwrap(), t);
    }
    for text in seeds("model_json") {
        let m = model_from_json(&text, &sig).unwrap();
        assert_eq!(model_from_json(&model_to_json(&m, &sig).to_string(), &sig).unwrap(), m);
    }
}
