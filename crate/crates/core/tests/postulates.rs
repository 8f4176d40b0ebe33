mod common;

use atc_core::entailment::{is_consistent, is_modular};
use atc_core::kripke::canonical_frame;
use atc_core::postulates::{check_disjunctive, check_equivalences, check_postulates, Postulate, Verdict};
use common::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn coffee_contractions_satisfy_every_postulate() {
    let t = corpus("coffee");
    for text in ["exec token => <buy>", "effect token => [buy] hot", "static coffee -> hot", "exec coffee => <buy>"] {
        let r = check_postulates(&t, &law(&t, text)).unwrap();
        assert!(!r.any_failed(), "{text}: {:?}", r.results);
    }
}

#[test]
fn unconditional_postulates_hold_on_random_modular_theories() {
    let mut rng = StdRng::seed_from_u64(31);
    let s = sig(3, 2);
    let mut checked = 0;
    while checked < 150 {
        let t = random_theory(&mut rng, &s, 7);
        if !is_consistent(&t) || !is_modular(&t).modular {
            continue;
        }
        let l = random_law(&mut rng, &s);
        let Ok(r) = check_postulates(&t, &l) else { continue };
        for p in [Postulate::Monotonicity, Postulate::Preservation, Postulate::Recovery, Postulate::ModularityPreservation] {
            assert_ne!(r.verdict(p), Some(Verdict::Fails), "{p:?} for {} on\n{}", l.display(&s), t.render());
        }
        checked += 1;
    }
}

#[test]
fn equivalent_inputs_give_equivalent_candidates() {
    let t1 = corpus("coffee");
    // same theory with a redundant, differently written static law
    let mut t2 = t1.clone();
    t2.add(law(&t1, "static ~coffee | hot | false")).unwrap();
    let phi1 = law(&t1, "effect token => [buy] hot");
    let phi2 = law(&t1, "effect token & token => [buy] hot | false");
    let r = check_equivalences(&t1, &t2, &phi1, &phi2).unwrap();
    assert_eq!(r.verdict, Verdict::Holds, "{:?}", r.witness);

    let other = law(&t1, "effect token => [buy] coffee");
    let r = check_equivalences(&t1, &t2, &phi1, &other).unwrap();
    assert_eq!(r.verdict, Verdict::PreconditionUnmet);
}

#[test]
fn disjunctive_rule_on_coffee_models() {
    let t = corpus("coffee");
    let m1 = singleton(canonical_frame(&t));
    let m2 = singleton(canonical_frame(&corpus("coffee_initial")));
    for text in ["exec token => <buy>", "static coffee -> hot"] {
        let r = check_disjunctive(&m1, &m2, &law(&t, text)).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{text}: {:?}", r.witness);
    }
}

#[test]
fn success_fails_only_where_expected() {
    let t = corpus("success_counterexample");
    let r = check_postulates(&t, &law(&t, "exec p => <a>")).unwrap();
    assert_eq!(r.verdict(Postulate::Success), Some(Verdict::Fails));
    assert_eq!(r.verdict(Postulate::SuccessModular), Some(Verdict::PreconditionUnmet));
    let json = r.to_json();
    assert_eq!(json["candidates"], 1);
}
