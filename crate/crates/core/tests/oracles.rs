mod common;

use std::collections::BTreeSet;

use atc_core::entailment::{biggest_model, is_modular, Engine};
use atc_core::formula::{prime_implicants_of, ValSet};
use atc_core::kripke::{canonical_frame, is_model_of, minimal_under, Closeness, Comparator, Comparison, KripkeModel};
use atc_core::model_change::{contract_model, rel_targets, revise_model, revise_model_set, ChangeError};
use atc_core::syntax::Law;
use atc_core::theory_change::{contract, theory_from_model_set, ContractError, ContractOptions};
use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prime_implicants_match_enumeration(atoms in 1usize..=4, bits in any::<u32>()) {
        let set_mask = bits & ((1u64 << (1 << atoms)) - 1) as u32;
        let set = ValSet::from_valuations(atoms, (0..1u32 << atoms).filter(|v| set_mask & (1 << v) != 0).map(atc_core::Valuation));
        let got: BTreeSet<_> = prime_implicants_of(&set).into_iter().collect();
        let want: BTreeSet<_> = brute_implicants(atoms, set_mask).into_iter().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn rel_targets_match_definition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let atoms = r.gen_range(2..=3);
        let s = sig(atoms, 1);
        let m = random_model(&mut r, atoms, 1, 6, 0.3);
        let mut set = singleton(m.clone());
        if r.gen_bool(0.5) {
            let mut other = random_model(&mut r, atoms, 1, 6, 0.3);
            if let Some(w) = m.worlds().next() {
                other.add_world(w);
            }
            set.insert(other);
        }
        let Law::Effect(e) = random_effect(&mut r, &s) else { unreachable!() };
        for w in m.worlds() {
            let got: BTreeSet<_> = rel_targets(w, &e, &m, &set).unwrap().into_iter().collect();
            prop_assert_eq!(got, brute_rel_targets(w, &e, &m, &set));
        }
    }

    #[test]
    fn contraction_results_falsify_and_are_minimal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let atoms = r.gen_range(2..=3);
        let s = sig(atoms, 1);
        let m = random_model(&mut r, atoms, 1, 5, 0.3);
        let l = random_law(&mut r, &s);
        let set = singleton(m.clone());
        let out = contract_model(&m, &l, &set).unwrap();
        let cmp = Comparator::new(Closeness::SubsetLex, &m);
        for x in &out.models {
            prop_assert!(!holds(x, &l));
        }
        for x in &out.models {
            for y in &out.models {
                prop_assert!(x == y || cmp.compare(x, y) != Comparison::Closer);
            }
        }
    }

    #[test]
    fn revision_results_satisfy_the_law(seed in any::<u64>()) {
        let mut r = rng(seed);
        let atoms = r.gen_range(2..=3);
        let s = sig(atoms, 1);
        let m = random_model(&mut r, atoms, 1, 5, 0.4);
        let l = random_law(&mut r, &s);
        let set = singleton(m.clone());
        let out = match revise_model(&m, &l, &set) {
            Err(ChangeError::Unsatisfiable) => {
                prop_assert!(matches!(&l, Law::Static(f) if f.models(atoms).is_empty()));
                return Ok(());
            }
            other => other.unwrap(),
        };
        if holds(&m, &l) {
            prop_assert_eq!(out.models, vec![m]);
        } else {
            for x in &out.models {
                prop_assert!(holds(x, &l));
            }
        }
    }

    #[test]
    fn theory_contraction_candidates_are_entailed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = sig(r.gen_range(2..=3), r.gen_range(1..=2));
        let t = random_theory(&mut r, &s, 6);
        let l = random_law(&mut r, &s);
        let engine = Engine::new(&t);
        let cands = match contract(&t, &l, &ContractOptions::default()) {
            Err(ContractError::Classical(_)) => {
                prop_assert!(matches!(&l, Law::Static(f) if f.models(s.atom_count()).is_full()));
                return Ok(());
            }
            other => other.unwrap(),
        };
        for c in cands {
            prop_assert!(engine.entails_theory(&c.theory));
        }
    }
}

fn random_effect(r: &mut StdRng, s: &atc_core::Signature) -> Law {
    loop {
        let l = random_law(r, s);
        if matches!(l, Law::Effect(_)) {
            return l;
        }
    }
}

#[test]
fn biggest_model_is_a_model_of_consistent_theories() {
    let mut r = rng(11);
    let s = sig(3, 2);
    for _ in 0..300 {
        let t = random_theory(&mut r, &s, 6);
        let b = biggest_model(&t);
        if b.model.world_count() > 0 {
            assert!(is_model_of(&b.model, &t), "{}", t.render());
        }
    }
}

#[test]
fn modular_theories_have_full_static_worlds() {
    let mut r = rng(12);
    let s = sig(3, 1);
    for _ in 0..300 {
        let t = random_theory(&mut r, &s, 6);
        let report = is_modular(&t);
        let worlds = biggest_model(&t).model.world_set();
        assert_eq!(report.modular, worlds == t.static_models(), "{}", t.render());
    }
}

#[test]
fn comparator_minimum_is_never_beaten() {
    let mut r = rng(13);
    for _ in 0..100 {
        let base = random_model(&mut r, 2, 1, 4, 0.4);
        let space: Vec<KripkeModel> = (0..8).map(|_| random_model(&mut r, 2, 1, 4, 0.4)).collect();
        for kind in [Closeness::SubsetLex, Closeness::CardinalityLex] {
            let cmp = Comparator::new(kind, &base);
            let min = minimal_under(&space, &cmp);
            assert!(!min.is_empty());
            for m in &min {
                assert!(space.iter().all(|x| cmp.compare(x, m) != Comparison::Closer));
            }
        }
        let want = brute_minimal(&base, &space);
        let got: BTreeSet<_> = minimal_under(&space, &Comparator::new(Closeness::SubsetLex, &base)).into_iter().collect();
        assert_eq!(got, want);
    }
}

#[test]
fn compiled_theory_accepts_every_model_of_the_set() {
    let mut r = rng(14);
    let s = sig(3, 1);
    for _ in 0..100 {
        let mut set = singleton(random_model(&mut r, 3, 1, 5, 0.3));
        set.insert(random_model(&mut r, 3, 1, 5, 0.3));
        let t = theory_from_model_set(&set, &s, "compiled").unwrap();
        for m in &set {
            assert!(is_model_of(m, &t), "{}", t.render());
        }
    }
}

#[test]
fn revision_round_trip_through_theories() {
    let t = corpus("coffee_initial");
    let mut set = singleton(canonical_frame(&t));
    for text in ["static ~coffee -> ~hot", "effect token => [buy] ~token"] {
        let l = law(&t, text);
        let out = revise_model_set(&set, &l).unwrap();
        set = out.results[0].models.clone();
        let compiled = theory_from_model_set(&set, t.sig(), "revised").unwrap();
        assert!(Engine::new(&compiled).entails_law(&l).unwrap(), "{text}");
    }
}
