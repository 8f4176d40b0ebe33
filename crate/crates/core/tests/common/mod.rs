//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls the decision procedures under test:
//! oracles only use formula evaluation and plain enumeration.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use atc_core::formula::{Action, Atom, Formula, Literal, Signature, Term, Valuation};
use atc_core::kripke::{KripkeModel, ModelSet};
use atc_core::syntax::{parse_law, parse_theory, ActionTheory, EffectLaw, ExecLaw, Law};
use rand::rngs::StdRng;
use rand::Rng;

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.atc"))
}

pub fn corpus(name: &str) -> ActionTheory {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    parse_theory(&text).expect("corpus file parses")
}

pub fn law(t: &ActionTheory, text: &str) -> Law {
    parse_law(t.sig(), text).expect("law parses")
}

pub fn theory(t: &ActionTheory, laws: &[&str]) -> ActionTheory {
    let mut out = t.empty_like();
    for l in laws {
        out.add(law(t, l)).unwrap();
    }
    out
}

pub fn val(sig: &Signature, lits: &[&str]) -> Valuation {
    let mut v = Valuation(0);
    for l in lits {
        let (name, pos) = match l.strip_prefix('~') {
            Some(n) => (n, false),
            None => (*l, true),
        };
        v = v.with(sig.atom(name).expect("atom"), pos);
    }
    v
}

pub fn singleton(m: KripkeModel) -> ModelSet {
    [m].into_iter().collect()
}

// ---------------------------------------------------------------------------
// random instances

pub fn sig(atoms: usize, actions: usize) -> Signature {
    let a: Vec<String> = (0..atoms).map(|i| format!("p{}", i + 1)).collect();
    let b: Vec<String> = (0..actions).map(|i| ["a", "b", "c"][i].to_string()).collect();
    Signature::new(a, b).unwrap()
}

fn random_literal(rng: &mut StdRng, atoms: usize) -> Formula {
    let a = Formula::Atom(Atom(rng.gen_range(0..atoms) as u8));
    if rng.gen_bool(0.5) {
        Formula::not(a)
    } else {
        a
    }
}

/// Small formulas: constants, literals, and binary combinations of those.
pub fn random_formula(rng: &mut StdRng, atoms: usize) -> Formula {
    match rng.gen_range(0..10) {
        0 => Formula::True,
        1..=4 => random_literal(rng, atoms),
        5 | 6 => Formula::and(random_literal(rng, atoms), random_literal(rng, atoms)),
        7 | 8 => Formula::or(random_literal(rng, atoms), random_literal(rng, atoms)),
        _ => Formula::implies(random_literal(rng, atoms), random_literal(rng, atoms)),
    }
}

pub fn random_law(rng: &mut StdRng, sig: &Signature) -> Law {
    let n = sig.atom_count();
    let a = Action(rng.gen_range(0..sig.action_count()) as u8);
    match rng.gen_range(0..10) {
        0 | 1 => Law::Static(random_formula(rng, n)),
        2..=6 => {
            let post = if rng.gen_bool(0.2) { Formula::False } else { random_formula(rng, n) };
            Law::Effect(EffectLaw::new(random_formula(rng, n), a, post))
        }
        _ => Law::Exec(ExecLaw::new(random_formula(rng, n), a)),
    }
}

pub fn random_theory(rng: &mut StdRng, sig: &Signature, max_laws: usize) -> ActionTheory {
    let mut t = ActionTheory::new("random", sig.clone());
    let k = rng.gen_range(1..=max_laws);
    for _ in 0..k {
        t.add(random_law(rng, sig)).unwrap();
    }
    t
}

/// A model with at most `max_worlds` worlds and each possible arrow present
/// with probability `density`.
pub fn random_model(rng: &mut StdRng, atoms: usize, actions: usize, max_worlds: usize, density: f64) -> KripkeModel {
    let total = 1usize << atoms;
    let k = rng.gen_range(1..=max_worlds.min(total));
    let mut all: Vec<u32> = (0..total as u32).collect();
    for i in 0..all.len() {
        let j = rng.gen_range(i..all.len());
        all.swap(i, j);
    }
    let worlds: Vec<Valuation> = all[..k].iter().map(|b| Valuation(*b)).collect();
    let mut m = KripkeModel::new(atoms, actions).with_worlds(worlds.iter().copied());
    for a in 0..actions {
        for &u in &worlds {
            for &v in &worlds {
                if rng.gen_bool(density) {
                    m.add_arrow(Action(a as u8), u, v).unwrap();
                }
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// entailment oracle: every model over a signature with one action

/// A model as bitmasks: `worlds` over valuation codes, `succ[w]` the
/// successor set of world `w`.
#[derive(Clone, Copy)]
pub struct TinyModel {
    pub worlds: u32,
    pub succ: [u32; 8],
}

/// All models (in the restricted class: distinct valuations) over `atoms`
/// atoms and a single action. 67 689 models for two atoms.
pub fn all_tiny_models(atoms: usize) -> Vec<TinyModel> {
    let total = 1u32 << atoms;
    assert!(atoms <= 2, "enumeration is only feasible for two atoms");
    let mut out = Vec::new();
    for worlds in 0u32..(1 << total) {
        let members: Vec<u32> = (0..total).filter(|v| worlds & (1 << v) != 0).collect();
        let k = members.len();
        // one bit per ordered pair of members
        for rel in 0u64..(1u64 << (k * k)) {
            let mut succ = [0u32; 8];
            for (i, &u) in members.iter().enumerate() {
                for (j, &v) in members.iter().enumerate() {
                    if rel & (1 << (i * k + j)) != 0 {
                        succ[u as usize] |= 1 << v;
                    }
                }
            }
            out.push(TinyModel { worlds, succ });
        }
    }
    out
}

fn mask(f: &Formula, atoms: usize) -> u32 {
    (0..1u32 << atoms).filter(|v| f.eval(Valuation(*v))).fold(0, |m, v| m | (1 << v))
}

/// Precomputed truth sets of a law's formulas.
#[derive(Clone, Copy)]
pub enum TinyLaw {
    Static(u32),
    Effect(u32, u32),
    Exec(u32),
}

impl TinyLaw {
    pub fn new(l: &Law, atoms: usize) -> Self {
        match l {
            Law::Static(f) => TinyLaw::Static(mask(f, atoms)),
            Law::Effect(e) => TinyLaw::Effect(mask(&e.pre, atoms), mask(&e.post, atoms)),
            Law::Exec(x) => TinyLaw::Exec(mask(&x.pre, atoms)),
        }
    }

    pub fn holds(&self, m: &TinyModel) -> bool {
        let each = |pre: u32, ok: &dyn Fn(u32) -> bool| {
            (0..8).filter(|w| m.worlds & pre & (1 << w) != 0).all(|w| ok(m.succ[w]))
        };
        match *self {
            TinyLaw::Static(s) => m.worlds & !s == 0,
            TinyLaw::Effect(pre, post) => each(pre, &|s| s & !post == 0),
            TinyLaw::Exec(pre) => each(pre, &|s| s != 0),
        }
    }
}

/// `T ⊨ law` by quantifying over every model.
pub fn brute_entails(models: &[TinyModel], t: &ActionTheory, law: &Law) -> bool {
    let n = t.sig().atom_count();
    assert_eq!(t.sig().action_count(), 1);
    let laws: Vec<TinyLaw> = t.laws().iter().map(|l| TinyLaw::new(l, n)).collect();
    let goal = TinyLaw::new(law, n);
    models.iter().filter(|m| laws.iter().all(|l| l.holds(m))).all(|m| goal.holds(m))
}

// ---------------------------------------------------------------------------
// closeness and model-level change, straight from the definitions

type Arrow = (Action, Valuation, Valuation);

fn arrows(m: &KripkeModel) -> BTreeSet<Arrow> {
    m.labelled_arrows().collect()
}

fn worlds(m: &KripkeModel) -> BTreeSet<Valuation> {
    m.worlds().collect()
}

/// `x ⪯ y` relative to `base`: world differences first, then arrows.
pub fn at_least_as_close(base: &KripkeModel, x: &KripkeModel, y: &KripkeModel) -> bool {
    let (bw, ba) = (worlds(base), arrows(base));
    let dw = |m: &KripkeModel| -> BTreeSet<Valuation> { bw.symmetric_difference(&worlds(m)).copied().collect() };
    let da = |m: &KripkeModel| -> BTreeSet<Arrow> { ba.symmetric_difference(&arrows(m)).copied().collect() };
    let (xw, yw) = (dw(x), dw(y));
    (xw.is_subset(&yw) && xw != yw) || (xw == yw && da(x).is_subset(&da(y)))
}

pub fn brute_minimal(base: &KripkeModel, space: &[KripkeModel]) -> BTreeSet<KripkeModel> {
    space
        .iter()
        .filter(|x| {
            !space.iter().any(|y| at_least_as_close(base, y, x) && !at_least_as_close(base, x, y))
        })
        .cloned()
        .collect()
}

/// All terms (consistent literal sets) over `atoms` atoms.
fn all_terms(atoms: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for m in 0u32..(1 << atoms) {
        let mut bits = 0u32;
        loop {
            out.push(Term::from_parts(m, bits));
            if bits == m {
                break;
            }
            bits = bits.wrapping_sub(m) & m;
        }
    }
    out
}

fn cube_within(t: &Term, atoms: usize, set: u32) -> bool {
    (0..1u32 << atoms).filter(|v| t.covers(Valuation(*v))).all(|v| set & (1 << v) != 0)
}

/// Inclusion-minimal terms whose valuations all lie in `set`.
pub fn brute_implicants(atoms: usize, set: u32) -> Vec<Term> {
    let imp: Vec<Term> = all_terms(atoms).into_iter().filter(|t| cube_within(t, atoms, set)).collect();
    imp.iter().filter(|t| !imp.iter().any(|s| s != *t && s.is_subset_of(t))).copied().collect()
}

fn world_mask(m: &KripkeModel) -> u32 {
    m.worlds().fold(0, |acc, w| acc | (1 << w.0))
}

/// Relevant target worlds, transcribed literally: relevance terms of `χ` are
/// the minimal terms implying `χ` within `W`, and the formulas `ψ′` guaranteed
/// after the action at `w` are enumerated as every valuation set containing
/// all successors of `w` in the models of `set` that contain `w`.
pub fn brute_rel_targets(w: Valuation, e: &EffectLaw, m: &KripkeModel, set: &ModelSet) -> BTreeSet<Valuation> {
    let n = m.atoms();
    let wm = world_mask(m);
    let post = mask(&e.post, n);
    if !e.pre.eval(w) {
        return BTreeSet::new();
    }
    let neg_terms = brute_implicants(n, wm & !post);
    let containing: Vec<&KripkeModel> = set.iter().filter(|x| x.contains(w)).collect();
    let u = containing.iter().flat_map(|x| x.successors(e.action, w)).fold(0u32, |acc, v| acc | (1 << v.0));
    let full = (1u32 << (1 << n)) - 1;
    let free = full & !u;
    // relevance terms of each guaranteed formula
    let mut guaranteed: Vec<Vec<Term>> = Vec::new();
    let mut extra = 0u32;
    loop {
        guaranteed.push(brute_implicants(n, wm & (u | extra)));
        if extra == free {
            break;
        }
        extra = extra.wrapping_sub(free) & free;
    }
    let in_term = |terms: &[Term], l: Literal, target: Valuation| terms.iter().any(|t| t.contains(l) && t.covers(target));
    m.worlds()
        .filter(|&target| !e.post.eval(target))
        .filter(|&target| {
            (0..n as u8).map(Atom).all(|atom| {
                let l = target.literal(atom);
                if in_term(&neg_terms, l, target) {
                    return true;
                }
                if w.get(atom) != target.get(atom) {
                    guaranteed.iter().any(|g| in_term(g, l, target))
                } else {
                    containing.iter().any(|x| x.successors(e.action, w).any(|s| s.satisfies(l)))
                }
            })
        })
        .collect()
}

fn law_holds_in(m: &KripkeModel, l: &Law) -> bool {
    match l {
        Law::Static(f) => m.worlds().all(|w| f.eval(w)),
        Law::Effect(e) => {
            m.worlds().filter(|w| e.pre.eval(*w)).all(|w| m.successors(e.action, w).all(|s| e.post.eval(s)))
        }
        Law::Exec(x) => m.worlds().filter(|w| x.pre.eval(*w)).all(|w| m.successors(x.action, w).next().is_some()),
    }
}

pub fn holds(m: &KripkeModel, l: &Law) -> bool {
    law_holds_in(m, l)
}

/// Every subset of `items`, applied to `base` through `apply`.
fn subsets<T: Copy>(items: &[T], base: &KripkeModel, apply: impl Fn(&mut KripkeModel, T)) -> Vec<KripkeModel> {
    assert!(items.len() <= 16, "candidate space too large for enumeration");
    (0u32..1 << items.len())
        .map(|pick| {
            let mut m = base.clone();
            for (i, it) in items.iter().enumerate() {
                if pick & (1 << i) != 0 {
                    apply(&mut m, *it);
                }
            }
            m
        })
        .collect()
}

/// Size of the candidate space `brute_contract` would enumerate.
pub fn contraction_space_bits(m: &KripkeModel, l: &Law, set: &ModelSet) -> usize {
    match l {
        Law::Exec(x) => m.arrows(x.action).iter().filter(|(u, _)| x.pre.eval(*u)).count(),
        Law::Effect(e) => m
            .worlds()
            .map(|w| brute_rel_targets(w, e, m, set).iter().filter(|t| !m.arrows(e.action).contains(&(w, **t))).count())
            .sum(),
        Law::Static(f) => (0..1u32 << m.atoms()).filter(|v| !m.contains(Valuation(*v)) && !f.eval(Valuation(*v))).count(),
    }
}

/// Minimal contraction of one model, by enumerating the whole candidate
/// space of the definitions and minimizing.
pub fn brute_contract(m: &KripkeModel, l: &Law, set: &ModelSet) -> BTreeSet<KripkeModel> {
    let space: Vec<KripkeModel> = match l {
        Law::Exec(x) => {
            let removable: Vec<(Valuation, Valuation)> =
                m.arrows(x.action).iter().filter(|(u, _)| x.pre.eval(*u)).copied().collect();
            subsets(&removable, m, |mm, (u, v)| {
                mm.remove_arrow(x.action, u, v);
            })
        }
        Law::Effect(e) => {
            let mut addable = Vec::new();
            for w in m.worlds() {
                for t in brute_rel_targets(w, e, m, set) {
                    if !m.arrows(e.action).contains(&(w, t)) {
                        addable.push((w, t));
                    }
                }
            }
            subsets(&addable, m, |mm, (u, v)| {
                mm.add_arrow(e.action, u, v).unwrap();
            })
        }
        Law::Static(f) => {
            let absent: Vec<Valuation> =
                (0..1u32 << m.atoms()).map(Valuation).filter(|v| !m.contains(*v)).collect();
            let _ = f;
            subsets(&absent, m, |mm, v| {
                mm.add_world(v);
            })
        }
    };
    let falsifying: Vec<KripkeModel> = space.into_iter().filter(|c| !law_holds_in(c, l)).collect();
    brute_minimal(m, &falsifying)
}
