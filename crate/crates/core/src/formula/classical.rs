//! Classical propositional engine: entailment, essential atoms, prime
//! implicants, prime subvaluations and contraction of static law sets.

use thiserror::Error;

use super::{Atom, Formula, Signature, SignatureError, Term, ValSet, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("cannot contract a tautology")]
    Tautology,
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

fn check(sig: &Signature, f: &Formula) -> Result<(), SignatureError> {
    if f.atom_mask() & !sig.atom_mask() != 0 {
        Err(SignatureError::Mismatch)
    } else {
        Ok(())
    }
}

/// `val(⋀ fs)` over the signature.
pub fn models_of(fs: &[Formula], sig: &Signature) -> Result<ValSet, SignatureError> {
    let n = sig.atom_count();
    let mut out = ValSet::full(n);
    for f in fs {
        check(sig, f)?;
        out = out.and(&f.models(n));
    }
    Ok(out)
}

pub fn entails_cpl(gamma: &[Formula], phi: &Formula, sig: &Signature) -> Result<bool, SignatureError> {
    check(sig, phi)?;
    Ok(models_of(gamma, sig)?.is_subset(&phi.models(sig.atom_count())))
}

pub fn equivalent(a: &Formula, b: &Formula, atoms: usize) -> bool {
    a.models(atoms) == b.models(atoms)
}

/// Atoms the formula depends on: `p` is essential iff `φ[p:=⊤]` and `φ[p:=⊥]`
/// differ. Returned in signature order.
pub fn essential_atoms(phi: &Formula, atoms: usize) -> Vec<Atom> {
    let m = phi.models(atoms);
    (0..atoms as u8).map(Atom).filter(|a| depends_on(&m, *a)).collect()
}

pub(crate) fn essential_mask(set: &ValSet) -> u32 {
    (0..set.atoms() as u8).map(Atom).filter(|a| depends_on(set, *a)).fold(0, |m, a| m | a.bit())
}

fn depends_on(set: &ValSet, atom: Atom) -> bool {
    set.iter().any(|v| !set.contains(Valuation(v.0 ^ atom.bit())))
}

/// An equivalent formula mentioning only the essential atoms.
pub fn essential_reduct(phi: &Formula, atoms: usize) -> Formula {
    let ess = essential_mask(&phi.models(atoms));
    let mut out = phi.clone();
    for a in (0..atoms as u8).map(Atom) {
        if ess & a.bit() == 0 && phi.atom_mask() & a.bit() != 0 {
            out = out.substitute(a, true);
        }
    }
    out.simplify()
}

pub fn prime_implicants(phi: &Formula, atoms: usize) -> Vec<Term> {
    prime_implicants_of(&phi.models(atoms))
}

/// Prime implicants of a set of valuations, by enumerating terms of
/// increasing size and pruning anything subsumed by an earlier implicant.
pub fn prime_implicants_of(set: &ValSet) -> Vec<Term> {
    minimal_terms(set.atoms(), u32::MAX, |t| cube_within(t, set, None))
}

/// Minimal terms over the atoms in `allowed` satisfying a monotone-upwards
/// predicate, in canonical order.
fn minimal_terms(atoms: usize, allowed: u32, accept: impl Fn(&Term) -> bool) -> Vec<Term> {
    let full = super::sig::full_mask(atoms) & allowed;
    let mut found: Vec<Term> = Vec::new();
    for size in 0..=full.count_ones() {
        let mut level = Vec::new();
        for mask in submasks(full).filter(|m| m.count_ones() == size) {
            for bits in submasks(mask) {
                let t = Term::from_parts(mask, bits);
                if found.iter().any(|f| f.is_subset_of(&t)) {
                    continue;
                }
                if accept(&t) {
                    level.push(t);
                }
            }
        }
        found.extend(level);
    }
    found.sort();
    found
}

fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// Is `cube(t)` (restricted to `within`, if given) a subset of `set`?
fn cube_within(t: &Term, set: &ValSet, within: Option<&ValSet>) -> bool {
    t.cube(set.atoms()).iter().all(|v| set.contains(v) || within.is_some_and(|w| !w.contains(v)))
}

/// Prime subvaluations of `φ` modulo `W`: minimal subvaluations over the
/// essential atoms of `φ` all of whose extensions in `W` satisfy `φ`.
pub fn prime_subvaluations(phi: &Formula, w: &ValSet) -> Vec<Term> {
    let m = phi.models(w.atoms());
    let ess = essential_mask(&m);
    minimal_terms(w.atoms(), ess, |t| cube_within(t, &m, Some(w)))
}

/// A small DNF equivalent to `on` wherever `dc` (don't-care) is false:
/// prime implicants of `on ∪ dc`, chosen greedily to cover `on`.
pub fn cover_formula(on: &ValSet, dc: &ValSet) -> Formula {
    let care = on.minus(dc);
    if care.is_empty() {
        return Formula::False;
    }
    let primes: Vec<Term> = prime_implicants_of(&on.or(dc))
        .into_iter()
        .filter(|t| t.cube(on.atoms()).intersects(&care))
        .collect();
    let mut uncovered = care;
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let best = primes
            .iter()
            .max_by_key(|t| (t.cube(on.atoms()).and(&uncovered).len(), std::cmp::Reverse(**t)))
            .expect("primes cover the on-set");
        uncovered = uncovered.minus(&best.cube(on.atoms()));
        chosen.push(*best);
    }
    chosen.sort();
    Formula::disj(chosen.iter().map(Term::to_formula))
}

/// One outcome of contracting a set of static laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticContraction {
    pub statics: Vec<Formula>,
    /// The `¬φ` valuation let back in (absent when `S ⊭ φ` and nothing changed).
    pub added: Option<Valuation>,
}

/// A classical contraction operator `⊖` on static law sets.
pub trait ClassicalContraction {
    fn contract(
        &self,
        statics: &[Formula],
        phi: &Formula,
        sig: &Signature,
    ) -> Result<Vec<StaticContraction>, ClassicalError>;
}

/// Model-based maxichoice: one result per `¬φ` valuation, rendered as the
/// negated disjunction of the valuations that stay excluded.
#[derive(Debug, Clone, Copy, Default)]
pub struct Maxichoice;

impl ClassicalContraction for Maxichoice {
    fn contract(
        &self,
        statics: &[Formula],
        phi: &Formula,
        sig: &Signature,
    ) -> Result<Vec<StaticContraction>, ClassicalError> {
        let n = sig.atom_count();
        check(sig, phi)?;
        let s = models_of(statics, sig)?;
        let neg = phi.models(n).complement();
        if neg.is_empty() {
            return Err(ClassicalError::Tautology);
        }
        if !s.is_subset(&phi.models(n)) {
            return Ok(vec![StaticContraction { statics: statics.to_vec(), added: None }]);
        }
        let outside = s.complement();
        Ok(neg
            .iter()
            .map(|v| {
                let mut excluded = outside.clone();
                excluded.remove(v);
                let law = if excluded.is_empty() {
                    Formula::True
                } else {
                    Formula::not(Formula::disj(prime_implicants_of(&excluded).iter().map(Term::to_formula)))
                };
                StaticContraction { statics: vec![law], added: Some(v) }
            })
            .collect())
    }
}

pub fn classical_contract(
    statics: &[Formula],
    phi: &Formula,
    sig: &Signature,
) -> Result<Vec<StaticContraction>, ClassicalError> {
    Maxichoice.contract(statics, phi, sig)
}
