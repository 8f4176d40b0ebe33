use thiserror::Error;

use crate::formula::{classical::cover_formula, Formula, Signature, ValSet};
use crate::kripke::{KripkeModel, ModelSet};
use crate::syntax::{ActionTheory, EffectLaw, ExecLaw, Law};

use super::simplify_theory;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("cannot build a theory from an empty model set")]
    Empty,
    #[error("models do not match the signature")]
    Signature,
}

/// A theory whose laws describe the given models: the static law excludes
/// valuations absent from every model; per action and per world, an effect
/// law bounds the successors seen anywhere, and an executability law covers
/// the worlds that have successors in every model containing them.
/// Formulas are minimized modulo the static law.
pub fn theory_from_model_set(set: &ModelSet, sig: &Signature, name: &str) -> Result<ActionTheory, CompileError> {
    if set.is_empty() {
        return Err(CompileError::Empty);
    }
    let n = sig.atom_count();
    if set.iter().any(|m| m.atoms() != n || m.action_count() != sig.action_count()) {
        return Err(CompileError::Signature);
    }
    let present = set.iter().fold(ValSet::empty(n), |acc, m| acc.or(&m.world_set()));
    let absent = present.complement();
    let mut t = ActionTheory::new(name, sig.clone());
    if !absent.is_empty() {
        t.add(Law::Static(Formula::not(cover_formula(&absent, &ValSet::empty(n))).simplify()))
            .expect("formula over the signature");
    }
    let containing = |w| set.iter().filter(move |m: &&KripkeModel| m.contains(w));
    for a in sig.all_actions() {
        let mut executable = ValSet::empty(n);
        for w in present.iter() {
            let succ = containing(w).fold(ValSet::empty(n), |acc, m| acc.or(&m.successor_set(a, w)));
            let post = if succ.is_empty() { Formula::False } else { cover_formula(&succ, &absent) };
            t.add(EffectLaw::new(w.term(n).to_formula(), a, post).into()).expect("formula over the signature");
            if containing(w).all(|m| m.has_successor(a, w)) {
                executable.insert(w);
            }
        }
        if !executable.is_empty() {
            t.add(ExecLaw::new(cover_formula(&executable, &absent), a).into()).expect("formula over the signature");
        }
    }
    Ok(simplify_theory(&t))
}
