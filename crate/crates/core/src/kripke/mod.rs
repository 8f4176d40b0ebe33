//! Kripke models whose worlds are valuations, truth evaluation, canonical
//! frames, closeness comparators and JSON/DOT export.

mod canonical;
mod compare;
mod export;
mod modal;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{Action, Signature, ValSet, Valuation};

pub use canonical::{canonical_frame, maximal_model, EffectTable};
pub use compare::{minimal_under, Closeness, Comparator, Comparison};
pub use export::{model_from_json, model_to_dot, model_to_json, ModelJson, ModelJsonError};
pub use modal::{eval, holds_globally, is_model_of, law_holds, law_violations, Modal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("world {0:?} is not in the model")]
    WorldNotInModel(Valuation),
    #[error("action index {0} outside the model's signature")]
    UnknownAction(u8),
}

/// `⟨W, R⟩` with `W` a set of valuations (so no two worlds share one) and one
/// arrow set per action. Arrow endpoints always lie in `W`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KripkeModel {
    atoms: u8,
    worlds: BTreeSet<Valuation>,
    relations: Vec<BTreeSet<(Valuation, Valuation)>>,
}

/// A set of models; structural duplicates collapse.
pub type ModelSet = BTreeSet<KripkeModel>;

impl KripkeModel {
    pub fn new(atoms: usize, actions: usize) -> Self {
        KripkeModel { atoms: atoms as u8, worlds: BTreeSet::new(), relations: vec![BTreeSet::new(); actions] }
    }

    pub fn for_signature(sig: &Signature) -> Self {
        KripkeModel::new(sig.atom_count(), sig.action_count())
    }

    pub fn with_worlds<I: IntoIterator<Item = Valuation>>(mut self, worlds: I) -> Self {
        for w in worlds {
            self.add_world(w);
        }
        self
    }

    pub fn atoms(&self) -> usize {
        self.atoms as usize
    }

    pub fn action_count(&self) -> usize {
        self.relations.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = Valuation> + '_ {
        self.worlds.iter().copied()
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn contains(&self, w: Valuation) -> bool {
        self.worlds.contains(&w)
    }

    pub fn world_set(&self) -> ValSet {
        ValSet::from_valuations(self.atoms(), self.worlds())
    }

    /// Adding a valuation already present is a no-op.
    pub fn add_world(&mut self, w: Valuation) -> bool {
        self.worlds.insert(w)
    }

    /// Removes the world and every arrow touching it.
    pub fn remove_world(&mut self, w: Valuation) -> bool {
        if !self.worlds.remove(&w) {
            return false;
        }
        for r in &mut self.relations {
            r.retain(|(u, v)| *u != w && *v != w);
        }
        true
    }

    pub fn add_arrow(&mut self, a: Action, from: Valuation, to: Valuation) -> Result<bool, ModelError> {
        for w in [from, to] {
            if !self.contains(w) {
                return Err(ModelError::WorldNotInModel(w));
            }
        }
        let r = self.relations.get_mut(a.index()).ok_or(ModelError::UnknownAction(a.0))?;
        Ok(r.insert((from, to)))
    }

    pub fn remove_arrow(&mut self, a: Action, from: Valuation, to: Valuation) -> bool {
        self.relations.get_mut(a.index()).is_some_and(|r| r.remove(&(from, to)))
    }

    /// Removes every `a`-arrow leaving `w`; returns how many there were.
    pub fn strip(&mut self, a: Action, w: Valuation) -> usize {
        let r = &mut self.relations[a.index()];
        let before = r.len();
        r.retain(|(u, _)| *u != w);
        before - r.len()
    }

    pub fn arrows(&self, a: Action) -> &BTreeSet<(Valuation, Valuation)> {
        &self.relations[a.index()]
    }

    /// Every arrow with its label, ordered by action then endpoints.
    pub fn labelled_arrows(&self) -> impl Iterator<Item = (Action, Valuation, Valuation)> + '_ {
        self.relations
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(u, v)| (Action(i as u8), *u, *v)))
    }

    pub fn arrow_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    pub fn successors(&self, a: Action, w: Valuation) -> impl Iterator<Item = Valuation> + '_ {
        self.relations[a.index()].range((w, Valuation(0))..=(w, Valuation(u32::MAX))).map(|(_, v)| *v)
    }

    pub fn has_successor(&self, a: Action, w: Valuation) -> bool {
        self.successors(a, w).next().is_some()
    }

    pub fn successor_set(&self, a: Action, w: Valuation) -> ValSet {
        ValSet::from_valuations(self.atoms(), self.successors(a, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_world_is_noop() {
        let mut m = KripkeModel::new(2, 1);
        assert!(m.add_world(Valuation(1)));
        assert!(!m.add_world(Valuation(1)));
        assert_eq!(m.world_count(), 1);
    }

    #[test]
    fn arrows_need_endpoints() {
        let mut m = KripkeModel::new(2, 1).with_worlds([Valuation(0), Valuation(3)]);
        assert!(m.add_arrow(Action(0), Valuation(0), Valuation(3)).unwrap());
        assert_eq!(m.add_arrow(Action(0), Valuation(0), Valuation(2)), Err(ModelError::WorldNotInModel(Valuation(2))));
        assert_eq!(m.successors(Action(0), Valuation(0)).collect::<Vec<_>>(), vec![Valuation(3)]);
        m.remove_world(Valuation(3));
        assert_eq!(m.arrow_count(), 0);
    }
}
