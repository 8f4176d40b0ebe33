//! Global consequence for the law fragment, decided on the biggest model of a
//! theory: the union of all its models, which is itself a model.

use crate::formula::{classical::cover_formula, Formula, ValSet};
use crate::kripke::{canonical_frame, is_model_of, maximal_model, EffectTable, KripkeModel};
use crate::syntax::{ActionTheory, Law, Query, TheoryError};

/// The biggest model and the worlds of `val(S)` eliminated on the way to it,
/// one batch per round.
#[derive(Debug, Clone)]
pub struct BiggestModel {
    pub model: KripkeModel,
    pub eliminated: Vec<ValSet>,
}

/// Start from `val(S)` with the maximal relation and repeatedly drop worlds
/// where some executability law fires but no successor is left.
pub fn biggest_model(t: &ActionTheory) -> BiggestModel {
    let table = EffectTable::new(t);
    let n = t.sig().atom_count();
    let execs: Vec<(crate::formula::Action, ValSet)> = t.execs().iter().map(|x| (x.action, x.pre.models(n))).collect();
    let mut worlds = t.static_models();
    let mut eliminated = Vec::new();
    loop {
        let batch = ValSet::from_valuations(
            n,
            worlds.iter().filter(|w| {
                execs.iter().any(|(a, pre)| pre.contains(*w) && !table.allowed(*a, *w).intersects(&worlds))
            }),
        );
        if batch.is_empty() {
            break;
        }
        worlds = worlds.minus(&batch);
        eliminated.push(batch);
    }
    BiggestModel { model: maximal_model(t, &worlds), eliminated }
}

/// A theory with its biggest model precomputed, for repeated queries.
#[derive(Debug, Clone)]
pub struct Engine<'t> {
    theory: &'t ActionTheory,
    biggest: BiggestModel,
    worlds: ValSet,
    /// Per action, the worlds where some executability law fires.
    exec_pre: Vec<ValSet>,
}

impl<'t> Engine<'t> {
    pub fn new(theory: &'t ActionTheory) -> Self {
        let biggest = biggest_model(theory);
        let n = theory.sig().atom_count();
        let exec_pre = theory
            .sig()
            .all_actions()
            .map(|a| theory.execs_for(a).fold(ValSet::empty(n), |acc, x| acc.or(&x.pre.models(n))))
            .collect();
        let worlds = biggest.model.world_set();
        Engine { theory, biggest, worlds, exec_pre }
    }

    pub fn theory(&self) -> &'t ActionTheory {
        self.theory
    }

    pub fn biggest(&self) -> &BiggestModel {
        &self.biggest
    }

    pub fn is_consistent(&self) -> bool {
        !self.worlds.is_empty()
    }

    pub fn entails_law(&self, law: &Law) -> Result<bool, TheoryError> {
        law.check(self.theory.sig())?;
        Ok(self.holds(law))
    }

    pub fn entails(&self, q: &Query) -> Result<bool, TheoryError> {
        for l in q.laws() {
            if !self.entails_law(l)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every law of `other` is entailed.
    pub fn entails_theory(&self, other: &ActionTheory) -> bool {
        other.laws().iter().all(|l| self.entails_law(l).unwrap_or(false))
    }

    pub(crate) fn holds(&self, law: &Law) -> bool {
        let n = self.theory.sig().atom_count();
        let m = &self.biggest.model;
        match law {
            Law::Static(f) => self.worlds.is_subset(&f.models(n)),
            Law::Effect(e) => {
                let post = e.post.models(n);
                self.worlds.and(&e.pre.models(n)).iter().all(|w| m.successor_set(e.action, w).is_subset(&post))
            }
            // A φ-world where no executability law for the action fires can
            // have its arrows stripped without breaking the model.
            Law::Exec(x) => self.worlds.and(&x.pre.models(n)).is_subset(&self.exec_pre[x.action.index()]),
        }
    }
}

pub fn entails(t: &ActionTheory, q: &Query) -> Result<bool, TheoryError> {
    Engine::new(t).entails(q)
}

pub fn entails_law(t: &ActionTheory, law: &Law) -> Result<bool, TheoryError> {
    Engine::new(t).entails_law(law)
}

pub fn is_consistent(t: &ActionTheory) -> bool {
    Engine::new(t).is_consistent()
}

/// Mutual entailment, law by law. Theories over different signatures are
/// never equivalent.
pub fn theory_equivalent(t1: &ActionTheory, t2: &ActionTheory) -> bool {
    t1.sig() == t2.sig() && Engine::new(t1).entails_theory(t2) && Engine::new(t2).entails_theory(t1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularityReport {
    pub modular: bool,
    /// One law per elimination round: what that round rules out beyond the
    /// static laws and earlier rounds.
    pub implicit_laws: Vec<Formula>,
    /// Characteristic formula of the surviving worlds, modulo `S`.
    pub final_law: Formula,
}

pub fn is_modular(t: &ActionTheory) -> ModularityReport {
    let b = biggest_model(t);
    let outside = t.static_models().complement();
    let mut dc = outside.clone();
    let mut implicit_laws = Vec::new();
    for batch in &b.eliminated {
        implicit_laws.push(Formula::not(cover_formula(batch, &dc)).simplify());
        dc = dc.or(batch);
    }
    let final_law = cover_formula(&b.model.world_set(), &outside);
    let report = ModularityReport { modular: implicit_laws.is_empty(), implicit_laws, final_law };
    debug_assert_eq!(report.modular, is_model_of(&canonical_frame(t), t));
    report
}
