//! Minimal change of Kripke models: contraction (a law stops being valid) and
//! revision (a law becomes valid), for single models and model sets.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{prime_implicants_of, Action, Atom, Literal, Term, ValSet, Valuation};
use crate::kripke::{law_holds, KripkeModel, ModelError, ModelSet};
use crate::syntax::{EffectLaw, Law};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChangeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("law does not fit the model's signature")]
    Signature,
    #[error("cannot revise by an unsatisfiable static law")]
    Unsatisfiable,
}

/// Why a change produced no model at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Impossible {
    /// No world satisfies the law's antecedent, so it cannot be falsified.
    NoAntecedentWorld,
    /// No world falsifies the consequent, or none is a relevant target.
    NoRelevantTarget,
    /// The static law is a tautology.
    Tautology,
    /// Some world needing a new arrow has no relevant target.
    NoTargetFor(Valuation),
    EmptyModelSet,
}

impl Impossible {
    pub fn code(&self) -> &'static str {
        match self {
            Impossible::NoAntecedentWorld => "no-antecedent-world",
            Impossible::NoRelevantTarget => "no-relevant-target",
            Impossible::Tautology => "tautology",
            Impossible::NoTargetFor(_) => "no-target-for-world",
            Impossible::EmptyModelSet => "empty-model-set",
        }
    }
}

/// The minimal models of a one-model change, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelCandidates {
    pub models: Vec<KripkeModel>,
    pub reason: Option<Impossible>,
}

impl ModelCandidates {
    fn of(models: Vec<KripkeModel>) -> Self {
        ModelCandidates { models, reason: None }
    }

    fn impossible(reason: Impossible) -> Self {
        ModelCandidates { models: vec![], reason: Some(reason) }
    }
}

/// What changed from one model to another.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelDelta {
    pub added_worlds: Vec<Valuation>,
    pub removed_worlds: Vec<Valuation>,
    pub added_arrows: Vec<(Action, Valuation, Valuation)>,
    pub removed_arrows: Vec<(Action, Valuation, Valuation)>,
}

impl ModelDelta {
    pub fn between(base: &KripkeModel, new: &KripkeModel) -> Self {
        let bw: BTreeSet<_> = base.worlds().collect();
        let nw: BTreeSet<_> = new.worlds().collect();
        let ba: BTreeSet<_> = base.labelled_arrows().collect();
        let na: BTreeSet<_> = new.labelled_arrows().collect();
        ModelDelta {
            added_worlds: nw.difference(&bw).copied().collect(),
            removed_worlds: bw.difference(&nw).copied().collect(),
            added_arrows: na.difference(&ba).copied().collect(),
            removed_arrows: ba.difference(&na).copied().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.added_worlds.is_empty()
            && self.removed_worlds.is_empty()
            && self.added_arrows.is_empty()
            && self.removed_arrows.is_empty()
    }
}

/// One model of the input set replaced by (or joined with) a changed one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Change {
    pub base: KripkeModel,
    pub result: KripkeModel,
    pub delta: ModelDelta,
}

impl Change {
    fn new(base: &KripkeModel, result: KripkeModel) -> Self {
        Change { delta: ModelDelta::between(base, &result), base: base.clone(), result }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeResult {
    pub models: ModelSet,
    pub changes: Vec<Change>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeKind {
    Contraction,
    /// Revision where some model already satisfied the law: the others are dropped.
    Expansion,
    Revision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeOutcome {
    pub kind: ChangeKind,
    pub results: Vec<ChangeResult>,
    pub reason: Option<Impossible>,
}

fn check_law(m: &KripkeModel, law: &Law) -> Result<(), ChangeError> {
    let atom_mask = if m.atoms() >= 32 { u32::MAX } else { (1u32 << m.atoms()) - 1 };
    let fits = law.action().is_none_or(|a| a.index() < m.action_count())
        && law.formulas().iter().all(|f| f.atom_mask() & !atom_mask == 0);
    if fits {
        Ok(())
    } else {
        Err(ChangeError::Signature)
    }
}

/// `U_w`: every `a`-successor of `w` in some model of the set that contains `w`.
/// A formula `ψ′` holds after `a` at `w` in all those models iff
/// `U_w ⊆ val(ψ′)`.
pub fn guaranteed_effects(w: Valuation, a: Action, set: &ModelSet) -> ValSet {
    let n = set.iter().next().map_or(0, KripkeModel::atoms);
    set.iter()
        .filter(|m| m.contains(w))
        .fold(ValSet::empty(n), |acc, m| acc.or(&m.successor_set(a, w)))
}

/// Relevant target worlds of `w` for a new `a`-arrow that should falsify
/// `law`. Relevance terms of a formula `χ` are the prime implicants of
/// `val(χ) ∩ W`, `W` the worlds of `m`.
pub fn rel_targets(
    w: Valuation,
    law: &EffectLaw,
    m: &KripkeModel,
    set: &ModelSet,
) -> Result<Vec<Valuation>, ChangeError> {
    if !m.contains(w) {
        return Err(ModelError::WorldNotInModel(w).into());
    }
    check_law(m, &Law::Effect(law.clone()))?;
    if !law.pre.eval(w) {
        return Ok(vec![]);
    }
    let n = m.atoms();
    let worlds = m.world_set();
    let falsifying = worlds.minus(&law.post.models(n));
    let neg_terms = prime_implicants_of(&falsifying);
    let mut u = guaranteed_effects(w, law.action, set);
    if !set.contains(m) {
        u = u.or(&m.successor_set(law.action, w));
    }
    let by_neg = |l: Literal, target: Valuation| {
        neg_terms.iter().any(|t| t.contains(l) && t.covers(target))
    };
    Ok(falsifying
        .iter()
        .filter(|&target| {
            (0..n as u8).map(Atom).all(|atom| {
                let l = target.literal(atom);
                if by_neg(l, target) {
                    return true;
                }
                if w.get(atom) != target.get(atom) {
                    guaranteed_term(l, target, &worlds, &u)
                } else {
                    u.iter().any(|v| v.satisfies(l))
                }
            })
        })
        .collect())
}

/// Is there a formula `ψ′` with `U ⊆ val(ψ′)` having a relevance term that
/// contains `l` and is contained in `target`? It suffices to try
/// `val(ψ′) = U ∪ cube(π)` for each candidate term `π`: enlarging `val(ψ′)`
/// only makes primality harder.
fn guaranteed_term(l: Literal, target: Valuation, worlds: &ValSet, u: &ValSet) -> bool {
    let n = worlds.atoms();
    let others: Vec<Atom> = (0..n as u8).map(Atom).filter(|a| *a != l.atom).collect();
    (0u32..1 << others.len()).any(|pick| {
        let lits = others
            .iter()
            .enumerate()
            .filter(|(i, _)| pick & (1 << i) != 0)
            .map(|(_, a)| target.literal(*a))
            .chain([l]);
        let pi = Term::from_literals(lits).expect("literals of one valuation are consistent");
        let cube = pi.cube(n);
        if !cube.is_subset(worlds) {
            return false;
        }
        let on = worlds.and(&u.or(&cube));
        let prime = pi.literals().all(|x| !pi.without(x.atom).cube(n).is_subset(&on));
        prime
    })
}

/// Minimal models falsifying `law`, each as close as possible to `m`.
pub fn contract_model(m: &KripkeModel, law: &Law, set: &ModelSet) -> Result<ModelCandidates, ChangeError> {
    check_law(m, law)?;
    if !law_holds(m, law) {
        return Ok(ModelCandidates::of(vec![m.clone()]));
    }
    let n = m.atoms();
    Ok(match law {
        Law::Exec(x) => {
            let phi_worlds: Vec<Valuation> = m.worlds().filter(|w| x.pre.eval(*w)).collect();
            if phi_worlds.is_empty() {
                return Ok(ModelCandidates::impossible(Impossible::NoAntecedentWorld));
            }
            ModelCandidates::of(
                phi_worlds
                    .into_iter()
                    .map(|w| {
                        let mut out = m.clone();
                        out.strip(x.action, w);
                        out
                    })
                    .collect(),
            )
        }
        Law::Effect(e) => {
            let mut models = Vec::new();
            let mut any_phi = false;
            for w in m.worlds().filter(|w| e.pre.eval(*w)) {
                any_phi = true;
                for target in rel_targets(w, e, m, set)? {
                    let mut out = m.clone();
                    out.add_arrow(e.action, w, target)?;
                    models.push(out);
                }
            }
            if models.is_empty() {
                let reason = if any_phi { Impossible::NoRelevantTarget } else { Impossible::NoAntecedentWorld };
                return Ok(ModelCandidates::impossible(reason));
            }
            models.sort();
            ModelCandidates::of(models)
        }
        Law::Static(phi) => {
            let absent = phi.models(n).complement();
            if absent.is_empty() {
                return Ok(ModelCandidates::impossible(Impossible::Tautology));
            }
            let mut models: Vec<KripkeModel> = absent
                .iter()
                .map(|v| {
                    let mut out = m.clone();
                    out.add_world(v);
                    out
                })
                .collect();
            models.sort();
            ModelCandidates::of(models)
        }
    })
}

/// `𝕄 ∪ {M′}` for every model `M` of the set and every minimal `M′`.
pub fn contract_model_set(set: &ModelSet, law: &Law) -> Result<ChangeOutcome, ChangeError> {
    let mut seen = BTreeSet::new();
    let mut results = Vec::new();
    let mut reason = if set.is_empty() { Some(Impossible::EmptyModelSet) } else { None };
    for m in set {
        let c = contract_model(m, law, set)?;
        if c.models.is_empty() {
            reason = reason.or(c.reason);
        }
        for new in c.models {
            let mut models = set.clone();
            models.insert(new.clone());
            if seen.insert(models.clone()) {
                results.push(ChangeResult { models, changes: vec![Change::new(m, new)] });
            }
        }
    }
    results.sort_by(|a, b| a.models.cmp(&b.models));
    if !results.is_empty() {
        reason = None;
    }
    Ok(ChangeOutcome { kind: ChangeKind::Contraction, results, reason })
}

/// Minimal models of `law`, each as close as possible to `m`. A model that
/// already satisfies the law is its own unique revision.
pub fn revise_model(m: &KripkeModel, law: &Law, set: &ModelSet) -> Result<ModelCandidates, ChangeError> {
    check_law(m, law)?;
    let n = m.atoms();
    if let Law::Static(phi) = law {
        if phi.models(n).is_empty() {
            return Err(ChangeError::Unsatisfiable);
        }
    }
    if law_holds(m, law) {
        return Ok(ModelCandidates::of(vec![m.clone()]));
    }
    Ok(match law {
        Law::Static(phi) => {
            let mut out = m.clone();
            for w in m.worlds().filter(|w| !phi.eval(*w)) {
                out.remove_world(w);
            }
            if out.world_count() > 0 {
                ModelCandidates::of(vec![out])
            } else {
                ModelCandidates::of(phi.models(n).iter().map(|v| out.clone().with_worlds([v])).collect())
            }
        }
        Law::Effect(e) => {
            let mut out = m.clone();
            for w in m.worlds().filter(|w| e.pre.eval(*w)) {
                for v in m.successors(e.action, w).filter(|v| !e.post.eval(*v)) {
                    out.remove_arrow(e.action, w, v);
                }
            }
            ModelCandidates::of(vec![out])
        }
        Law::Exec(x) => {
            let probe = EffectLaw::new(x.pre.clone(), x.action, crate::formula::Formula::False);
            let mut partial = vec![m.clone()];
            for w in m.worlds().filter(|w| x.pre.eval(*w) && !m.has_successor(x.action, *w)) {
                let targets = rel_targets(w, &probe, m, set)?;
                if targets.is_empty() {
                    return Ok(ModelCandidates::impossible(Impossible::NoTargetFor(w)));
                }
                partial = partial
                    .iter()
                    .flat_map(|p| {
                        targets.iter().map(move |t| {
                            let mut q = p.clone();
                            q.add_arrow(x.action, w, *t).expect("targets are worlds");
                            q
                        })
                    })
                    .collect();
            }
            partial.sort();
            ModelCandidates::of(partial)
        }
    })
}

/// Expansion when some model already satisfies the law; otherwise one result
/// per combination of minimal revisions of the individual models.
pub fn revise_model_set(set: &ModelSet, law: &Law) -> Result<ChangeOutcome, ChangeError> {
    if set.is_empty() {
        return Ok(ChangeOutcome { kind: ChangeKind::Revision, results: vec![], reason: Some(Impossible::EmptyModelSet) });
    }
    for m in set {
        check_law(m, law)?;
    }
    let satisfying: ModelSet = set.iter().filter(|m| law_holds(m, law)).cloned().collect();
    if !satisfying.is_empty() {
        return Ok(ChangeOutcome {
            kind: ChangeKind::Expansion,
            results: vec![ChangeResult { models: satisfying, changes: vec![] }],
            reason: None,
        });
    }
    let mut partial: Vec<Vec<Change>> = vec![vec![]];
    for m in set {
        let c = revise_model(m, law, set)?;
        if c.models.is_empty() {
            return Ok(ChangeOutcome { kind: ChangeKind::Revision, results: vec![], reason: c.reason });
        }
        partial = partial
            .into_iter()
            .flat_map(|p| {
                c.models.iter().map(move |r| {
                    let mut q = p.clone();
                    q.push(Change::new(m, r.clone()));
                    q
                })
            })
            .collect();
    }
    let mut seen = BTreeSet::new();
    let mut results: Vec<ChangeResult> = partial
        .into_iter()
        .map(|changes| ChangeResult { models: changes.iter().map(|c| c.result.clone()).collect(), changes })
        .filter(|r| seen.insert(r.models.clone()))
        .collect();
    results.sort_by(|a, b| a.models.cmp(&b.models));
    Ok(ChangeOutcome { kind: ChangeKind::Revision, results, reason: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn p() -> Formula {
        Formula::Atom(Atom(0))
    }

    #[test]
    fn strip_one_world() {
        let mut m = KripkeModel::new(1, 1).with_worlds([Valuation(0), Valuation(1)]);
        m.add_arrow(Action(0), Valuation(0), Valuation(1)).unwrap();
        m.add_arrow(Action(0), Valuation(1), Valuation(1)).unwrap();
        let law = Law::Exec(crate::syntax::ExecLaw::new(Formula::True, Action(0)));
        let set: ModelSet = [m.clone()].into();
        let c = contract_model(&m, &law, &set).unwrap();
        assert_eq!(c.models.len(), 2);
        assert!(c.models.iter().all(|x| !law_holds(x, &law)));
        let law = Law::Exec(crate::syntax::ExecLaw::new(Formula::False, Action(0)));
        assert_eq!(contract_model(&m, &law, &set).unwrap().reason, Some(Impossible::NoAntecedentWorld));
    }

    #[test]
    fn static_revision_to_empty_picks_a_world() {
        let m = KripkeModel::new(1, 1).with_worlds([Valuation(0)]);
        let set: ModelSet = [m.clone()].into();
        let c = revise_model(&m, &Law::Static(p()), &set).unwrap();
        assert_eq!(c.models, vec![KripkeModel::new(1, 1).with_worlds([Valuation(1)])]);
        assert_eq!(revise_model(&m, &Law::Static(Formula::False), &set), Err(ChangeError::Unsatisfiable));
    }

    #[test]
    fn empty_set() {
        let law = Law::Static(p());
        assert!(revise_model_set(&ModelSet::new(), &law).unwrap().results.is_empty());
        assert!(contract_model_set(&ModelSet::new(), &law).unwrap().results.is_empty());
    }
}
