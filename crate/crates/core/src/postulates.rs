//! Checks the change postulates on concrete instances.

use serde::Serialize;
use serde_json::{json, Value};

use crate::entailment::{is_modular, theory_equivalent, Engine};
use crate::kripke::ModelSet;
use crate::model_change::{contract_model_set, ChangeError};
use crate::syntax::{ActionTheory, Law};
use crate::theory_change::{contract, Candidate, ContractError, ContractOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Postulate {
    Monotonicity,
    Preservation,
    /// `T ⊭ ⊥` and `⊭ Φ` imply no candidate entails `Φ`.
    Success,
    /// Success restricted to consistent modular theories and dynamic laws
    /// not entailed by the static laws alone.
    SuccessModular,
    Recovery,
    ModularityPreservation,
    Equivalences,
    Disjunctive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    PreconditionUnmet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostulateResult {
    pub postulate: Postulate,
    pub verdict: Verdict,
    /// For failures: which candidate and law broke it.
    pub witness: Option<String>,
}

impl PostulateResult {
    fn new(postulate: Postulate, verdict: Verdict) -> Self {
        PostulateResult { postulate, verdict, witness: None }
    }

    fn check(postulate: Postulate, failure: Option<String>) -> Self {
        match failure {
            None => Self::new(postulate, Verdict::Holds),
            Some(w) => PostulateResult { postulate, verdict: Verdict::Fails, witness: Some(w) },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostulateReport {
    pub results: Vec<PostulateResult>,
    pub candidates: Vec<Candidate>,
}

impl PostulateReport {
    pub fn verdict(&self, p: Postulate) -> Option<Verdict> {
        self.results.iter().find(|r| r.postulate == p).map(|r| r.verdict)
    }

    pub fn any_failed(&self) -> bool {
        self.results.iter().any(|r| r.verdict == Verdict::Fails)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "candidates": self.candidates.len(),
            "postulates": serde_json::to_value(&self.results).expect("report serializes"),
        })
    }
}

fn law_theory(t: &ActionTheory, law: &Law) -> ActionTheory {
    let mut single = t.empty_like();
    single.add(law.clone()).expect("law was checked against the signature");
    single
}

/// First law of `other` that `engine` fails to entail.
fn missing(engine: &Engine, other: &ActionTheory) -> Option<Law> {
    other.laws().into_iter().find(|l| !engine.entails_law(l).unwrap_or(false))
}

/// Contracts `phi` from `t` with the default options and checks every
/// postulate against the candidates.
pub fn check_postulates(t: &ActionTheory, phi: &Law) -> Result<PostulateReport, ContractError> {
    phi.check(t.sig())?;
    let sig = t.sig();
    let candidates = contract(t, phi, &ContractOptions::default())?;
    let base = Engine::new(t);
    let entailed = base.entails_law(phi)?;
    let modular = is_modular(t).modular;
    let show = |l: &Law| l.display(sig).to_string();
    let mut results = Vec::new();

    results.push(PostulateResult::check(
        Postulate::Monotonicity,
        candidates.iter().enumerate().find_map(|(i, c)| {
            missing(&base, &c.theory).map(|l| format!("candidate {}: `{}` not entailed by T", i + 1, show(&l)))
        }),
    ));

    results.push(if entailed {
        PostulateResult::new(Postulate::Preservation, Verdict::PreconditionUnmet)
    } else {
        PostulateResult::check(
            Postulate::Preservation,
            candidates
                .iter()
                .position(|c| !theory_equivalent(t, &c.theory))
                .map(|i| format!("candidate {} differs from T", i + 1)),
        )
    });

    let valid = Engine::new(&t.empty_like()).entails_law(phi)?;
    let violators = || {
        candidates
            .iter()
            .position(|c| Engine::new(&c.theory).entails_law(phi).unwrap_or(false))
            .map(|i| format!("candidate {} still entails `{}`", i + 1, show(phi)))
    };
    results.push(if !base.is_consistent() || valid {
        PostulateResult::new(Postulate::Success, Verdict::PreconditionUnmet)
    } else {
        PostulateResult::check(Postulate::Success, violators())
    });

    let trivial = Engine::new(&t.statics_only()).entails_law(phi)?;
    let dynamic = !matches!(phi, Law::Static(_));
    results.push(if !base.is_consistent() || !modular || !dynamic || trivial {
        PostulateResult::new(Postulate::SuccessModular, Verdict::PreconditionUnmet)
    } else {
        PostulateResult::check(Postulate::SuccessModular, violators())
    });

    results.push(PostulateResult::check(
        Postulate::Recovery,
        candidates.iter().enumerate().find_map(|(i, c)| {
            let mut with = c.theory.clone();
            with.add(phi.clone()).expect("law was checked against the signature");
            missing(&Engine::new(&with), t)
                .map(|l| format!("candidate {} plus `{}` misses `{}`", i + 1, show(phi), show(&l)))
        }),
    ));

    results.push(if !modular {
        PostulateResult::new(Postulate::ModularityPreservation, Verdict::PreconditionUnmet)
    } else {
        PostulateResult::check(
            Postulate::ModularityPreservation,
            candidates.iter().enumerate().find_map(|(i, c)| {
                let r = is_modular(&c.theory);
                r.implicit_laws
                    .first()
                    .map(|f| format!("candidate {} has implicit static law `{}`", i + 1, f.display(sig)))
            }),
        )
    });

    Ok(PostulateReport { results, candidates })
}

fn laws_equivalent(t: &ActionTheory, a: &Law, b: &Law) -> bool {
    theory_equivalent(&law_theory(t, a), &law_theory(t, b))
}

/// Equivalent modular theories contracted by equivalent laws give pairwise
/// equivalent candidates. Preconditions: both theories modular, the theories
/// equivalent and the laws equivalent.
pub fn check_equivalences(
    t1: &ActionTheory,
    t2: &ActionTheory,
    phi1: &Law,
    phi2: &Law,
) -> Result<PostulateResult, ContractError> {
    phi1.check(t1.sig())?;
    phi2.check(t2.sig())?;
    let unmet = PostulateResult::new(Postulate::Equivalences, Verdict::PreconditionUnmet);
    if !is_modular(t1).modular || !is_modular(t2).modular {
        return Ok(unmet);
    }
    if !theory_equivalent(t1, t2) || !laws_equivalent(t1, phi1, phi2) {
        return Ok(unmet);
    }
    let opts = ContractOptions::default();
    let c1 = contract(t1, phi2, &opts)?;
    let c2 = contract(t2, phi1, &opts)?;
    let unpaired = |xs: &[Candidate], ys: &[Candidate]| {
        xs.iter().position(|x| !ys.iter().any(|y| theory_equivalent(&x.theory, &y.theory)))
    };
    let failure = match (unpaired(&c1, &c2), unpaired(&c2, &c1)) {
        (Some(i), _) => Some(format!("candidate {} of the first theory has no equivalent in the second", i + 1)),
        (None, Some(i)) => Some(format!("candidate {} of the second theory has no equivalent in the first", i + 1)),
        (None, None) => None,
    };
    Ok(PostulateResult::check(Postulate::Equivalences, failure))
}

fn all_models(outcome: crate::model_change::ChangeOutcome) -> ModelSet {
    outcome.results.into_iter().flat_map(|r| r.models).collect()
}

/// Semantic disjunctive rule: contracting from the union of two model sets
/// yields the same models as contracting from each and taking the union.
pub fn check_disjunctive(m1: &ModelSet, m2: &ModelSet, phi: &Law) -> Result<PostulateResult, ChangeError> {
    let union: ModelSet = m1.union(m2).cloned().collect();
    let left = all_models(contract_model_set(&union, phi)?);
    let mut right = all_models(contract_model_set(m1, phi)?);
    right.extend(all_models(contract_model_set(m2, phi)?));
    let failure = if left == right {
        None
    } else {
        let extra = left.symmetric_difference(&right).count();
        Some(format!("{extra} models differ between the two sides"))
    };
    Ok(PostulateResult::check(Postulate::Disjunctive, failure))
}
