//! Syntactic contraction of action theories: one candidate theory per
//! excluded context (plus per `π′` for effect laws, per added valuation for
//! static laws), with provenance for the knowledge engineer.

mod compile;
mod json;
mod support;

use thiserror::Error;

use crate::entailment::Engine;
use crate::formula::{
    prime_implicants_of, Action, ClassicalContraction, ClassicalError, Formula, Maxichoice, Term, ValSet, Valuation,
};
use crate::syntax::{ActionTheory, EffectLaw, ExecLaw, Law, TheoryError};

pub use compile::{theory_from_model_set, CompileError};
pub use json::{candidates_to_json, provenance_to_json};
pub use support::support_sets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContractOptions {
    /// Merge the frame-preservation laws of a candidate into one law.
    pub factor_frame_laws: bool,
    /// Constant-fold formulas and drop laws the static laws already entail.
    pub simplify: bool,
}

impl Default for ContractOptions {
    fn default() -> Self {
        ContractOptions { factor_frame_laws: false, simplify: true }
    }
}

/// A valuation allowed by `S ∧ φ`, reached by extending the prime implicant
/// `pi` with `completion` over the atoms `pi` does not mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    pub pi: Term,
    pub completion: Term,
    pub valuation: Valuation,
}

impl Context {
    pub fn term(&self, atoms: usize) -> Term {
        self.valuation.term(atoms)
    }
}

/// Why a candidate looks the way it does.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    /// The candidate is the input theory, unchanged.
    pub unchanged: bool,
    pub context: Option<Context>,
    pub pi_prime: Option<Term>,
    pub kernels: Vec<Vec<EffectLaw>>,
    /// Laws of the input that were replaced by weaker versions.
    pub weakened: Vec<Law>,
    /// Static contraction: the valuation let back in.
    pub added_world: Option<Valuation>,
    /// Number of laws before simplification, with the static laws of a
    /// static contraction counted as one.
    pub raw_card: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub theory: ActionTheory,
    pub provenance: Provenance,
}

fn unchanged(t: &ActionTheory) -> Vec<Candidate> {
    vec![Candidate {
        theory: t.clone(),
        provenance: Provenance { unchanged: true, raw_card: t.card(), ..Provenance::default() },
    }]
}

/// Valuations of `S ∧ φ`, each once, in the order the prime implicants of
/// `S ∧ φ` and their completions enumerate them.
pub fn contexts(t: &ActionTheory, phi: &Formula) -> Vec<Context> {
    let n = t.sig().atom_count();
    let allowed = t.static_models().and(&phi.models(n));
    let full = t.sig().atom_mask();
    let mut seen = ValSet::empty(n);
    let mut out = Vec::new();
    for pi in prime_implicants_of(&allowed) {
        let free = full & !pi.mask();
        // completions in increasing order of the assigned bits
        let mut bits = 0u32;
        loop {
            let completion = Term::from_parts(free, bits);
            let v = Valuation(pi.bits() | bits);
            if allowed.contains(v) && seen.insert(v) {
                out.push(Context { pi, completion, valuation: v });
            }
            if bits == free {
                break;
            }
            bits = (bits.wrapping_sub(free)) & free;
        }
    }
    out
}

/// Routes by law shape; inexecutability laws are effect laws.
pub fn contract(t: &ActionTheory, law: &Law, opts: &ContractOptions) -> Result<Vec<Candidate>, ContractError> {
    match law {
        Law::Static(phi) => contract_static(t, phi, opts),
        Law::Effect(e) => contract_effect(t, e, opts),
        Law::Exec(x) => contract_executability(t, x, opts),
    }
}

/// Weakens the action's executability laws so that it becomes inexecutable
/// in exactly one context of the antecedent.
pub fn contract_executability(
    t: &ActionTheory,
    law: &ExecLaw,
    opts: &ContractOptions,
) -> Result<Vec<Candidate>, ContractError> {
    let l = Law::Exec(law.clone());
    l.check(t.sig())?;
    let n = t.sig().atom_count();
    let engine = Engine::new(t);
    if !engine.holds(&l) || !t.static_models().intersects(&law.pre.models(n)) {
        return Ok(unchanged(t));
    }
    let xa: Vec<ExecLaw> = t.execs_for(law.action).cloned().collect();
    Ok(contexts(t, &law.pre)
        .into_iter()
        .map(|ctx| {
            let c = ctx.term(n).to_formula();
            let mut out = t.clone();
            for x in &xa {
                out.remove(&Law::Exec(x.clone()));
            }
            for x in &xa {
                let pre = Formula::and(x.pre.clone(), Formula::not(c.clone()));
                out.add(Law::Exec(ExecLaw::new(pre, law.action))).expect("same signature");
            }
            let raw_card = out.card();
            Candidate {
                theory: finish(out, opts),
                provenance: Provenance {
                    context: Some(ctx),
                    weakened: xa.iter().cloned().map(Law::Exec).collect(),
                    raw_card,
                    ..Provenance::default()
                },
            }
        })
        .collect())
}

/// Weakens the support sets of the law in one context of its antecedent and
/// lets `π′` (one prime implicant of `S ∧ ¬ψ`) become reachable there.
pub fn contract_effect(
    t: &ActionTheory,
    law: &EffectLaw,
    opts: &ContractOptions,
) -> Result<Vec<Candidate>, ContractError> {
    let l = Law::Effect(law.clone());
    l.check(t.sig())?;
    let n = t.sig().atom_count();
    let s = t.static_models();
    let engine = Engine::new(t);
    let neg_post = s.minus(&law.post.models(n));
    if !engine.holds(&l) || !s.intersects(&law.pre.models(n)) || neg_post.is_empty() {
        return Ok(unchanged(t));
    }
    let a = law.action;
    let kernels = support_sets(t, a, &law.pre, &law.post)?;
    let mut removed: Vec<EffectLaw> = Vec::new();
    for k in &kernels {
        for e in k {
            if !removed.contains(e) {
                removed.push(e.clone());
            }
        }
    }
    // keep theory order
    removed.sort_by_key(|e| t.effects().iter().position(|x| x == e));
    let pi_primes = prime_implicants_of(&neg_post);
    let mut out = Vec::new();
    for ctx in contexts(t, &law.pre) {
        let c = ctx.term(n);
        for pi_prime in &pi_primes {
            let mut th = t.clone();
            for e in &removed {
                th.remove(&Law::Effect(e.clone()));
            }
            for e in &removed {
                let pre = Formula::and(e.pre.clone(), Formula::not(c.to_formula()));
                th.add(EffectLaw::new(pre, a, e.post.clone()).into()).expect("same signature");
            }
            for e in &removed {
                let pre = Formula::and(e.pre.clone(), c.to_formula());
                let post = Formula::or(e.post.clone(), pi_prime.to_formula());
                th.add(EffectLaw::new(pre, a, post).into()).expect("same signature");
            }
            let frame = frame_literals(&engine, &s, a, &c, pi_prime);
            let frame_laws: Vec<EffectLaw> = if opts.factor_frame_laws && !frame.is_empty() {
                let post = Formula::or(law.post.clone(), Formula::conj(frame.iter().map(|l| l.to_formula())));
                vec![EffectLaw::new(c.to_formula(), a, post)]
            } else {
                frame
                    .iter()
                    .map(|l| EffectLaw::new(c.to_formula(), a, Formula::or(law.post.clone(), l.to_formula())))
                    .collect()
            };
            for f in frame_laws {
                th.add(f.into()).expect("same signature");
            }
            let raw_card = th.card();
            out.push(Candidate {
                theory: finish(th, opts),
                provenance: Provenance {
                    context: Some(ctx),
                    pi_prime: Some(*pi_prime),
                    kernels: kernels.clone(),
                    weakened: removed.iter().cloned().map(Law::Effect).collect(),
                    raw_card,
                    ..Provenance::default()
                },
            });
        }
    }
    Ok(out)
}

/// Literals `ℓ` of the context that get a frame-preservation law: some
/// `L ⊆ Lit` containing `ℓ` is true in the context and compatible with `π′`
/// under `S`, and either `ℓ ∈ π′` or the theory does not force `¬ℓ` after
/// the action from the context.
fn frame_literals(
    engine: &Engine<'_>,
    s: &ValSet,
    a: Action,
    ctx: &Term,
    pi_prime: &Term,
) -> Vec<crate::formula::Literal> {
    let n = s.atoms();
    let lits: Vec<crate::formula::Literal> = ctx.literals().collect();
    let mut chosen: Vec<crate::formula::Literal> = Vec::new();
    for pick in 0u32..1 << lits.len() {
        let l_set: Vec<_> = lits.iter().enumerate().filter(|(i, _)| pick & (1 << i) != 0).map(|(_, l)| *l).collect();
        let Some(with_pi) = Term::from_literals(l_set.iter().copied().chain(pi_prime.literals())) else {
            continue;
        };
        if !with_pi.cube(n).intersects(s) {
            continue;
        }
        for l in l_set {
            if chosen.contains(&l) {
                continue;
            }
            let forced = EffectLaw::new(ctx.to_formula(), a, l.negate().to_formula());
            if pi_prime.contains(l) || !engine.holds(&Law::Effect(forced)) {
                chosen.push(l);
            }
        }
    }
    chosen.sort();
    chosen
}

/// Contracts the static laws with the model-based maxichoice operator.
pub fn contract_static(
    t: &ActionTheory,
    phi: &Formula,
    opts: &ContractOptions,
) -> Result<Vec<Candidate>, ContractError> {
    contract_static_with(t, phi, &Maxichoice, opts)
}

/// Replaces `S` by each `S ⊖ φ`; every action with laws keeps its
/// executability only where `φ` holds and becomes inexecutable where it fails.
pub fn contract_static_with<C: ClassicalContraction>(
    t: &ActionTheory,
    phi: &Formula,
    op: &C,
    opts: &ContractOptions,
) -> Result<Vec<Candidate>, ContractError> {
    Law::Static(phi.clone()).check(t.sig())?;
    let n = t.sig().atom_count();
    if phi.models(n).is_full() {
        return Err(ClassicalError::Tautology.into());
    }
    if !t.static_models().is_subset(&phi.models(n)) {
        return Ok(unchanged(t));
    }
    let actions = t.actions_with_laws();
    let results = op.contract(t.statics(), phi, t.sig())?;
    Ok(results
        .into_iter()
        .map(|r| {
            let mut th = t.clone();
            th.replace_statics(r.statics);
            let mut weakened = Vec::new();
            for &a in &actions {
                let xa: Vec<ExecLaw> = t.execs_for(a).cloned().collect();
                for x in &xa {
                    th.remove(&Law::Exec(x.clone()));
                    weakened.push(Law::Exec(x.clone()));
                }
                for x in &xa {
                    th.add(ExecLaw::new(Formula::and(x.pre.clone(), phi.clone()), a).into()).expect("same signature");
                }
                th.add(EffectLaw::new(Formula::not(phi.clone()), a, Formula::False).into()).expect("same signature");
            }
            let raw = th.card() - th.statics().len() + 1;
            Candidate {
                theory: finish(th, opts),
                provenance: Provenance { weakened, added_world: r.added, raw_card: raw, ..Provenance::default() },
            }
        })
        .collect())
}

fn finish(t: ActionTheory, opts: &ContractOptions) -> ActionTheory {
    if opts.simplify {
        simplify_theory(&t)
    } else {
        t
    }
}

/// Constant-folds every formula and drops laws that hold in every state the
/// static laws allow: statics equal to `⊤`, effect laws whose antecedent is
/// impossible or whose consequent always holds, executability laws whose
/// antecedent is impossible.
pub fn simplify_theory(t: &ActionTheory) -> ActionTheory {
    let n = t.sig().atom_count();
    let mut out = t.empty_like();
    out.replace_statics(t.statics().iter().map(Formula::simplify).filter(|f| *f != Formula::True).collect());
    let s = out.static_models();
    for e in t.effects() {
        let (pre, post) = (e.pre.simplify(), e.post.simplify());
        if s.intersects(&pre.models(n)) && !s.is_subset(&post.models(n)) {
            out.add(EffectLaw::new(pre, e.action, post).into()).expect("same signature");
        }
    }
    for x in t.execs() {
        let pre = x.pre.simplify();
        if s.intersects(&pre.models(n)) {
            out.add(ExecLaw::new(pre, x.action).into()).expect("same signature");
        }
    }
    out
}
