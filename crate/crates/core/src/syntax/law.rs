use std::fmt;

use thiserror::Error;

use crate::formula::{models_of, Action, Formula, Signature, ValSet};

/// `pre → [action] post`; an inexecutability law when `post` is `⊥`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EffectLaw {
    pub pre: Formula,
    pub action: Action,
    pub post: Formula,
}

/// `pre → ⟨action⟩⊤`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExecLaw {
    pub pre: Formula,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    Static(Formula),
    Effect(EffectLaw),
    Exec(ExecLaw),
}

impl EffectLaw {
    pub fn new(pre: Formula, action: Action, post: Formula) -> Self {
        EffectLaw { pre, action, post }
    }

    pub fn is_inexecutability(&self) -> bool {
        self.post == Formula::False
    }
}

impl ExecLaw {
    pub fn new(pre: Formula, action: Action) -> Self {
        ExecLaw { pre, action }
    }
}

impl From<EffectLaw> for Law {
    fn from(l: EffectLaw) -> Self {
        Law::Effect(l)
    }
}

impl From<ExecLaw> for Law {
    fn from(l: ExecLaw) -> Self {
        Law::Exec(l)
    }
}

impl Law {
    pub fn action(&self) -> Option<Action> {
        match self {
            Law::Static(_) => None,
            Law::Effect(e) => Some(e.action),
            Law::Exec(x) => Some(x.action),
        }
    }

    pub fn shape(&self) -> &'static str {
        match self {
            Law::Static(_) => "static",
            Law::Effect(_) => "effect",
            Law::Exec(_) => "exec",
        }
    }

    pub fn formulas(&self) -> Vec<&Formula> {
        match self {
            Law::Static(f) => vec![f],
            Law::Effect(e) => vec![&e.pre, &e.post],
            Law::Exec(x) => vec![&x.pre],
        }
    }

    /// Text form, in the theory-file grammar.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> LawDisplay<'a> {
        LawDisplay { law: self, sig }
    }

    pub fn check(&self, sig: &Signature) -> Result<(), TheoryError> {
        if let Some(a) = self.action() {
            if a.index() >= sig.action_count() {
                return Err(TheoryError::UnknownAction(a.0));
            }
        }
        if self.formulas().iter().any(|f| f.atom_mask() & !sig.atom_mask() != 0) {
            return Err(TheoryError::UnknownAtom);
        }
        Ok(())
    }
}

pub struct LawDisplay<'a> {
    law: &'a Law,
    sig: &'a Signature,
}

impl fmt::Display for LawDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.sig;
        match self.law {
            Law::Static(phi) => write!(f, "static {}", phi.display(s)),
            Law::Effect(e) => write!(
                f,
                "effect {} => [{}] {}",
                e.pre.display(s),
                s.action_name(e.action),
                e.post.display(s)
            ),
            Law::Exec(x) => write!(f, "exec {} => <{}>", x.pre.display(s), s.action_name(x.action)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("action index {0} outside the signature")]
    UnknownAction(u8),
    #[error("law mentions atoms outside the signature")]
    UnknownAtom,
}

/// A signature plus static, effect and executability laws. Laws are
/// deduplicated and kept in canonical order: statics, then effect laws grouped
/// by action, then executability laws grouped by action.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionTheory {
    name: String,
    sig: Signature,
    statics: Vec<Formula>,
    effects: Vec<EffectLaw>,
    execs: Vec<ExecLaw>,
}

impl ActionTheory {
    pub fn new(name: impl Into<String>, sig: Signature) -> Self {
        ActionTheory { name: name.into(), sig, statics: vec![], effects: vec![], execs: vec![] }
    }

    pub fn from_laws<I: IntoIterator<Item = Law>>(
        name: impl Into<String>,
        sig: Signature,
        laws: I,
    ) -> Result<Self, TheoryError> {
        let mut t = ActionTheory::new(name, sig);
        for l in laws {
            t.add(l)?;
        }
        Ok(t)
    }

    /// Adds a law; returns false if it was already present.
    pub fn add(&mut self, law: Law) -> Result<bool, TheoryError> {
        law.check(&self.sig)?;
        if self.contains(&law) {
            return Ok(false);
        }
        match law {
            Law::Static(f) => self.statics.push(f),
            Law::Effect(e) => {
                let at = self.effects.iter().position(|x| x.action > e.action).unwrap_or(self.effects.len());
                self.effects.insert(at, e);
            }
            Law::Exec(x) => {
                let at = self.execs.iter().position(|y| y.action > x.action).unwrap_or(self.execs.len());
                self.execs.insert(at, x);
            }
        }
        Ok(true)
    }

    pub fn remove(&mut self, law: &Law) -> bool {
        let before = self.card();
        match law {
            Law::Static(f) => self.statics.retain(|g| g != f),
            Law::Effect(e) => self.effects.retain(|g| g != e),
            Law::Exec(x) => self.execs.retain(|g| g != x),
        }
        self.card() != before
    }

    pub fn contains(&self, law: &Law) -> bool {
        match law {
            Law::Static(f) => self.statics.contains(f),
            Law::Effect(e) => self.effects.contains(e),
            Law::Exec(x) => self.execs.contains(x),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn statics(&self) -> &[Formula] {
        &self.statics
    }

    pub fn effects(&self) -> &[EffectLaw] {
        &self.effects
    }

    pub fn execs(&self) -> &[ExecLaw] {
        &self.execs
    }

    /// All laws in canonical order.
    pub fn laws(&self) -> Vec<Law> {
        self.statics
            .iter()
            .cloned()
            .map(Law::Static)
            .chain(self.effects.iter().cloned().map(Law::Effect))
            .chain(self.execs.iter().cloned().map(Law::Exec))
            .collect()
    }

    /// Number of laws.
    pub fn card(&self) -> usize {
        self.statics.len() + self.effects.len() + self.execs.len()
    }

    pub fn effects_for(&self, a: Action) -> impl Iterator<Item = &EffectLaw> {
        self.effects.iter().filter(move |e| e.action == a)
    }

    pub fn execs_for(&self, a: Action) -> impl Iterator<Item = &ExecLaw> {
        self.execs.iter().filter(move |x| x.action == a)
    }

    /// `(E_a, X_a)`.
    pub fn laws_for_action(&self, a: Action) -> Result<(Vec<EffectLaw>, Vec<ExecLaw>), TheoryError> {
        if a.index() >= self.sig.action_count() {
            return Err(TheoryError::UnknownAction(a.0));
        }
        Ok((self.effects_for(a).cloned().collect(), self.execs_for(a).cloned().collect()))
    }

    /// Actions mentioned by at least one effect or executability law.
    pub fn actions_with_laws(&self) -> Vec<Action> {
        self.sig
            .all_actions()
            .filter(|a| self.effects_for(*a).next().is_some() || self.execs_for(*a).next().is_some())
            .collect()
    }

    /// `val(S)`.
    pub fn static_models(&self) -> ValSet {
        models_of(&self.statics, &self.sig).expect("laws are checked against the signature")
    }

    /// Same signature and name, no laws.
    pub fn empty_like(&self) -> ActionTheory {
        ActionTheory::new(self.name.clone(), self.sig.clone())
    }

    /// The theory restricted to its static laws.
    pub fn statics_only(&self) -> ActionTheory {
        ActionTheory { statics: self.statics.clone(), ..self.empty_like() }
    }

    pub fn replace_statics(&mut self, statics: Vec<Formula>) {
        self.statics.clear();
        for f in statics {
            if !self.statics.contains(&f) {
                self.statics.push(f);
            }
        }
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&Law) -> bool) {
        self.statics.retain(|f| keep(&Law::Static(f.clone())));
        self.effects.retain(|e| keep(&Law::Effect(e.clone())));
        self.execs.retain(|x| keep(&Law::Exec(x.clone())));
    }

    /// Theory-file text; `parse_theory` reads it back to an equal theory.
    pub fn render(&self) -> String {
        let mut out = format!("theory {}\n", self.name);
        out.push_str(&format!("atoms {}\n", self.sig.atoms().join(", ")));
        out.push_str(&format!("actions {}\n", self.sig.actions().join(", ")));
        for l in self.laws() {
            out.push_str(&format!("{}\n", l.display(&self.sig)));
        }
        out
    }
}

impl fmt::Display for ActionTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A single law or a non-empty conjunction of laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    laws: Vec<Law>,
}

impl Query {
    pub fn law(law: Law) -> Self {
        Query { laws: vec![law] }
    }

    /// `None` for an empty conjunction.
    pub fn all(laws: Vec<Law>) -> Option<Self> {
        if laws.is_empty() {
            None
        } else {
            Some(Query { laws })
        }
    }

    pub fn laws(&self) -> &[Law] {
        &self.laws
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Query, &'a Signature);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for (i, l) in self.0.laws.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{}", l.display(self.1))?;
                }
                Ok(())
            }
        }
        D(self, sig)
    }
}

impl From<Law> for Query {
    fn from(l: Law) -> Self {
        Query::law(l)
    }
}
