use std::fmt;

use super::{KripkeModel, ModelError};
use crate::formula::{Action, Formula, Signature, Valuation};
use crate::syntax::{ActionTheory, Law};

/// A K_n formula with arbitrary nesting; Boolean subformulas sit in `Prop`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Modal {
    Prop(Formula),
    Not(Box<Modal>),
    And(Box<Modal>, Box<Modal>),
    Or(Box<Modal>, Box<Modal>),
    Xor(Box<Modal>, Box<Modal>),
    Implies(Box<Modal>, Box<Modal>),
    Iff(Box<Modal>, Box<Modal>),
    /// `[a]Φ`
    Necessarily(Action, Box<Modal>),
    /// `⟨a⟩Φ`
    Possibly(Action, Box<Modal>),
}

impl Modal {
    /// The Boolean formula this denotes, if it has no modal operator.
    pub fn as_prop(&self) -> Option<Formula> {
        let bin = |a: &Modal, b: &Modal| Some((a.as_prop()?, b.as_prop()?));
        Some(match self {
            Modal::Prop(f) => f.clone(),
            Modal::Not(m) => Formula::not(m.as_prop()?),
            Modal::And(a, b) => bin(a, b).map(|(a, b)| Formula::and(a, b))?,
            Modal::Or(a, b) => bin(a, b).map(|(a, b)| Formula::or(a, b))?,
            Modal::Xor(a, b) => bin(a, b).map(|(a, b)| Formula::xor(a, b))?,
            Modal::Implies(a, b) => bin(a, b).map(|(a, b)| Formula::implies(a, b))?,
            Modal::Iff(a, b) => bin(a, b).map(|(a, b)| Formula::iff(a, b))?,
            Modal::Necessarily(..) | Modal::Possibly(..) => return None,
        })
    }

    pub fn from_law(law: &Law) -> Modal {
        let p = |f: &Formula| Box::new(Modal::Prop(f.clone()));
        match law {
            Law::Static(f) => Modal::Prop(f.clone()),
            Law::Effect(e) => Modal::Implies(p(&e.pre), Box::new(Modal::Necessarily(e.action, p(&e.post)))),
            Law::Exec(x) => Modal::Implies(p(&x.pre), Box::new(Modal::Possibly(x.action, p(&Formula::True)))),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Modal, &'a Signature);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let s = self.1;
                match self.0 {
                    Modal::Prop(p) => write!(f, "({})", p.display(s)),
                    Modal::Not(m) => write!(f, "~{}", D(m, s)),
                    Modal::And(a, b) => write!(f, "({} & {})", D(a, s), D(b, s)),
                    Modal::Or(a, b) => write!(f, "({} | {})", D(a, s), D(b, s)),
                    Modal::Xor(a, b) => write!(f, "({} ^ {})", D(a, s), D(b, s)),
                    Modal::Implies(a, b) => write!(f, "({} -> {})", D(a, s), D(b, s)),
                    Modal::Iff(a, b) => write!(f, "({} <-> {})", D(a, s), D(b, s)),
                    Modal::Necessarily(a, m) => write!(f, "[{}]{}", s.action_name(*a), D(m, s)),
                    Modal::Possibly(a, m) => write!(f, "<{}>{}", s.action_name(*a), D(m, s)),
                }
            }
        }
        D(self, sig)
    }
}

/// Truth of `phi` at world `w` of `m`.
pub fn eval(m: &KripkeModel, w: Valuation, phi: &Modal) -> Result<bool, ModelError> {
    if !m.contains(w) {
        return Err(ModelError::WorldNotInModel(w));
    }
    Ok(eval_at(m, w, phi))
}

fn eval_at(m: &KripkeModel, w: Valuation, phi: &Modal) -> bool {
    match phi {
        Modal::Prop(f) => f.eval(w),
        Modal::Not(x) => !eval_at(m, w, x),
        Modal::And(a, b) => eval_at(m, w, a) && eval_at(m, w, b),
        Modal::Or(a, b) => eval_at(m, w, a) || eval_at(m, w, b),
        Modal::Xor(a, b) => eval_at(m, w, a) != eval_at(m, w, b),
        Modal::Implies(a, b) => !eval_at(m, w, a) || eval_at(m, w, b),
        Modal::Iff(a, b) => eval_at(m, w, a) == eval_at(m, w, b),
        Modal::Necessarily(a, x) => m.successors(*a, w).all(|v| eval_at(m, v, x)),
        Modal::Possibly(a, x) => m.successors(*a, w).any(|v| eval_at(m, v, x)),
    }
}

/// True at every world; vacuously true on the empty model.
pub fn holds_globally(m: &KripkeModel, phi: &Modal) -> bool {
    m.worlds().all(|w| eval_at(m, w, phi))
}

/// Worlds at which the law fails.
pub fn law_violations(m: &KripkeModel, law: &Law) -> Vec<Valuation> {
    m.worlds().filter(|w| !law_holds_at(m, *w, law)).collect()
}

pub(crate) fn law_holds_at(m: &KripkeModel, w: Valuation, law: &Law) -> bool {
    match law {
        Law::Static(f) => f.eval(w),
        Law::Effect(e) => !e.pre.eval(w) || m.successors(e.action, w).all(|v| e.post.eval(v)),
        Law::Exec(x) => !x.pre.eval(w) || m.has_successor(x.action, w),
    }
}

pub fn law_holds(m: &KripkeModel, law: &Law) -> bool {
    m.worlds().all(|w| law_holds_at(m, w, law))
}

pub fn is_model_of(m: &KripkeModel, t: &ActionTheory) -> bool {
    t.laws().iter().all(|l| law_holds(m, l))
}
