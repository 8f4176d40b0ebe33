use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::KripkeModel;
use crate::formula::{Signature, Valuation};

/// Wire form of a model: worlds as full literal lists in canonical order,
/// arrows as index pairs into that list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub worlds: Vec<Vec<String>>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelJsonError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("world {index} assigns atom `{atom}` twice")]
    Repeated { index: usize, atom: String },
    #[error("world {index} leaves atom `{atom}` unassigned")]
    Partial { index: usize, atom: String },
    #[error("worlds {0} and {1} have the same valuation")]
    DuplicateWorld(usize, usize),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("world index {0} out of range")]
    Index(usize),
}

impl ModelJson {
    pub fn from_model(m: &KripkeModel, sig: &Signature) -> Self {
        let worlds: Vec<Valuation> = m.worlds().collect();
        let index = |v: &Valuation| worlds.binary_search(v).expect("arrow endpoint is a world");
        let relations = sig
            .all_actions()
            .map(|a| {
                let pairs = m.arrows(a).iter().map(|(u, v)| [index(u), index(v)]).collect();
                (sig.action_name(a).to_string(), pairs)
            })
            .collect();
        ModelJson {
            worlds: worlds
                .iter()
                .map(|w| w.literals(sig.atom_count()).map(|l| l.display(sig).to_string()).collect())
                .collect(),
            relations,
        }
    }

    pub fn to_model(&self, sig: &Signature) -> Result<KripkeModel, ModelJsonError> {
        let mut m = KripkeModel::for_signature(sig);
        let mut vals = Vec::with_capacity(self.worlds.len());
        for (index, lits) in self.worlds.iter().enumerate() {
            let mut assigned = 0u32;
            let mut v = Valuation(0);
            for lit in lits {
                let (name, positive) = match lit.strip_prefix('~') {
                    Some(rest) => (rest.trim(), false),
                    None => (lit.trim(), true),
                };
                let atom = sig.atom(name).ok_or_else(|| ModelJsonError::UnknownAtom(name.to_string()))?;
                if assigned & atom.bit() != 0 {
                    return Err(ModelJsonError::Repeated { index, atom: name.to_string() });
                }
                assigned |= atom.bit();
                v = v.with(atom, positive);
            }
            if let Some(missing) = sig.all_atoms().find(|a| assigned & a.bit() == 0) {
                return Err(ModelJsonError::Partial { index, atom: sig.atom_name(missing).to_string() });
            }
            if let Some(prev) = vals.iter().position(|u| *u == v) {
                return Err(ModelJsonError::DuplicateWorld(prev, index));
            }
            vals.push(v);
            m.add_world(v);
        }
        for (name, pairs) in &self.relations {
            let a = sig.action(name).ok_or_else(|| ModelJsonError::UnknownAction(name.clone()))?;
            for [i, j] in pairs {
                let from = *vals.get(*i).ok_or(ModelJsonError::Index(*i))?;
                let to = *vals.get(*j).ok_or(ModelJsonError::Index(*j))?;
                m.add_arrow(a, from, to).expect("endpoints were just added");
            }
        }
        Ok(m)
    }
}

pub fn model_to_json(m: &KripkeModel, sig: &Signature) -> serde_json::Value {
    serde_json::to_value(ModelJson::from_model(m, sig)).expect("model JSON serializes")
}

pub fn model_from_json(text: &str, sig: &Signature) -> Result<KripkeModel, ModelJsonError> {
    let raw: ModelJson = serde_json::from_str(text).map_err(|e| ModelJsonError::Syntax(e.to_string()))?;
    raw.to_model(sig)
}

/// Graphviz: one node per world labelled with its true atoms.
pub fn model_to_dot(m: &KripkeModel, sig: &Signature) -> String {
    let mut out = String::from("digraph model {\n  node [shape=ellipse];\n");
    for w in m.worlds() {
        let label: Vec<&str> = sig.all_atoms().filter(|a| w.get(*a)).map(|a| sig.atom_name(a)).collect();
        let _ = writeln!(out, "  w{} [label=\"{{{}}}\"];", w.0, label.join(", "));
    }
    for (a, u, v) in m.labelled_arrows() {
        let _ = writeln!(out, "  w{} -> w{} [label=\"{}\"];", u.0, v.0, sig.action_name(a));
    }
    out.push_str("}\n");
    out
}
