use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::law::{ActionTheory, EffectLaw, ExecLaw, Law};
use super::parser::{parse_formula, ParseError};
use crate::formula::{Signature, SignatureError};

/// Theory interchange format; formulas are strings in the theory grammar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryJson {
    pub name: String,
    pub atoms: Vec<String>,
    pub actions: Vec<String>,
    #[serde(rename = "static", default)]
    pub statics: Vec<String>,
    #[serde(default)]
    pub effect: Vec<EffectJson>,
    #[serde(default)]
    pub exec: Vec<ExecJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectJson {
    pub pre: String,
    pub action: String,
    pub post: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecJson {
    pub pre: String,
    pub action: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("in `{field}`: {error}")]
    Formula { field: String, error: ParseError },
}

impl TheoryJson {
    pub fn from_theory(t: &ActionTheory) -> Self {
        let sig = t.sig();
        TheoryJson {
            name: t.name().to_string(),
            atoms: sig.atoms().to_vec(),
            actions: sig.actions().to_vec(),
            statics: t.statics().iter().map(|f| f.display(sig).to_string()).collect(),
            effect: t
                .effects()
                .iter()
                .map(|e| EffectJson {
                    pre: e.pre.display(sig).to_string(),
                    action: sig.action_name(e.action).to_string(),
                    post: e.post.display(sig).to_string(),
                })
                .collect(),
            exec: t
                .execs()
                .iter()
                .map(|x| ExecJson {
                    pre: x.pre.display(sig).to_string(),
                    action: sig.action_name(x.action).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_theory(&self) -> Result<ActionTheory, JsonError> {
        let sig = Signature::new(self.atoms.clone(), self.actions.clone())?;
        let formula = |field: String, text: &str| {
            parse_formula(&sig, text).map_err(|error| JsonError::Formula { field, error })
        };
        let action = |name: &str| sig.action(name).ok_or_else(|| JsonError::UnknownAction(name.to_string()));
        let mut laws = Vec::new();
        for (i, s) in self.statics.iter().enumerate() {
            laws.push(Law::Static(formula(format!("static[{i}]"), s)?));
        }
        for (i, e) in self.effect.iter().enumerate() {
            laws.push(Law::Effect(EffectLaw {
                pre: formula(format!("effect[{i}].pre"), &e.pre)?,
                action: action(&e.action)?,
                post: formula(format!("effect[{i}].post"), &e.post)?,
            }));
        }
        for (i, x) in self.exec.iter().enumerate() {
            laws.push(Law::Exec(ExecLaw { pre: formula(format!("exec[{i}].pre"), &x.pre)?, action: action(&x.action)? }));
        }
        Ok(ActionTheory::from_laws(self.name.clone(), sig.clone(), laws).expect("laws parsed against the signature"))
    }
}

pub fn theory_to_json(t: &ActionTheory) -> serde_json::Value {
    serde_json::to_value(TheoryJson::from_theory(t)).expect("plain data serialises")
}

pub fn theory_from_json(text: &str) -> Result<ActionTheory, JsonError> {
    let raw: TheoryJson = serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    raw.to_theory()
}

pub fn theory_from_value(v: &serde_json::Value) -> Result<ActionTheory, JsonError> {
    let raw = TheoryJson::deserialize(v).map_err(|e| JsonError::Syntax(e.to_string()))?;
    raw.to_theory()
}
