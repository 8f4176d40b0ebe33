use serde_json::{json, Value};

use crate::formula::Signature;
use crate::syntax::theory_to_json;

use super::{Candidate, Provenance};

pub fn provenance_to_json(p: &Provenance, sig: &Signature) -> Value {
    let n = sig.atom_count();
    json!({
        "unchanged": p.unchanged,
        "context": p.context.map(|c| c.term(n).display(sig).to_string()),
        "pi": p.context.map(|c| c.pi.display(sig).to_string()),
        "piPrime": p.pi_prime.map(|t| t.display(sig).to_string()),
        "kernels": p.kernels.iter().map(|k| {
            k.iter().map(|e| crate::syntax::Law::Effect(e.clone()).display(sig).to_string()).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
        "weakened": p.weakened.iter().map(|l| l.display(sig).to_string()).collect::<Vec<_>>(),
        "addedWorld": p.added_world.map(|v| v.display(sig).to_string()),
        "rawCard": p.raw_card,
    })
}

/// `{"candidates":[{"id","theory","provenance"}]}`, ids `c1`, `c2`, ...
pub fn candidates_to_json(cands: &[Candidate]) -> Value {
    json!({
        "candidates": cands.iter().enumerate().map(|(i, c)| json!({
            "id": format!("c{}", i + 1),
            "theory": theory_to_json(&c.theory),
            "provenance": provenance_to_json(&c.provenance, c.theory.sig()),
        })).collect::<Vec<_>>()
    })
}
