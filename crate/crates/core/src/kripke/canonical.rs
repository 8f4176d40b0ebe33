use super::KripkeModel;
use crate::formula::{Action, ValSet, Valuation};
use crate::syntax::ActionTheory;

/// Effect laws of a theory pre-evaluated as valuation sets, one row per
/// action: `(val(pre), val(post))`.
#[derive(Debug, Clone)]
pub struct EffectTable {
    atoms: usize,
    rows: Vec<Vec<(ValSet, ValSet)>>,
}

impl EffectTable {
    pub fn new(t: &ActionTheory) -> Self {
        let n = t.sig().atom_count();
        let rows = t
            .sig()
            .all_actions()
            .map(|a| t.effects_for(a).map(|e| (e.pre.models(n), e.post.models(n))).collect())
            .collect();
        EffectTable { atoms: n, rows }
    }

    /// Valuations every `a`-successor of `w` must lie in.
    pub fn allowed(&self, a: Action, w: Valuation) -> ValSet {
        let mut out = ValSet::full(self.atoms);
        for (pre, post) in &self.rows[a.index()] {
            if pre.contains(w) {
                out = out.and(post);
            }
        }
        out
    }
}

/// The model on `worlds` whose relation for each action is the largest one
/// compatible with the theory's effect laws.
pub fn maximal_model(t: &ActionTheory, worlds: &ValSet) -> KripkeModel {
    let table = EffectTable::new(t);
    let mut m = KripkeModel::for_signature(t.sig()).with_worlds(worlds.iter());
    for a in t.sig().all_actions() {
        for w in worlds.iter() {
            for v in table.allowed(a, w).and(worlds).iter() {
                m.add_arrow(a, w, v).expect("endpoints are worlds");
            }
        }
    }
    m
}

/// `W = val(S)` with the maximal relation.
pub fn canonical_frame(t: &ActionTheory) -> KripkeModel {
    maximal_model(t, &t.static_models())
}
