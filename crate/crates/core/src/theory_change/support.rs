use crate::entailment::Engine;
use crate::formula::{Action, Formula};
use crate::syntax::{ActionTheory, EffectLaw, Law, TheoryError};

/// Inclusion-minimal subsets of `E_a` that, together with the static laws,
/// entail `φ → [a]ψ`. Enumerated by increasing size; supersets of a found
/// kernel are skipped. Each kernel keeps the theory's law order.
pub fn support_sets(
    t: &ActionTheory,
    a: Action,
    phi: &Formula,
    psi: &Formula,
) -> Result<Vec<Vec<EffectLaw>>, TheoryError> {
    let target = Law::Effect(EffectLaw::new(phi.clone(), a, psi.clone()));
    target.check(t.sig())?;
    let (ea, _) = t.laws_for_action(a)?;
    let k = ea.len();
    let mut found: Vec<u64> = Vec::new();
    for size in 0..=k {
        for mask in (0u64..1 << k).filter(|m| m.count_ones() as usize == size) {
            if found.iter().any(|f| f & mask == *f) {
                continue;
            }
            let mut sub = t.statics_only();
            for (i, e) in ea.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sub.add(Law::Effect(e.clone()))?;
                }
            }
            if Engine::new(&sub).holds(&target) {
                found.push(mask);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|mask| ea.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, e)| e.clone()).collect())
        .collect())
}
