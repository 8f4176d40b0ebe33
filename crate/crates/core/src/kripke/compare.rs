use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::KripkeModel;
use crate::formula::{Action, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closeness {
    /// Set inclusion on world differences, then on arrow differences.
    #[default]
    SubsetLex,
    /// Sizes of the same differences, compared lexicographically.
    CardinalityLex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Closer,
    Farther,
    Equal,
    Incomparable,
}

/// Closeness to a fixed base model.
#[derive(Debug, Clone)]
pub struct Comparator<'a> {
    pub kind: Closeness,
    pub base: &'a KripkeModel,
}

type Diff = (BTreeSet<Valuation>, BTreeSet<(Action, Valuation, Valuation)>);

impl<'a> Comparator<'a> {
    pub fn new(kind: Closeness, base: &'a KripkeModel) -> Self {
        Comparator { kind, base }
    }

    fn diff(&self, m: &KripkeModel) -> Diff {
        let worlds = self.base.worlds.symmetric_difference(&m.worlds).copied().collect();
        let a: BTreeSet<_> = self.base.labelled_arrows().collect();
        let b: BTreeSet<_> = m.labelled_arrows().collect();
        (worlds, a.symmetric_difference(&b).copied().collect())
    }

    /// Is `x` at least as close to the base as `y`?
    fn at_least_as_close(&self, x: &Diff, y: &Diff) -> bool {
        match self.kind {
            // the first clause is strict: equal world differences fall through
            // to the arrow comparison
            Closeness::SubsetLex => {
                (x.0.is_subset(&y.0) && x.0 != y.0) || (x.0 == y.0 && x.1.is_subset(&y.1))
            }
            Closeness::CardinalityLex => {
                (x.0.len(), x.1.len()).cmp(&(y.0.len(), y.1.len())) != Ordering::Greater
            }
        }
    }

    pub fn compare(&self, x: &KripkeModel, y: &KripkeModel) -> Comparison {
        let (dx, dy) = (self.diff(x), self.diff(y));
        match (self.at_least_as_close(&dx, &dy), self.at_least_as_close(&dy, &dx)) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Closer,
            (false, true) => Comparison::Farther,
            (false, false) => Comparison::Incomparable,
        }
    }
}

/// Candidates with no strictly closer candidate, in canonical order.
pub fn minimal_under<'m, I>(candidates: I, cmp: &Comparator<'_>) -> Vec<KripkeModel>
where
    I: IntoIterator<Item = &'m KripkeModel>,
{
    let uniq: BTreeSet<&KripkeModel> = candidates.into_iter().collect();
    let diffs: Vec<(&KripkeModel, Diff)> = uniq.into_iter().map(|m| (m, cmp.diff(m))).collect();
    diffs
        .iter()
        .filter(|(_, d)| {
            !diffs.iter().any(|(_, e)| cmp.at_least_as_close(e, d) && !cmp.at_least_as_close(d, e))
        })
        .map(|(m, _)| (*m).clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> KripkeModel {
        let mut m = KripkeModel::new(1, 1).with_worlds([Valuation(0), Valuation(1)]);
        for (u, v) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            m.add_arrow(Action(0), Valuation(u), Valuation(v)).unwrap();
        }
        m
    }

    #[test]
    fn one_versus_two_removed_arrows() {
        let m = base();
        let mut one = m.clone();
        one.remove_arrow(Action(0), Valuation(0), Valuation(0));
        let mut two = m.clone();
        two.strip(Action(0), Valuation(1));
        let subset = Comparator::new(Closeness::SubsetLex, &m);
        let card = Comparator::new(Closeness::CardinalityLex, &m);
        assert_eq!(subset.compare(&one, &two), Comparison::Incomparable);
        assert_eq!(card.compare(&one, &two), Comparison::Closer);
        assert_eq!(minimal_under([&one, &two], &subset).len(), 2);
        assert_eq!(minimal_under([&one, &two], &card), vec![one.clone()]);
        assert_eq!(subset.compare(&m, &one), Comparison::Closer);
        assert_eq!(subset.compare(&one, &one), Comparison::Equal);
    }

    #[test]
    fn chain_keeps_least() {
        let m = base();
        let mut a = m.clone();
        a.remove_arrow(Action(0), Valuation(0), Valuation(0));
        let mut b = a.clone();
        b.remove_arrow(Action(0), Valuation(0), Valuation(1));
        let mut c = b.clone();
        c.remove_arrow(Action(0), Valuation(1), Valuation(1));
        let cmp = Comparator::new(Closeness::SubsetLex, &m);
        assert_eq!(minimal_under([&c, &a, &b], &cmp), vec![a]);
    }
}
