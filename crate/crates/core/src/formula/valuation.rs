use std::cmp::Ordering;
use std::fmt;

use super::sig::full_mask;
use super::{Atom, Formula, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { atom, positive: true }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { atom, positive: false }
    }

    pub fn negate(self) -> Self {
        Literal { atom: self.atom, positive: !self.positive }
    }

    pub fn holds_in(self, v: Valuation) -> bool {
        v.get(self.atom) == self.positive
    }

    pub fn to_formula(self) -> Formula {
        let a = Formula::Atom(self.atom);
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }

    pub fn display<'a>(&self, sig: &'a Signature) -> LiteralDisplay<'a> {
        LiteralDisplay { lit: *self, sig }
    }

    fn key(self) -> (u8, bool) {
        (self.atom.0, !self.positive)
    }
}

// Atom order first, positive before negative.
impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct LiteralDisplay<'a> {
    lit: Literal,
    sig: &'a Signature,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.lit.positive {
            f.write_str("~")?;
        }
        f.write_str(self.sig.atom_name(self.lit.atom))
    }
}

/// A total assignment: bit `i` is the truth value of atom `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation(pub u32);

impl Valuation {
    pub fn get(self, atom: Atom) -> bool {
        self.0 & atom.bit() != 0
    }

    pub fn with(self, atom: Atom, value: bool) -> Self {
        if value {
            Valuation(self.0 | atom.bit())
        } else {
            Valuation(self.0 & !atom.bit())
        }
    }

    pub fn literal(self, atom: Atom) -> Literal {
        Literal { atom, positive: self.get(atom) }
    }

    pub fn literals(self, atoms: usize) -> impl Iterator<Item = Literal> {
        (0..atoms as u8).map(move |i| self.literal(Atom(i)))
    }

    pub fn satisfies(self, lit: Literal) -> bool {
        lit.holds_in(self)
    }

    pub fn term(self, atoms: usize) -> Term {
        Term::from_valuation(self, atoms)
    }

    pub fn display<'a>(&self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self.term(sig.atom_count()), sig, braces: true }
    }
}

/// A consistent conjunction of literals (equivalently, a subvaluation).
/// `mask` marks mentioned atoms, `bits` their polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Term {
    mask: u32,
    bits: u32,
}

pub type Subvaluation = Term;

impl Term {
    pub fn top() -> Self {
        Term::default()
    }

    pub fn from_valuation(v: Valuation, atoms: usize) -> Self {
        let mask = full_mask(atoms);
        Term { mask, bits: v.0 & mask }
    }

    pub fn from_parts(mask: u32, bits: u32) -> Self {
        Term { mask, bits: bits & mask }
    }

    /// `None` when the literals clash.
    pub fn from_literals<I: IntoIterator<Item = Literal>>(lits: I) -> Option<Self> {
        let mut t = Term::top();
        for l in lits {
            t = t.with(l)?;
        }
        Some(t)
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn mentions(&self, atom: Atom) -> bool {
        self.mask & atom.bit() != 0
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.mentions(lit.atom) && ((self.bits & lit.atom.bit() != 0) == lit.positive)
    }

    pub fn with(self, lit: Literal) -> Option<Self> {
        let b = lit.atom.bit();
        if self.mask & b != 0 {
            return if self.contains(lit) { Some(self) } else { None };
        }
        let bits = if lit.positive { self.bits | b } else { self.bits };
        Some(Term { mask: self.mask | b, bits })
    }

    pub fn without(self, atom: Atom) -> Self {
        let b = atom.bit();
        Term { mask: self.mask & !b, bits: self.bits & !b }
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        (0..32u8)
            .map(Atom)
            .filter(|a| self.mentions(*a))
            .map(|a| Literal { atom: a, positive: self.bits & a.bit() != 0 })
    }

    /// Does the valuation extend this term?
    pub fn covers(&self, v: Valuation) -> bool {
        v.0 & self.mask == self.bits
    }

    pub fn is_subset_of(&self, other: &Term) -> bool {
        self.mask & other.mask == self.mask && other.bits & self.mask == self.bits
    }

    pub fn consistent_with(&self, other: &Term) -> bool {
        let common = self.mask & other.mask;
        self.bits & common == other.bits & common
    }

    pub fn union(&self, other: &Term) -> Option<Term> {
        if !self.consistent_with(other) {
            return None;
        }
        Some(Term { mask: self.mask | other.mask, bits: self.bits | other.bits })
    }

    /// All valuations over `atoms` atoms extending this term.
    pub fn cube(&self, atoms: usize) -> ValSet {
        let mut s = ValSet::empty(atoms);
        let free = full_mask(atoms) & !self.mask;
        // enumerate submasks of `free`
        let mut sub = free;
        loop {
            s.insert(Valuation(self.bits | sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        s
    }

    /// Conjunction of literals in signature order; `⊤` for the empty term.
    pub fn to_formula(&self) -> Formula {
        Formula::conj(self.literals().map(Literal::to_formula))
    }

    pub fn display<'a>(&self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: *self, sig, braces: false }
    }

    fn key(&self) -> Vec<(u8, bool)> {
        self.literals().map(Literal::key).collect()
    }
}

// Lexicographic over the literal sequence.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct TermDisplay<'a> {
    term: Term,
    sig: &'a Signature,
    braces: bool,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.braces {
            f.write_str("{")?;
        } else if self.term.is_empty() {
            return f.write_str("true");
        }
        let sep = if self.braces { ", " } else { " & " };
        for (i, l) in self.term.literals().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{}", l.display(self.sig))?;
        }
        if self.braces {
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// A set of valuations over a fixed number of atoms, stored as a bitset of
/// size `2^atoms`. Truth tables are `ValSet`s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValSet {
    atoms: u8,
    words: Vec<u64>,
}

impl ValSet {
    pub fn empty(atoms: usize) -> Self {
        let size = 1usize << atoms;
        ValSet { atoms: atoms as u8, words: vec![0; size.div_ceil(64)] }
    }

    pub fn full(atoms: usize) -> Self {
        let mut s = ValSet::empty(atoms);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn from_valuations<I: IntoIterator<Item = Valuation>>(atoms: usize, vals: I) -> Self {
        let mut s = ValSet::empty(atoms);
        for v in vals {
            s.insert(v);
        }
        s
    }

    /// Valuations where `atom` is true.
    pub fn atom(atoms: usize, atom: Atom) -> Self {
        let mut s = ValSet::empty(atoms);
        for v in 0..(1u32 << atoms) {
            if v & atom.bit() != 0 {
                s.insert(Valuation(v));
            }
        }
        s
    }

    fn trim(&mut self) {
        let size = 1usize << self.atoms;
        if size < 64 {
            self.words[0] &= (1u64 << size) - 1;
        }
    }

    pub fn atoms(&self) -> usize {
        self.atoms as usize
    }

    pub fn insert(&mut self, v: Valuation) -> bool {
        let (i, b) = (v.0 as usize / 64, v.0 as usize % 64);
        let fresh = self.words[i] & (1 << b) == 0;
        self.words[i] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: Valuation) -> bool {
        let (i, b) = (v.0 as usize / 64, v.0 as usize % 64);
        let had = self.words[i] & (1 << b) != 0;
        self.words[i] &= !(1 << b);
        had
    }

    pub fn contains(&self, v: Valuation) -> bool {
        let i = v.0 as usize;
        i < (1usize << self.atoms) && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    pub fn complement(&self) -> Self {
        let mut s = ValSet { atoms: self.atoms, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.atoms, other.atoms, "valuation sets over different signatures");
        ValSet {
            atoms: self.atoms,
            words: self.words.iter().zip(&other.words).map(|(a, b)| op(*a, *b)).collect(),
        }
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Valuation> + '_ {
        self.words.iter().enumerate().flat_map(|(i, w)| {
            let mut w = *w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(Valuation(i as u32 * 64 + b))
            })
        })
    }

    pub fn first(&self) -> Option<Valuation> {
        self.iter().next()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_cube_and_cover() {
        let t = Term::from_literals([Literal::pos(Atom(0)), Literal::neg(Atom(2))]).unwrap();
        let cube: Vec<_> = t.cube(3).iter().collect();
        assert_eq!(cube, vec![Valuation(0b001), Valuation(0b011)]);
        assert!(cube.iter().all(|v| t.covers(*v)));
        assert!(Term::from_literals([Literal::pos(Atom(0)), Literal::neg(Atom(0))]).is_none());
    }

    #[test]
    fn term_order_is_literal_lexicographic() {
        let p1 = Literal::pos(Atom(0));
        let p2 = Literal::pos(Atom(1));
        let a = Term::from_literals([p1, p2.negate()]).unwrap();
        let b = Term::from_literals([p1.negate(), p2]).unwrap();
        let c = Term::from_literals([p1]).unwrap();
        let mut ts = vec![b, a, c, Term::top()];
        ts.sort();
        assert_eq!(ts, vec![Term::top(), c, a, b]);
    }

    #[test]
    fn valset_ops() {
        let a = ValSet::atom(3, Atom(1));
        assert_eq!(a.len(), 4);
        assert_eq!(a.complement().len(), 4);
        assert!(a.and(&a.complement()).is_empty());
        assert!(a.or(&a.complement()).is_full());
        let big = ValSet::full(8);
        assert_eq!(big.len(), 256);
        assert_eq!(big.iter().last(), Some(Valuation(255)));
    }
}
