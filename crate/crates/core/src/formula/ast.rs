use std::fmt;

use super::{Atom, Signature, ValSet, Valuation};

/// Boolean formula over the atoms of a signature (atoms are indices; printing
/// needs the signature).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Formula, b: Formula) -> Self {
        Formula::Xor(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `⊤` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `⊥` when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    pub fn eval(&self, v: Valuation) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => v.get(*a),
            Formula::Not(f) => !f.eval(v),
            Formula::And(a, b) => a.eval(v) && b.eval(v),
            Formula::Or(a, b) => a.eval(v) || b.eval(v),
            Formula::Xor(a, b) => a.eval(v) != b.eval(v),
            Formula::Implies(a, b) => !a.eval(v) || b.eval(v),
            Formula::Iff(a, b) => a.eval(v) == b.eval(v),
        }
    }

    /// Truth table over `atoms` atoms.
    pub fn models(&self, atoms: usize) -> ValSet {
        match self {
            Formula::True => ValSet::full(atoms),
            Formula::False => ValSet::empty(atoms),
            Formula::Atom(a) => ValSet::atom(atoms, *a),
            Formula::Not(f) => f.models(atoms).complement(),
            Formula::And(a, b) => a.models(atoms).and(&b.models(atoms)),
            Formula::Or(a, b) => a.models(atoms).or(&b.models(atoms)),
            Formula::Xor(a, b) => a.models(atoms).xor(&b.models(atoms)),
            Formula::Implies(a, b) => a.models(atoms).complement().or(&b.models(atoms)),
            Formula::Iff(a, b) => a.models(atoms).xor(&b.models(atoms)).complement(),
        }
    }

    /// Mask of atoms occurring syntactically.
    pub fn atom_mask(&self) -> u32 {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Atom(a) => a.bit(),
            Formula::Not(f) => f.atom_mask(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Xor(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.atom_mask() | b.atom_mask(),
        }
    }

    pub fn substitute(&self, atom: Atom, value: bool) -> Formula {
        self.map_atoms(&|a| {
            if a == atom {
                if value {
                    Formula::True
                } else {
                    Formula::False
                }
            } else {
                Formula::Atom(a)
            }
        })
    }

    fn map_atoms(&self, f: &dyn Fn(Atom) -> Formula) -> Formula {
        let bin = |a: &Formula, b: &Formula| (Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f)));
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(*a),
            Formula::Not(x) => Formula::Not(Box::new(x.map_atoms(f))),
            Formula::And(a, b) => {
                let (a, b) = bin(a, b);
                Formula::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Or(a, b)
            }
            Formula::Xor(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Xor(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Implies(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Iff(a, b)
            }
        }
    }

    /// Constant folding and double-negation removal. Preserves the structure
    /// of everything that is not a constant.
    pub fn simplify(&self) -> Formula {
        use Formula::*;
        match self {
            True | False | Atom(_) => self.clone(),
            Not(f) => match f.simplify() {
                True => False,
                False => True,
                Not(g) => *g,
                g => Formula::not(g),
            },
            And(a, b) => match (a.simplify(), b.simplify()) {
                (False, _) | (_, False) => False,
                (True, x) | (x, True) => x,
                (x, y) if x == y => x,
                (x, y) => Formula::and(x, y),
            },
            Or(a, b) => match (a.simplify(), b.simplify()) {
                (True, _) | (_, True) => True,
                (False, x) | (x, False) => x,
                (x, y) if x == y => x,
                (x, y) => Formula::or(x, y),
            },
            Xor(a, b) => match (a.simplify(), b.simplify()) {
                (False, x) | (x, False) => x,
                (True, x) | (x, True) => Formula::not(x).simplify(),
                (x, y) => Formula::xor(x, y),
            },
            Implies(a, b) => match (a.simplify(), b.simplify()) {
                (False, _) | (_, True) => True,
                (True, x) => x,
                (x, False) => Formula::not(x).simplify(),
                (x, y) => Formula::implies(x, y),
            },
            Iff(a, b) => match (a.simplify(), b.simplify()) {
                (True, x) | (x, True) => x,
                (False, x) | (x, False) => Formula::not(x).simplify(),
                (x, y) => Formula::iff(x, y),
            },
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { f: self, sig }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Xor(..) => 3,
            Formula::Or(..) => 4,
            Formula::And(..) => 5,
            Formula::Not(..) => 6,
            _ => 7,
        }
    }
}

pub struct FormulaDisplay<'a> {
    f: &'a Formula,
    sig: &'a Signature,
}

impl FormulaDisplay<'_> {
    fn child(&self, f: &Formula, parens: bool, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if parens {
            write!(out, "({})", f.display(self.sig))
        } else {
            write!(out, "{}", f.display(self.sig))
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.f.precedence();
        let (a, b, op, right_assoc) = match self.f {
            Formula::True => return out.write_str("true"),
            Formula::False => return out.write_str("false"),
            Formula::Atom(a) => return out.write_str(self.sig.atom_name(*a)),
            Formula::Not(f) => {
                out.write_str("~")?;
                return self.child(f, f.precedence() < p, out);
            }
            Formula::And(a, b) => (a, b, " & ", false),
            Formula::Or(a, b) => (a, b, " | ", false),
            Formula::Xor(a, b) => (a, b, " ^ ", false),
            Formula::Implies(a, b) => (a, b, " -> ", true),
            Formula::Iff(a, b) => (a, b, " <-> ", false),
        };
        let (lp, rp) = if right_assoc {
            (a.precedence() <= p, b.precedence() < p)
        } else {
            (a.precedence() < p, b.precedence() <= p)
        };
        self.child(a, lp, out)?;
        out.write_str(op)?;
        self.child(b, rp, out)
    }
}
