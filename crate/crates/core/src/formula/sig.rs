use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Valuation;

/// Upper bound on the number of atoms; every valuation is a `u32` bit pattern
/// and truth tables are materialised, so anything past this is hopeless anyway.
pub const MAX_ATOMS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(pub u8);

impl Atom {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn bit(self) -> u32 {
        1 << self.0
    }
}

impl Action {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("empty name in signature")]
    EmptyName,
    #[error("duplicate name `{0}` in signature")]
    Duplicate(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
    #[error("too many atoms ({0}, at most {MAX_ATOMS} supported)")]
    TooManyAtoms(usize),
    #[error("too many actions ({0})")]
    TooManyActions(usize),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("formula mentions atoms outside the signature")]
    Mismatch,
}

/// Ordered atoms and actions. The order is fixed at creation and drives every
/// canonical ordering downstream (valuation bits, law grouping, output).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSignature", into = "RawSignature")]
pub struct Signature {
    atoms: Vec<String>,
    actions: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawSignature {
    atoms: Vec<String>,
    actions: Vec<String>,
}

impl TryFrom<RawSignature> for Signature {
    type Error = SignatureError;
    fn try_from(raw: RawSignature) -> Result<Self, Self::Error> {
        Signature::new(raw.atoms, raw.actions)
    }
}

impl From<Signature> for RawSignature {
    fn from(sig: Signature) -> Self {
        RawSignature { atoms: sig.atoms, actions: sig.actions }
    }
}

const RESERVED: &[&str] = &["true", "false"];

impl Signature {
    pub fn new<A, B, S, T>(atoms: A, actions: B) -> Result<Self, SignatureError>
    where
        A: IntoIterator<Item = S>,
        B: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        let actions: Vec<String> = actions.into_iter().map(Into::into).collect();
        if atoms.len() > MAX_ATOMS {
            return Err(SignatureError::TooManyAtoms(atoms.len()));
        }
        if actions.len() > u8::MAX as usize {
            return Err(SignatureError::TooManyActions(actions.len()));
        }
        let mut seen = std::collections::HashSet::new();
        for name in atoms.iter().chain(actions.iter()) {
            if name.is_empty() {
                return Err(SignatureError::EmptyName);
            }
            if RESERVED.contains(&name.as_str()) {
                return Err(SignatureError::Reserved(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(SignatureError::Duplicate(name.clone()));
            }
        }
        Ok(Signature { atoms, actions })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.atoms.iter().position(|a| a == name).map(|i| Atom(i as u8))
    }

    pub fn action(&self, name: &str) -> Option<Action> {
        self.actions.iter().position(|a| a == name).map(|i| Action(i as u8))
    }

    pub fn atom_name(&self, atom: Atom) -> &str {
        &self.atoms[atom.index()]
    }

    pub fn action_name(&self, action: Action) -> &str {
        &self.actions[action.index()]
    }

    pub fn all_atoms(&self) -> impl Iterator<Item = Atom> {
        (0..self.atoms.len() as u8).map(Atom)
    }

    pub fn all_actions(&self) -> impl Iterator<Item = Action> {
        (0..self.actions.len() as u8).map(Action)
    }

    /// Bit mask with one bit per atom.
    pub fn atom_mask(&self) -> u32 {
        full_mask(self.atoms.len())
    }

    /// All valuations in canonical (bit pattern) order.
    pub fn valuations(&self) -> impl Iterator<Item = Valuation> {
        (0..(1u32 << self.atoms.len())).map(Valuation)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "atoms {} / actions {}", self.atoms.join(", "), self.actions.join(", "))
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}
