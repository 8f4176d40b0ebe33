//! Propositional layer: signatures, valuations, terms, formulas and the
//! classical operations built on truth tables.

mod ast;
pub mod classical;
mod sig;
mod valuation;

pub use ast::{Formula, FormulaDisplay};
pub use classical::{
    classical_contract, entails_cpl, essential_atoms, essential_reduct, models_of, prime_implicants,
    prime_implicants_of, prime_subvaluations, ClassicalContraction, ClassicalError, Maxichoice,
    StaticContraction,
};
pub use sig::{Action, Atom, Signature, SignatureError, MAX_ATOMS};
pub use valuation::{Literal, Subvaluation, Term, TermDisplay, ValSet, Valuation};
