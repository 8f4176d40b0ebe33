//! Contraction and revision of action theories in multimodal K_n.
//!
//! An action theory is a set of static laws `φ`, effect laws `φ → [a]ψ` and
//! executability laws `φ → ⟨a⟩⊤` over a finite signature. This crate decides
//! entailment and modularity for such theories, changes them syntactically
//! (contraction algorithms producing candidate theories) and semantically
//! (minimal modification of Kripke models), and checks the change postulates.

pub mod entailment;
pub mod formula;
pub mod kripke;
pub mod model_change;
pub mod postulates;
pub mod syntax;
pub mod theory_change;

pub use formula::{Action, Atom, Formula, Literal, Signature, Term, ValSet, Valuation};
pub use kripke::{KripkeModel, ModelSet};
pub use syntax::{parse_law, parse_theory, ActionTheory, EffectLaw, ExecLaw, Law, Query};
