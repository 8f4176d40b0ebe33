//! Laws, action theories, the theory text format and its JSON form.

mod json;
mod law;
mod parser;

pub use json::{theory_from_json, theory_from_value, theory_to_json, EffectJson, ExecJson, JsonError, TheoryJson};
pub use law::{ActionTheory, EffectLaw, ExecLaw, Law, LawDisplay, Query, TheoryError};
pub use parser::{
    lint, parse_formula, parse_law, parse_modal, parse_query, parse_theory, parse_theory_with_warnings,
    query_from_modal, ParseError, ParseErrorKind, QueryError, Warning,
};
