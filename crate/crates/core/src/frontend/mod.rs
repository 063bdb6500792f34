//! Formulas of the additive theory of mixed integers and reals: syntax,
//! parsing, and compilation to [`IdfSet`](crate::idf::IdfSet).

mod ast;
mod compile;
mod parser;

pub use ast::{free_vars, Atom, Formula, Rel, Sort, VarContext};
pub use compile::{carry_pairs, carry_range, compile, compile_atom, compile_atom_sorted, decide, sort_domain};
pub use parser::{parse, parse_point};

#[cfg(test)]
mod tests;
