//! Answer-set programming core: syntax, grounding and a small exact
//! stable-model solver.
//!
//! The solver is meant for unit-test sized programs and as an oracle; it
//! refuses programs with more than [`SEARCH_LIMIT`] undecided atoms.
//!
//! ```
//! use asp_core::{ground, parse_asp, stable_models, ModelCap};
//!
//! let program = parse_asp("a :- not b. b :- not a.").unwrap();
//! let models = stable_models(&ground(&program).unwrap(), ModelCap::Unbounded).unwrap();
//! assert_eq!(models.len(), 2);
//! ```

mod error;
mod ground;
mod parser;
mod solve;
mod syntax;

pub use error::{AspError, GroundError, ParseError, SolveError};
pub use ground::{ground, AtomId, GroundAtom, GroundHead, GroundProgram, GroundRule, Value};
pub use parser::{parse_asp, parse_asp_at, parse_atom, Parser};
pub use solve::{
    canonicalize, cautious_consequences, count_models_where, enumerate, is_stable_model, stable_models,
    AnswerSet, Enumeration, ModelCap, SEARCH_LIMIT,
};
pub use syntax::*;

/// Parses, grounds and enumerates in one step.
pub fn solve_text(text: &str, cap: ModelCap) -> Result<Enumeration, AspError> {
    let program = parse_asp(text)?;
    let gp = ground(&program)?;
    Ok(enumerate(&gp, cap)?)
}

/// Grounds and enumerates an already parsed program.
pub fn solve_program(program: &Program, cap: ModelCap) -> Result<Enumeration, AspError> {
    let gp = ground(program)?;
    Ok(enumerate(&gp, cap)?)
}
