//! Annotations for answer-set programs.
//!
//! Annotations live in comments opened with `%**`, so annotated programs
//! stay plain ASP. They group rules into nested blocks, declare predicates,
//! term types and signatures, and state conditions and unit tests.
//!
//! ```
//! let src = "%** @block B {\n @atom p(X) a p *%\np(1).\n%** } *%\n";
//! let (program, diagnostics) = lana::parse_source("b.lp", src).unwrap();
//! assert!(diagnostics.is_empty());
//! let block = program.find_block("B").unwrap();
//! assert_eq!(block.atom_decls[0].description, "a p");
//! assert_eq!(block.rules.len(), 1);
//! ```

pub mod analysis;
pub mod diag;
mod error;
pub mod extract;
pub mod model;
mod parse;
pub mod suite;

pub use analysis::{check_signatures, check_types, hidden_atoms, lint, resolve_type, resolve_type_in, ResolvedType, TypeError};
pub use diag::{has_errors, Diagnostic, DiagnosticKind, Severity};
pub use error::LanaError;
pub use extract::{extract_annotations, render_segments, SourceSegment};
pub use model::*;
pub use parse::{parse_lana, parse_source, parse_sources, Parsed};
pub use suite::{parse_testsuite, SolverType, SuiteConfig};
