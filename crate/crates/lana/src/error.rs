use asp_core::{ParseError, SourcePos};

/// Fatal problems while reading annotated sources or suite files.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LanaError {
    #[error("{file}:{pos}: annotation opened here is never closed with `*%`")]
    UnterminatedAnnotation { file: String, pos: SourcePos },
    #[error("{file}:{pos}: block comment opened here is never closed")]
    UnterminatedComment { file: String, pos: SourcePos },
    #[error("{file}:{pos}: {message}")]
    OverlappingBlocks { file: String, pos: SourcePos, message: String },
    #[error("{file}:{pos}: block `{name}` is not closed")]
    UnclosedBlock { file: String, pos: SourcePos, name: String },
    #[error("{file}:{pos}: duplicate block name `{name}`")]
    DuplicateBlockName { file: String, pos: SourcePos, name: String },
    #[error("{file}:{pos}: malformed signature list `{text}`")]
    MalformedSignatureList { file: String, pos: SourcePos, text: String },
    #[error("{file}:{pos}: test atom `{atom}` is not ground")]
    NonGroundTestAtom { file: String, pos: SourcePos, atom: String },
    #[error("{file}:{pos}: {message}")]
    Malformed { file: String, pos: SourcePos, message: String },
    #[error("{file}:{}: {source}", source.pos())]
    Asp { file: String, source: ParseError },
    #[error("test suite is missing `{0}`")]
    MissingField(&'static str),
    #[error("unknown solver type `{0}` (expected DLV, clasp, clingo or internal)")]
    UnknownSolverType(String),
    #[error("solver type clasp needs a `@grounder` command")]
    GrounderRequired,
}
