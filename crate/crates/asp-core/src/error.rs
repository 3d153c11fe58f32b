use thiserror::Error;

use crate::syntax::SourcePos;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: SourcePos, message: String },
    #[error("{pos}: unsafe variable `{var}`")]
    Unsafe { pos: SourcePos, var: String },
}

impl ParseError {
    pub(crate) fn syntax(pos: SourcePos, message: impl Into<String>) -> Self {
        ParseError::Syntax { pos, message: message.into() }
    }

    pub fn pos(&self) -> SourcePos {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Unsafe { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("{pos}: arithmetic on non-integer value in `{expr}`")]
    ArithmeticType { pos: SourcePos, expr: String },
    #[error("{pos}: interval `{term}` is only supported in heads and `X = lo..hi` assignments")]
    IntervalInBody { pos: SourcePos, term: String },
    #[error("{pos}: choice condition `{atom}` is not decided by facts and definite rules")]
    NonDomainCondition { pos: SourcePos, atom: String },
    #[error("{pos}: integer overflow")]
    Overflow { pos: SourcePos },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{free} undecided atoms exceed the internal solver limit of {limit}; use an external solver")]
    SearchLimitExceeded { free: usize, limit: usize },
    #[error("cautious consequences of an empty model list are undefined")]
    EmptyModelList,
}

/// Any failure along parse, ground, solve.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AspError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
