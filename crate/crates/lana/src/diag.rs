//! Located warnings and errors produced by parsing and analysis.

use std::fmt;

use asp_core::{Signature, SourcePos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    UndeclaredPredicate { signature: Signature },
    ArityMismatch { predicate: String, found: usize, declared: Vec<usize> },
    SignatureNotDeclared { signature: Signature },
    HiddenAtom { block: String, signature: Signature },
    /// `position` is 1-based.
    TypeViolation { predicate: String, position: usize, value: String },
    CircularSameRangeAs { cycle: Vec<String> },
    UnknownTerm { name: String },
    TypeEvaluationError { term: String, message: String },
    UnknownKeyword { keyword: String },
    ShadowedDeclaration { name: String },
    DuplicateDeclaration { name: String },
    UnknownScopeBlock { test: String, block: String },
}

impl DiagnosticKind {
    pub fn code(&self) -> &'static str {
        match self {
            DiagnosticKind::UndeclaredPredicate { .. } => "UndeclaredPredicate",
            DiagnosticKind::ArityMismatch { .. } => "ArityMismatch",
            DiagnosticKind::SignatureNotDeclared { .. } => "SignatureNotDeclared",
            DiagnosticKind::HiddenAtom { .. } => "HiddenAtom",
            DiagnosticKind::TypeViolation { .. } => "TypeViolation",
            DiagnosticKind::CircularSameRangeAs { .. } => "CircularSameRangeAs",
            DiagnosticKind::UnknownTerm { .. } => "UnknownTerm",
            DiagnosticKind::TypeEvaluationError { .. } => "TypeEvaluationError",
            DiagnosticKind::UnknownKeyword { .. } => "UnknownKeyword",
            DiagnosticKind::ShadowedDeclaration { .. } => "ShadowedDeclaration",
            DiagnosticKind::DuplicateDeclaration { .. } => "DuplicateDeclaration",
            DiagnosticKind::UnknownScopeBlock { .. } => "UnknownScopeBlock",
        }
    }

    pub fn severity(&self) -> Severity {
        match self {
            DiagnosticKind::ArityMismatch { .. }
            | DiagnosticKind::TypeViolation { .. }
            | DiagnosticKind::CircularSameRangeAs { .. }
            | DiagnosticKind::UnknownTerm { .. }
            | DiagnosticKind::TypeEvaluationError { .. }
            | DiagnosticKind::UnknownScopeBlock { .. } => Severity::Error,
            DiagnosticKind::HiddenAtom { .. } => Severity::Info,
            _ => Severity::Warning,
        }
    }

    pub fn message(&self) -> String {
        match self {
            DiagnosticKind::UndeclaredPredicate { signature } => {
                format!("predicate {signature} is used but not declared with @atom")
            }
            DiagnosticKind::ArityMismatch { predicate, found, declared } => {
                let declared: Vec<String> = declared.iter().map(|a| a.to_string()).collect();
                format!("{predicate} used with arity {found}, declared with arity {}", declared.join(" or "))
            }
            DiagnosticKind::SignatureNotDeclared { signature } => {
                format!("signature entry {signature} has no @atom declaration")
            }
            DiagnosticKind::HiddenAtom { block, signature } => {
                format!("{signature} is hidden in block {block}")
            }
            DiagnosticKind::TypeViolation { predicate, position, value } => {
                format!("argument {position} of {predicate} is {value}, outside its declared type")
            }
            DiagnosticKind::CircularSameRangeAs { cycle } => {
                format!("@samerangeas cycle: {}", cycle.join(" -> "))
            }
            DiagnosticKind::UnknownTerm { name } => format!("term {name} is not declared"),
            DiagnosticKind::TypeEvaluationError { term, message } => {
                format!("type of {term} cannot be evaluated: {message}")
            }
            DiagnosticKind::UnknownKeyword { keyword } => format!("unknown keyword @{keyword} skipped"),
            DiagnosticKind::ShadowedDeclaration { name } => {
                format!("{name} shadows a declaration of an enclosing block")
            }
            DiagnosticKind::DuplicateDeclaration { name } => format!("{name} is declared twice in the same block"),
            DiagnosticKind::UnknownScopeBlock { test, block } => {
                format!("test case {test} scopes unknown block {block}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub file: String,
    pub pos: SourcePos,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, file: impl Into<String>, pos: SourcePos) -> Self {
        Diagnostic { kind, file: file.into(), pos }
    }

    pub fn severity(&self) -> Severity {
        self.kind.severity()
    }

    pub fn code(&self) -> &'static str {
        self.kind.code()
    }

    pub fn message(&self) -> String {
        self.kind.message()
    }

    fn sort_key(&self) -> (&str, SourcePos, &'static str) {
        (&self.file, self.pos, self.code())
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}:{} {}", self.severity(), self.code(), self.file, self.pos, self.message())
    }
}

/// Stable order: file, line, column, code. Exact duplicates are dropped.
pub fn sort_diagnostics(diags: &mut Vec<Diagnostic>) {
    diags.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()).then_with(|| a.message().cmp(&b.message())));
    diags.dedup();
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity() == Severity::Error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_one_line() {
        let d = Diagnostic::new(
            DiagnosticKind::TypeViolation { predicate: "rowHint".into(), position: 1, value: "11".into() },
            "b.lp",
            SourcePos::new(3, 1),
        );
        assert_eq!(d.to_string(), "error TypeViolation b.lp:3:1 argument 1 of rowHint is 11, outside its declared type");
    }

    #[test]
    fn sorting_is_by_file_line_col_code() {
        let mk = |code: DiagnosticKind, file: &str, l, c| Diagnostic::new(code, file, SourcePos::new(l, c));
        let unknown = || DiagnosticKind::UnknownTerm { name: "X".into() };
        let cycle = || DiagnosticKind::CircularSameRangeAs { cycle: vec!["A".into()] };
        let mut v = vec![mk(unknown(), "b", 1, 1), mk(unknown(), "a", 2, 1), mk(cycle(), "a", 2, 1), mk(unknown(), "a", 1, 9)];
        sort_diagnostics(&mut v);
        let keys: Vec<(String, u32, &str)> = v.iter().map(|d| (d.file.clone(), d.pos.line, d.code())).collect();
        assert_eq!(
            keys,
            vec![
                ("a".into(), 1, "UnknownTerm"),
                ("a".into(), 2, "CircularSameRangeAs"),
                ("a".into(), 2, "UnknownTerm"),
                ("b".into(), 1, "UnknownTerm")
            ]
        );
    }
}
