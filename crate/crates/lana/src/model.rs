//! The block-structured program model.

use std::collections::HashSet;
use std::fmt;

use asp_core::{BodyElem, GroundAtom, Program, Rule, Signature, SourcePos, Term};

/// Index into [`AnnotatedProgram::sources`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FileId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub file: FileId,
    pub pos: SourcePos,
}

impl Location {
    pub fn new(file: FileId, line: u32, col: u32) -> Self {
        Location { file, pos: SourcePos::new(line, col) }
    }
}

/// Inclusive start, exclusive end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: Location,
    pub end: Location,
}

impl Span {
    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn disjoint(&self, other: &Span) -> bool {
        self.end <= other.start || other.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomDecl {
    pub predicate: String,
    pub term_names: Vec<String>,
    pub description: String,
    pub location: Location,
}

impl AtomDecl {
    pub fn signature(&self) -> Signature {
        Signature::new(self.predicate.clone(), self.term_names.len())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypeSpec {
    FromList(Vec<Term>),
    /// Body mentions the variable [`TYPE_VAR`]; `code` holds the rules that
    /// define the predicates used in the body.
    WithBody { body: Vec<BodyElem>, code: Program },
    SameRangeAs(String),
}

/// Variable that stands for `#V` inside an `@with` body.
pub const TYPE_VAR: &str = "_V";

#[derive(Debug, Clone, PartialEq)]
pub struct TermDecl {
    pub names: Vec<String>,
    pub description: String,
    pub type_spec: Option<TypeSpec>,
    pub location: Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionKind {
    Assert,
    Precondition,
    Postcondition,
}

impl ConditionKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ConditionKind::Assert => "@assert",
            ConditionKind::Precondition => "@precon",
            ConditionKind::Postcondition => "@postcon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionMode {
    Always,
    Never,
}

impl ConditionMode {
    pub fn keyword(self) -> &'static str {
        match self {
            ConditionMode::Always => "@always",
            ConditionMode::Never => "@never",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub kind: ConditionKind,
    pub name: String,
    pub description: String,
    pub mode: ConditionMode,
    pub atoms: Vec<GroundAtom>,
    pub rules: Program,
    pub location: Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomsMode {
    TrueInAll,
    TrueInAtLeast(u32),
    TrueInAtMost(u32),
    FalseInAll,
    FalseInAtLeast(u32),
    FalseInAtMost(u32),
}

impl AtomsMode {
    /// The atom's truth value this mode counts.
    pub fn polarity(self) -> bool {
        matches!(self, AtomsMode::TrueInAll | AtomsMode::TrueInAtLeast(_) | AtomsMode::TrueInAtMost(_))
    }
}

impl fmt::Display for AtomsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomsMode::TrueInAll => write!(f, "@trueinall"),
            AtomsMode::TrueInAtLeast(n) => write!(f, "@trueinatleast {n}"),
            AtomsMode::TrueInAtMost(n) => write!(f, "@trueinatmost {n}"),
            AtomsMode::FalseInAll => write!(f, "@falseinall"),
            AtomsMode::FalseInAtLeast(n) => write!(f, "@falseinatleast {n}"),
            AtomsMode::FalseInAtMost(n) => write!(f, "@falseinatmost {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestCondition {
    HasAnswerSet,
    NoAnswerSet,
    TestAtoms { atoms: Vec<GroundAtom>, mode: AtomsMode },
}

impl fmt::Display for TestCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestCondition::HasAnswerSet => write!(f, "@testhasanswerset"),
            TestCondition::NoAnswerSet => write!(f, "@testnoanswerset"),
            TestCondition::TestAtoms { atoms, mode } => {
                let atoms: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
                write!(f, "{mode} {}", atoms.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestCase {
    pub name: String,
    pub description: String,
    pub scope: Vec<String>,
    pub conditions: Vec<TestCondition>,
    pub rules: Program,
    pub location: Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InputKeyword {
    #[default]
    Input,
    Requires,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OutputKeyword {
    #[default]
    Output,
    Defines,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: String,
    pub description: String,
    pub atom_decls: Vec<AtomDecl>,
    pub term_decls: Vec<TermDecl>,
    pub input_sig: Vec<Signature>,
    pub output_sig: Vec<Signature>,
    pub input_keyword: InputKeyword,
    pub output_keyword: OutputKeyword,
    pub conditions: Vec<Condition>,
    pub rules: Program,
    pub children: Vec<Block>,
    pub span: Span,
}

impl Block {
    pub fn new(name: impl Into<String>, span: Span) -> Self {
        Block {
            name: name.into(),
            description: String::new(),
            atom_decls: Vec::new(),
            term_decls: Vec::new(),
            input_sig: Vec::new(),
            output_sig: Vec::new(),
            input_keyword: InputKeyword::default(),
            output_keyword: OutputKeyword::default(),
            conditions: Vec::new(),
            rules: Program::default(),
            children: Vec::new(),
            span,
        }
    }

    pub fn declares_signatures(&self) -> bool {
        !self.input_sig.is_empty() || !self.output_sig.is_empty()
    }

    /// Pre-order walk over this block and its descendants.
    pub fn walk(&self) -> Vec<&Block> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let b = out[i];
            out.splice(i + 1..i + 1, b.children.iter());
            i += 1;
        }
        out
    }

    /// Rules of this block and all descendants, ordered by source position.
    pub fn all_rules(&self) -> Vec<&Rule> {
        let mut rules: Vec<(Location, &Rule)> = Vec::new();
        for b in self.walk() {
            // rules do not remember their file; a block never spans files
            rules.extend(b.rules.rules.iter().map(|r| (Location { file: b.span.start.file, pos: r.pos }, r)));
        }
        rules.sort_by_key(|(loc, _)| *loc);
        rules.into_iter().map(|(_, r)| r).collect()
    }

    /// Conditions with the block each belongs to.
    pub fn all_conditions(&self) -> Vec<(&Block, &Condition)> {
        self.walk().into_iter().flat_map(|b| b.conditions.iter().map(move |c| (b, c))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub name: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedProgram {
    pub root: Block,
    pub test_cases: Vec<TestCase>,
    pub sources: Vec<SourceFile>,
}

/// Name of the synthetic root when several files are combined.
pub const MULTI_FILE_ROOT: &str = "program";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown block `{0}`")]
pub struct UnknownBlock(pub String);

impl AnnotatedProgram {
    pub fn file_name(&self, id: FileId) -> &str {
        self.sources.get(id.0 as usize).map(|s| s.name.as_str()).unwrap_or("<unknown>")
    }

    pub fn blocks(&self) -> Vec<&Block> {
        self.root.walk()
    }

    pub fn find_block(&self, name: &str) -> Option<&Block> {
        self.root.walk().into_iter().find(|b| b.name == name)
    }

    /// Blocks from the root down to the named block, inclusive.
    pub fn block_path(&self, name: &str) -> Option<Vec<&Block>> {
        fn go<'a>(b: &'a Block, name: &str, path: &mut Vec<&'a Block>) -> bool {
            path.push(b);
            if b.name == name || b.children.iter().any(|c| go(c, name, path)) {
                return true;
            }
            path.pop();
            false
        }
        let mut path = Vec::new();
        go(&self.root, name, &mut path).then_some(path)
    }

    /// Declarations visible in the named block; inner declarations shadow
    /// outer ones with the same signature (atoms) or name (terms).
    pub fn effective_declarations(&self, name: &str) -> Option<(Vec<AtomDecl>, Vec<TermDecl>)> {
        Some(effective_declarations(&self.block_path(name)?))
    }

    /// Rules of the named blocks and their descendants, in source order.
    /// A block named twice (or nested in another named block) contributes once.
    pub fn scope_rules(&self, names: &[String]) -> Result<Program, UnknownBlock> {
        let mut seen = HashSet::new();
        let mut rules: Vec<(Location, Rule)> = Vec::new();
        for name in names {
            let block = self.find_block(name).ok_or_else(|| UnknownBlock(name.clone()))?;
            for b in block.walk() {
                if !seen.insert(b.name.as_str()) {
                    continue;
                }
                let file = b.span.start.file;
                rules.extend(b.rules.rules.iter().map(|r| (Location { file, pos: r.pos }, r.clone())));
            }
        }
        rules.sort_by_key(|(loc, _)| *loc);
        Ok(Program::new(rules.into_iter().map(|(_, r)| r).collect()))
    }

    /// Rules of test cases, in file order.
    pub fn test_rules(&self) -> Program {
        Program::new(self.test_cases.iter().flat_map(|t| t.rules.rules.iter().cloned()).collect())
    }
}

/// Folds declarations along a root-to-block path.
pub fn effective_declarations(path: &[&Block]) -> (Vec<AtomDecl>, Vec<TermDecl>) {
    let mut atoms: Vec<AtomDecl> = Vec::new();
    let mut terms: Vec<TermDecl> = Vec::new();
    for b in path {
        // later declarations win, also within a single block
        for d in &b.atom_decls {
            atoms.retain(|a| a.signature() != d.signature());
            atoms.push(d.clone());
        }
        for d in &b.term_decls {
            for t in terms.iter_mut() {
                t.names.retain(|n| !d.names.contains(n));
            }
            terms.retain(|t| !t.names.is_empty());
            terms.push(d.clone());
        }
    }
    (atoms, terms)
}

/// Finds the declaration of a term name among effective declarations.
pub fn lookup_term<'a>(terms: &'a [TermDecl], name: &str) -> Option<&'a TermDecl> {
    terms.iter().rev().find(|t| t.names.iter().any(|n| n == name))
}
