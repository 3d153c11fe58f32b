//! Building the annotated program model from source segments.

use std::collections::HashSet;
use std::path::Path;

use asp_core::{parse_asp_at, GroundAtom, ParseError, Parser, Program, Signature, SourcePos, Term};

use crate::diag::{sort_diagnostics, Diagnostic, DiagnosticKind};
use crate::error::LanaError;
use crate::extract::{extract_annotations, render_segments, ExtractError, SourceSegment};
use crate::model::{
    AnnotatedProgram, AtomDecl, AtomsMode, Block, Condition, ConditionKind, ConditionMode, FileId, InputKeyword,
    Location, OutputKeyword, SourceFile, Span, TermDecl, TestCase, TestCondition, TypeSpec, MULTI_FILE_ROOT,
    TYPE_VAR,
};

pub type Parsed = (AnnotatedProgram, Vec<Diagnostic>);

/// Parses one annotated source file. The root block is named after the file.
pub fn parse_source(name: &str, text: &str) -> Result<Parsed, LanaError> {
    parse_sources(&[(name.to_string(), text.to_string())])
}

/// Parses segments produced by [`extract_annotations`] as one file.
pub fn parse_lana(segments: &[SourceSegment], name: &str) -> Result<Parsed, LanaError> {
    let text = render_segments(segments);
    let file = parse_file(FileId(0), name, &text, segments)?;
    assemble(vec![file], vec![SourceFile { name: name.to_string(), text }])
}

/// Parses several files into one program. Files are ordered by name; with
/// more than one file the root is a synthetic block holding one default
/// block per file.
pub fn parse_sources(files: &[(String, String)]) -> Result<Parsed, LanaError> {
    let mut files: Vec<&(String, String)> = files.iter().collect();
    files.sort_by(|a, b| a.0.cmp(&b.0));
    let mut parsed = Vec::new();
    for (i, (name, text)) in files.iter().enumerate() {
        let segments = extract_annotations(text).map_err(|e| match e {
            ExtractError::UnterminatedAnnotation(pos) => LanaError::UnterminatedAnnotation { file: name.clone(), pos },
            ExtractError::UnterminatedComment(pos) => LanaError::UnterminatedComment { file: name.clone(), pos },
        })?;
        parsed.push(parse_file(FileId(i as u32), name, text, &segments)?);
    }
    let sources = files.iter().map(|(name, text)| SourceFile { name: name.clone(), text: text.clone() }).collect();
    assemble(parsed, sources)
}

struct FileResult {
    root: Block,
    tests: Vec<TestCase>,
    diags: Vec<Diagnostic>,
}

fn assemble(mut files: Vec<FileResult>, sources: Vec<SourceFile>) -> Result<Parsed, LanaError> {
    let mut diags: Vec<Diagnostic> = files.iter_mut().flat_map(|f| std::mem::take(&mut f.diags)).collect();
    let tests: Vec<TestCase> = files.iter_mut().flat_map(|f| std::mem::take(&mut f.tests)).collect();
    let root = if files.len() == 1 {
        files.pop().expect("one file").root
    } else {
        let start = files.first().map(|f| f.root.span.start).unwrap_or(Location::new(FileId(0), 1, 1));
        let end = files.last().map(|f| f.root.span.end).unwrap_or(start);
        let mut root = Block::new(MULTI_FILE_ROOT, Span { start, end });
        root.children = files.into_iter().map(|f| f.root).collect();
        root
    };
    let ap = AnnotatedProgram { root, test_cases: tests, sources };

    let mut names: HashSet<&str> = HashSet::new();
    for b in ap.blocks() {
        if !names.insert(&b.name) {
            return Err(LanaError::DuplicateBlockName {
                file: ap.file_name(b.span.start.file).to_string(),
                pos: b.span.start.pos,
                name: b.name.clone(),
            });
        }
    }
    declaration_warnings(&ap, &ap.root, &HashSet::new(), &HashSet::new(), &mut diags);
    sort_diagnostics(&mut diags);
    Ok((ap, diags))
}

fn declaration_warnings(
    ap: &AnnotatedProgram,
    b: &Block,
    outer_atoms: &HashSet<Signature>,
    outer_terms: &HashSet<String>,
    diags: &mut Vec<Diagnostic>,
) {
    let mut atoms = outer_atoms.clone();
    let mut terms = outer_terms.clone();
    let mut here_atoms = HashSet::new();
    let mut here_terms = HashSet::new();
    let mut warn = |kind, loc: Location| diags.push(Diagnostic::new(kind, ap.file_name(loc.file), loc.pos));
    for d in &b.atom_decls {
        let sig = d.signature();
        if !here_atoms.insert(sig.clone()) {
            warn(DiagnosticKind::DuplicateDeclaration { name: sig.to_string() }, d.location);
        } else if outer_atoms.contains(&sig) {
            warn(DiagnosticKind::ShadowedDeclaration { name: sig.to_string() }, d.location);
        }
        atoms.insert(sig);
    }
    for d in &b.term_decls {
        for n in &d.names {
            if !here_terms.insert(n.clone()) {
                warn(DiagnosticKind::DuplicateDeclaration { name: n.clone() }, d.location);
            } else if outer_terms.contains(n) {
                warn(DiagnosticKind::ShadowedDeclaration { name: n.clone() }, d.location);
            }
            terms.insert(n.clone());
        }
    }
    for c in &b.children {
        declaration_warnings(ap, c, &atoms, &terms, diags);
    }
}

fn end_position(text: &str) -> SourcePos {
    let line = 1 + text.matches('\n').count() as u32;
    let last = text.rfind('\n').map(|i| &text[i + 1..]).unwrap_or(text);
    SourcePos::new(line, 1 + last.chars().count() as u32)
}

/// Text between two positions filled with whitespace so that what follows
/// keeps its line and column.
fn gap(from: SourcePos, to: SourcePos) -> String {
    if to.line > from.line {
        "\n".repeat((to.line - from.line) as usize) + &" ".repeat(to.col.saturating_sub(1) as usize)
    } else {
        " ".repeat(to.col.saturating_sub(from.col) as usize)
    }
}

fn parse_file(file: FileId, name: &str, text: &str, segments: &[SourceSegment]) -> Result<FileResult, LanaError> {
    let stem = Path::new(name).file_stem().and_then(|s| s.to_str()).unwrap_or(name).to_string();
    let span = Span { start: Location { file, pos: SourcePos::new(1, 1) }, end: Location { file, pos: end_position(text) } };
    let mut b = FileParser {
        file,
        name,
        stem,
        stack: vec![Block::new(name, span)],
        tests: Vec::new(),
        diags: Vec::new(),
        current_test: None,
        capture: None,
    };
    let mut i = 0;
    while i < segments.len() {
        match &segments[i] {
            SourceSegment::Annotation { content, span, .. } => {
                b.annotation(content, span.start_pos)?;
                i += 1;
            }
            SourceSegment::Rules { .. } => {
                // comments may split a rule across several segments
                let first = segments[i].span();
                let mut joined = String::new();
                let mut at = first.start_pos;
                while let Some(SourceSegment::Rules { content, span }) = segments.get(i) {
                    joined.push_str(&gap(at, span.start_pos));
                    joined.push_str(content);
                    at = span.end_pos;
                    i += 1;
                }
                let program = parse_asp_at(&joined, first.start_pos).map_err(|e| b.asp_err(e))?;
                match b.capture {
                    Some(t) => b.tests[t].rules.extend(&program),
                    None => b.top().rules.extend(&program),
                }
            }
        }
    }
    if b.stack.len() > 1 {
        let open = b.stack.last().expect("open block");
        return Err(LanaError::UnclosedBlock { file: name.to_string(), pos: open.span.start.pos, name: open.name.clone() });
    }
    for t in &b.tests {
        if t.scope.is_empty() {
            return Err(b.malformed(t.location.pos, format!("test case {} has no @scope", t.name)));
        }
        if t.conditions.is_empty() {
            return Err(b.malformed(t.location.pos, format!("test case {} has no test condition", t.name)));
        }
    }
    let root = b.stack.pop().expect("root");
    Ok(FileResult { root, tests: b.tests, diags: b.diags })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Item {
    None,
    Block,
    Atom(usize),
    Term(usize),
    Cond,
    Test(usize),
}

struct PendingCondition {
    kind: ConditionKind,
    name: String,
    description: String,
    mode: Option<ConditionMode>,
    atoms: Vec<GroundAtom>,
    rules: Program,
    location: Location,
}

struct AnnState {
    item: Item,
    cond: Option<PendingCondition>,
    test_atoms: Option<(Vec<GroundAtom>, SourcePos)>,
    new_test: bool,
}

struct FileParser<'n> {
    file: FileId,
    name: &'n str,
    stem: String,
    stack: Vec<Block>,
    tests: Vec<TestCase>,
    diags: Vec<Diagnostic>,
    current_test: Option<usize>,
    capture: Option<usize>,
}

/// Cursor over the text of one annotation.
struct Ann<'t> {
    text: &'t str,
    base: SourcePos,
    i: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl<'t> Ann<'t> {
    fn pos_at(&self, off: usize) -> SourcePos {
        let before = &self.text[..off];
        match before.rfind('\n') {
            None => SourcePos::new(self.base.line, self.base.col + before.chars().count() as u32),
            Some(nl) => SourcePos::new(
                self.base.line + before.matches('\n').count() as u32,
                1 + before[nl + 1..].chars().count() as u32,
            ),
        }
    }

    fn pos(&self) -> SourcePos {
        self.pos_at(self.i)
    }

    fn rest(&self) -> &'t str {
        &self.text[self.i..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.i += rest.len() - rest.trim_start().len();
    }

    fn skip_inline_ws(&mut self) {
        let rest = self.rest();
        self.i += rest.len() - rest.trim_start_matches([' ', '\t', '\r']).len();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'t str {
        let rest = self.rest();
        let n = rest.find(|c: char| !f(c)).unwrap_or(rest.len());
        self.i += n;
        &rest[..n]
    }

    fn word(&mut self) -> Option<&'t str> {
        Some(self.take_while(is_word_char)).filter(|w| !w.is_empty())
    }

    fn prev_is_space(&self, off: usize) -> bool {
        self.text[..off].chars().next_back().is_none_or(char::is_whitespace)
    }

    fn is_keyword_at(&self, off: usize) -> bool {
        let mut chars = self.text[off..].chars();
        chars.next() == Some('@') && chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && self.prev_is_space(off)
    }

    fn is_close_at(&self, off: usize) -> bool {
        let mut chars = self.text[off..].chars();
        chars.next() == Some('}') && chars.next().is_none_or(char::is_whitespace) && self.prev_is_space(off)
    }

    /// Start of the next keyword or standalone `}` at or after `from`.
    fn next_boundary(&self, from: usize) -> usize {
        self.text[from..]
            .char_indices()
            .map(|(k, _)| from + k)
            .find(|&off| self.is_keyword_at(off) || self.is_close_at(off))
            .unwrap_or(self.text.len())
    }

    /// End of embedded code: an unmatched `}` or the next keyword.
    fn code_end(&self, from: usize) -> (usize, bool) {
        let mut depth = 0usize;
        for (k, c) in self.text[from..].char_indices() {
            let off = from + k;
            match c {
                '{' => depth += 1,
                '}' if depth == 0 => return (off, true),
                '}' => depth -= 1,
                '@' if self.is_keyword_at(off) => return (off, false),
                _ => {}
            }
        }
        (self.text.len(), false)
    }

    /// Comma separated items read by `item`; the list ends at the first item
    /// not followed by a comma.
    fn list<T, E>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, E>) -> Result<Vec<T>, E> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            out.push(item(self)?);
            let save = self.i;
            self.skip_ws();
            if !self.eat(',') {
                self.i = save;
                return Ok(out);
            }
        }
    }
}

/// Splits text into description lines and ASP code. The code is the longest
/// suffix of whole lines that parses, or failing that the longest prefix.
fn split_description_and_code(text: &str, origin: SourcePos) -> Result<(String, Program), ParseError> {
    let mut starts = vec![0];
    starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
    for (k, &start) in starts.iter().enumerate() {
        let suffix = &text[start..];
        let pos = if k == 0 { origin } else { SourcePos::new(origin.line + k as u32, 1) };
        if let Ok(program) = parse_asp_at(suffix, pos) {
            let description = &text[..start];
            // a line with `:-` is a broken rule, not prose
            if let Some(bad) = description.lines().position(|l| l.contains(":-")) {
                let bad_start = starts[bad];
                let pos = if bad == 0 { origin } else { SourcePos::new(origin.line + bad as u32, 1) };
                return Err(parse_asp_at(&text[bad_start..], pos).expect_err("suffix starting at a broken rule"));
            }
            return Ok((description.to_string(), program));
        }
    }
    for &end in starts.iter().skip(1).rev() {
        if let Ok(program) = parse_asp_at(&text[..end], origin) {
            if !program.is_empty() {
                return Ok((text[end..].to_string(), program));
            }
        }
    }
    Ok((text.to_string(), Program::default()))
}

fn clean_description(text: &str) -> String {
    let lines: Vec<&str> = text.trim().lines().map(str::trim).collect();
    lines.join("\n")
}

fn append_description(target: &mut String, text: &str) {
    let text = clean_description(text);
    if text.is_empty() {
        return;
    }
    if !target.is_empty() {
        target.push('\n');
    }
    target.push_str(&text);
}

impl FileParser<'_> {
    fn top(&mut self) -> &mut Block {
        self.stack.last_mut().expect("root block")
    }

    fn loc(&self, pos: SourcePos) -> Location {
        Location { file: self.file, pos }
    }

    fn malformed(&self, pos: SourcePos, message: impl Into<String>) -> LanaError {
        LanaError::Malformed { file: self.name.to_string(), pos, message: message.into() }
    }

    fn asp_err(&self, source: ParseError) -> LanaError {
        LanaError::Asp { file: self.name.to_string(), source }
    }

    fn annotation(&mut self, content: &str, base: SourcePos) -> Result<(), LanaError> {
        let mut a = Ann { text: content, base, i: 0 };
        let mut st = AnnState { item: Item::None, cond: None, test_atoms: None, new_test: false };
        loop {
            a.skip_ws();
            if a.i >= a.text.len() {
                break;
            }
            if a.is_keyword_at(a.i) {
                let pos = a.pos();
                a.i += 1;
                let kw = a.take_while(|c| c.is_ascii_alphanumeric());
                self.keyword(kw, pos, &mut a, &mut st)?;
            } else if a.is_close_at(a.i) {
                let pos = a.pos();
                a.i += 1;
                self.close(pos, a.pos(), &mut st)?;
            } else {
                let end = a.next_boundary(a.i);
                let text = &a.text[a.i..end];
                self.describe(&mut st, text);
                a.i = end;
            }
        }
        if let Some(c) = &st.cond {
            return Err(self.malformed(c.location.pos, format!("condition {} is not closed with `}}`", c.name)));
        }
        if let Some((_, pos)) = st.test_atoms {
            return Err(self.malformed(pos, "@testatoms needs a mode such as @trueinall"));
        }
        self.capture = if st.new_test { self.current_test } else { None };
        Ok(())
    }

    fn describe(&mut self, st: &mut AnnState, text: &str) {
        match st.item {
            Item::None => {}
            Item::Block => append_description(&mut self.top().description, text),
            Item::Atom(i) => append_description(&mut self.top().atom_decls[i].description, text),
            Item::Term(i) => append_description(&mut self.top().term_decls[i].description, text),
            Item::Cond => {
                if let Some(c) = st.cond.as_mut() {
                    append_description(&mut c.description, text);
                }
            }
            Item::Test(i) => append_description(&mut self.tests[i].description, text),
        }
    }

    fn close(&mut self, pos: SourcePos, after: SourcePos, st: &mut AnnState) -> Result<(), LanaError> {
        if let Some(c) = st.cond.take() {
            return self.finish_condition(c);
        }
        if self.stack.len() == 1 {
            return Err(LanaError::OverlappingBlocks {
                file: self.name.to_string(),
                pos,
                message: "`}` does not close any open block".to_string(),
            });
        }
        let mut block = self.stack.pop().expect("open block");
        block.span.end = self.loc(after);
        self.top().children.push(block);
        st.item = Item::None;
        Ok(())
    }

    fn finish_condition(&mut self, c: PendingCondition) -> Result<(), LanaError> {
        let Some(mode) = c.mode else {
            return Err(self.malformed(c.location.pos, format!("condition {} needs @always or @never", c.name)));
        };
        let cond = Condition {
            kind: c.kind,
            name: c.name,
            description: c.description,
            mode,
            atoms: c.atoms,
            rules: c.rules,
            location: c.location,
        };
        self.top().conditions.push(cond);
        Ok(())
    }

    fn test_index(&self, pos: SourcePos, kw: &str) -> Result<usize, LanaError> {
        self.current_test.ok_or_else(|| self.malformed(pos, format!("@{kw} outside a test case")))
    }

    fn ground_atoms(&self, a: &mut Ann) -> Result<Vec<GroundAtom>, LanaError> {
        a.skip_ws();
        let start = a.i;
        let mut p = Parser::with_origin(a.rest(), a.pos());
        let mut atoms = Vec::new();
        loop {
            let pos = p.position();
            let atom = p.parse_atom().map_err(|e| self.asp_err(e))?;
            let ground = GroundAtom::from_atom(&atom).filter(|_| atom.is_ground()).ok_or_else(|| {
                LanaError::NonGroundTestAtom { file: self.name.to_string(), pos, atom: atom.to_string() }
            })?;
            atoms.push(ground);
            if !p.eat_comma() {
                break;
            }
        }
        a.i = start + p.consumed();
        Ok(atoms)
    }

    fn keyword(&mut self, kw: &str, pos: SourcePos, a: &mut Ann, st: &mut AnnState) -> Result<(), LanaError> {
        match kw {
            "block" => {
                a.skip_inline_ws();
                let name = a.word().map(str::to_string);
                a.skip_ws();
                if !a.eat('{') {
                    return Err(self.malformed(a.pos(), "expected `{` after @block"));
                }
                let name = name.unwrap_or_else(|| format!("block_{}_{}", pos.line, pos.col));
                let loc = self.loc(pos);
                self.stack.push(Block::new(name, Span { start: loc, end: loc }));
                st.item = Item::Block;
            }
            "atom" => {
                a.skip_ws();
                let start = a.i;
                let mut p = Parser::with_origin(a.rest(), a.pos());
                let atom = p.parse_atom().map_err(|e| self.asp_err(e))?;
                a.i = start + p.consumed();
                let mut term_names = Vec::new();
                for t in &atom.args {
                    match t {
                        Term::Var(v) | Term::Sym(v) => term_names.push(v.clone()),
                        other => return Err(self.malformed(pos, format!("@atom argument `{other}` is not a term name"))),
                    }
                }
                let decl = AtomDecl { predicate: atom.predicate, term_names, description: String::new(), location: self.loc(pos) };
                let block = self.top();
                block.atom_decls.push(decl);
                st.item = Item::Atom(block.atom_decls.len() - 1);
            }
            "term" => {
                let names = a.list(|a| a.word().map(str::to_string).ok_or(()));
                let names = names.map_err(|_| self.malformed(pos, "@term expects term names"))?;
                let decl = TermDecl { names, description: String::new(), type_spec: None, location: self.loc(pos) };
                let block = self.top();
                block.term_decls.push(decl);
                st.item = Item::Term(block.term_decls.len() - 1);
            }
            "from" | "with" | "samerangeas" => {
                let Item::Term(idx) = st.item else {
                    return Err(self.malformed(pos, format!("@{kw} must follow @term")));
                };
                let spec = self.type_spec(kw, pos, a, idx)?;
                self.top().term_decls[idx].type_spec = Some(spec);
            }
            "input" | "requires" | "output" | "defines" => {
                let start = a.i;
                let sigs = a.list(|a| {
                    let name = a.word().ok_or(())?;
                    a.skip_ws();
                    if !a.eat('/') {
                        return Err(());
                    }
                    a.skip_ws();
                    let digits = a.take_while(|c| c.is_ascii_digit());
                    let arity = digits.parse::<usize>().map_err(|_| ())?;
                    Ok(Signature::new(name, arity))
                });
                let sigs = sigs.map_err(|_| {
                    let line = a.text[start..].trim_start().lines().next().unwrap_or("").trim().to_string();
                    LanaError::MalformedSignatureList { file: self.name.to_string(), pos, text: line }
                })?;
                let block = self.top();
                let list = match kw {
                    "input" | "requires" => &mut block.input_sig,
                    _ => &mut block.output_sig,
                };
                for s in sigs {
                    if !list.contains(&s) {
                        list.push(s);
                    }
                }
                match kw {
                    "input" => block.input_keyword = InputKeyword::Input,
                    "requires" => block.input_keyword = InputKeyword::Requires,
                    "output" => block.output_keyword = OutputKeyword::Output,
                    _ => block.output_keyword = OutputKeyword::Defines,
                }
                st.item = Item::None;
            }
            "assert" | "precon" | "postcon" => {
                if let Some(c) = st.cond.take() {
                    self.finish_condition(c)?;
                }
                a.skip_inline_ws();
                let name = a.word().map(str::to_string).ok_or_else(|| self.malformed(pos, format!("@{kw} needs a name")))?;
                a.skip_ws();
                if !a.eat('{') {
                    return Err(self.malformed(a.pos(), format!("expected `{{` after @{kw} {name}")));
                }
                let kind = match kw {
                    "assert" => ConditionKind::Assert,
                    "precon" => ConditionKind::Precondition,
                    _ => ConditionKind::Postcondition,
                };
                st.cond = Some(PendingCondition {
                    kind,
                    name,
                    description: String::new(),
                    mode: None,
                    atoms: Vec::new(),
                    rules: Program::default(),
                    location: self.loc(pos),
                });
                st.item = Item::Cond;
            }
            "always" | "never" => {
                if st.cond.is_none() {
                    return Err(self.malformed(pos, format!("@{kw} outside @assert, @precon or @postcon")));
                }
                let atoms = self.ground_atoms(a)?;
                let (end, closed) = a.code_end(a.i);
                let code_pos = a.pos();
                let (desc, rules) =
                    split_description_and_code(&a.text[a.i..end], code_pos).map_err(|e| self.asp_err(e))?;
                let c = st.cond.as_mut().expect("open condition");
                c.mode = Some(if kw == "always" { ConditionMode::Always } else { ConditionMode::Never });
                c.atoms.extend(atoms);
                append_description(&mut c.description, &desc);
                c.rules.extend(&rules);
                a.i = end;
                if closed {
                    a.i += 1;
                    let c = st.cond.take().expect("open condition");
                    self.finish_condition(c)?;
                    st.item = Item::None;
                }
            }
            "testcase" => {
                a.skip_inline_ws();
                let name = a.word().map(str::to_string).unwrap_or_else(|| self.stem.clone());
                self.tests.push(TestCase {
                    name,
                    description: String::new(),
                    scope: Vec::new(),
                    conditions: Vec::new(),
                    rules: Program::default(),
                    location: self.loc(pos),
                });
                let idx = self.tests.len() - 1;
                self.current_test = Some(idx);
                st.new_test = true;
                st.item = Item::Test(idx);
            }
            "scope" => {
                let t = self.test_index(pos, kw)?;
                let names = a.list(|a| {
                    let w = a.take_while(|c| !c.is_whitespace() && c != ',');
                    if w.is_empty() || w.starts_with('@') {
                        Err(())
                    } else {
                        Ok(w.to_string())
                    }
                });
                let names = names.map_err(|_| self.malformed(pos, "@scope expects block names"))?;
                self.tests[t].scope.extend(names);
                st.item = Item::Test(t);
            }
            "testhasanswerset" | "testnoanswerset" => {
                let t = self.test_index(pos, kw)?;
                let c = if kw == "testhasanswerset" { TestCondition::HasAnswerSet } else { TestCondition::NoAnswerSet };
                self.tests[t].conditions.push(c);
                st.item = Item::Test(t);
            }
            "testatoms" => {
                let t = self.test_index(pos, kw)?;
                if st.test_atoms.is_some() {
                    return Err(self.malformed(pos, "@testatoms needs a mode before the next @testatoms"));
                }
                st.test_atoms = Some((self.ground_atoms(a)?, pos));
                st.item = Item::Test(t);
            }
            "trueinall" | "trueinatleast" | "trueinatmost" | "falseinall" | "falseinatleast" | "falseinatmost" => {
                let t = self.test_index(pos, kw)?;
                let Some((atoms, _)) = st.test_atoms.take() else {
                    return Err(self.malformed(pos, format!("@{kw} must follow @testatoms")));
                };
                let mut count = || -> Result<u32, LanaError> {
                    a.skip_inline_ws();
                    let digits = a.take_while(|c| c.is_ascii_digit());
                    digits
                        .parse::<u32>()
                        .ok()
                        .filter(|n| *n > 0)
                        .ok_or_else(|| self.malformed(pos, format!("@{kw} expects a positive integer")))
                };
                let mode = match kw {
                    "trueinall" => AtomsMode::TrueInAll,
                    "trueinatleast" => AtomsMode::TrueInAtLeast(count()?),
                    "trueinatmost" => AtomsMode::TrueInAtMost(count()?),
                    "falseinall" => AtomsMode::FalseInAll,
                    "falseinatleast" => AtomsMode::FalseInAtLeast(count()?),
                    _ => AtomsMode::FalseInAtMost(count()?),
                };
                self.tests[t].conditions.push(TestCondition::TestAtoms { atoms, mode });
                st.item = Item::Test(t);
            }
            _ => {
                self.diags.push(Diagnostic::new(
                    DiagnosticKind::UnknownKeyword { keyword: kw.to_string() },
                    self.name,
                    pos,
                ));
                a.i = a.next_boundary(a.i);
                st.item = Item::None;
            }
        }
        Ok(())
    }

    fn type_spec(&mut self, kw: &str, pos: SourcePos, a: &mut Ann, idx: usize) -> Result<TypeSpec, LanaError> {
        match kw {
            "from" => {
                a.skip_ws();
                let start = a.i;
                let mut p = Parser::with_origin(a.rest(), a.pos());
                let mut terms = Vec::new();
                loop {
                    let term = p.parse_term().map_err(|e| self.asp_err(e))?;
                    match term {
                        Term::Interval(lo, hi) => terms.extend((lo..=hi).map(Term::Int)),
                        t if t.is_ground() => terms.push(t),
                        t => return Err(self.malformed(pos, format!("@from term `{t}` is not ground"))),
                    }
                    if !p.eat_comma() {
                        break;
                    }
                }
                a.i = start + p.consumed();
                Ok(TypeSpec::FromList(terms))
            }
            "with" => {
                a.skip_ws();
                let end = a.next_boundary(a.i);
                let region = a.text[a.i..end].replace("#V", TYPE_VAR);
                let origin = a.pos();
                let mut p = Parser::with_origin(&region, origin);
                let body = p.parse_body().map_err(|e| self.asp_err(e))?;
                let mut vars = Vec::new();
                for e in &body {
                    e.collect_vars(&mut vars);
                }
                if !vars.contains(&TYPE_VAR) {
                    return Err(self.malformed(pos, "@with body must mention #V"));
                }
                let consumed = p.consumed();
                let tail_pos = a.pos_at(a.i + consumed);
                let (desc, code) =
                    split_description_and_code(&region[consumed..], tail_pos).map_err(|e| self.asp_err(e))?;
                append_description(&mut self.top().term_decls[idx].description, &desc);
                a.i = end;
                Ok(TypeSpec::WithBody { body, code })
            }
            _ => {
                a.skip_inline_ws();
                let name = a.word().ok_or_else(|| self.malformed(pos, "@samerangeas expects a term name"))?;
                Ok(TypeSpec::SameRangeAs(name.to_string()))
            }
        }
    }
}
