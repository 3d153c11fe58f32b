//! Hand-written lexer and recursive-descent parser for the rule language.
//!
//! The grammar covers facts, normal rules, constraints, naf literals,
//! comparisons, `+`/`-` arithmetic, integer intervals and choice heads with
//! `:`-separated element conditions. `%` line comments and `%* ... *%` block
//! comments are skipped.

use std::collections::BTreeSet;

use crate::error::ParseError;
use crate::syntax::*;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Dot,
    DotDot,
    If,
    Plus,
    Minus,
    Cmp(CmpOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::If => "`:-`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Cmp(op) => format!("`{}`", op.as_str()),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    pos: SourcePos,
    offset: usize,
    end: usize,
}

struct Lexer<'a> {
    src: &'a str,
    offset: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, origin: SourcePos) -> Self {
        Self { src, offset: 0, line: origin.line.max(1), col: origin.col.max(1) }
    }

    fn pos(&self) -> SourcePos {
        SourcePos::new(self.line, self.col)
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn peek_char_at(&self, n: usize) -> Option<char> {
        self.src[self.offset..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') if self.peek_char_at(1) == Some('*') => {
                    let start = self.pos();
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            Some('*') if self.peek_char() == Some('%') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                            None => {
                                return Err(ParseError::syntax(start, "unterminated block comment"))
                            }
                        }
                    }
                }
                Some('%') => {
                    while let Some(c) = self.peek_char() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next_token(&mut self) -> Result<Spanned, ParseError> {
        self.skip_trivia()?;
        let pos = self.pos();
        let offset = self.offset;
        let Some(c) = self.peek_char() else {
            return Ok(Spanned { tok: Tok::Eof, pos, offset, end: offset });
        };
        let tok = match c {
            '(' => self.single(Tok::LParen),
            ')' => self.single(Tok::RParen),
            '{' => self.single(Tok::LBrace),
            '}' => self.single(Tok::RBrace),
            ',' => self.single(Tok::Comma),
            ';' => self.single(Tok::Semi),
            '+' => self.single(Tok::Plus),
            '-' => self.single(Tok::Minus),
            '.' => {
                self.bump();
                if self.peek_char() == Some('.') {
                    self.bump();
                    Tok::DotDot
                } else {
                    Tok::Dot
                }
            }
            ':' => {
                self.bump();
                if self.peek_char() == Some('-') {
                    self.bump();
                    Tok::If
                } else {
                    Tok::Colon
                }
            }
            '=' => {
                self.bump();
                if self.peek_char() == Some('=') {
                    self.bump();
                }
                Tok::Cmp(CmpOp::Eq)
            }
            '!' => {
                self.bump();
                if self.peek_char() == Some('=') {
                    self.bump();
                    Tok::Cmp(CmpOp::Ne)
                } else {
                    return Err(ParseError::syntax(pos, "expected `=` after `!`"));
                }
            }
            '<' => {
                self.bump();
                match self.peek_char() {
                    Some('=') => {
                        self.bump();
                        Tok::Cmp(CmpOp::Le)
                    }
                    Some('>') => {
                        self.bump();
                        Tok::Cmp(CmpOp::Ne)
                    }
                    _ => Tok::Cmp(CmpOp::Lt),
                }
            }
            '>' => {
                self.bump();
                if self.peek_char() == Some('=') {
                    self.bump();
                    Tok::Cmp(CmpOp::Ge)
                } else {
                    Tok::Cmp(CmpOp::Gt)
                }
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some('\\') => {
                            s.push('\\');
                            if let Some(e) = self.bump() {
                                s.push(e);
                            }
                        }
                        Some('\n') | None => {
                            return Err(ParseError::syntax(pos, "unterminated string"))
                        }
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                let start = self.offset;
                while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
                let digits = &self.src[start..self.offset];
                let value = digits
                    .parse::<i64>()
                    .map_err(|_| ParseError::syntax(pos, format!("integer out of range: {digits}")))?;
                Tok::Int(value)
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = self.offset;
                while self.peek_char().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                    self.bump();
                }
                let word = self.src[start..self.offset].to_string();
                if c.is_uppercase() || c == '_' {
                    Tok::Var(word)
                } else {
                    Tok::Ident(word)
                }
            }
            other => return Err(ParseError::syntax(pos, format!("unexpected character `{other}`"))),
        };
        Ok(Spanned { tok, pos, offset, end: self.offset })
    }

    fn single(&mut self, tok: Tok) -> Tok {
        self.bump();
        tok
    }
}

/// Incremental parser over a text fragment.
///
/// Besides whole programs it can parse single terms, atoms and body
/// elements, reporting how many bytes were consumed, which lets callers
/// embed rule syntax inside other notations.
pub struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Result<Spanned, ParseError>>,
    anon_counter: usize,
    consumed: usize,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Self {
        Self::with_origin(src, SourcePos::new(1, 1))
    }

    /// Positions reported by this parser start at `origin`.
    pub fn with_origin(src: &'a str, origin: SourcePos) -> Self {
        Self { lexer: Lexer::new(src, origin), peeked: None, anon_counter: 0, consumed: 0 }
    }

    fn fill(&mut self) {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token());
        }
    }

    fn peek(&mut self) -> Result<&Spanned, ParseError> {
        self.fill();
        self.peeked.as_ref().expect("filled").as_ref().map_err(Clone::clone)
    }

    fn peek_tok(&mut self) -> Result<Tok, ParseError> {
        Ok(self.peek()?.tok.clone())
    }

    /// Lookahead that treats a lexing error as "not this token", so a term
    /// can end right before text that is not ASP.
    fn next_is(&mut self, tok: &Tok) -> bool {
        matches!(self.peek(), Ok(t) if t.tok == *tok)
    }

    fn advance(&mut self) -> Result<Spanned, ParseError> {
        self.fill();
        let t = self.peeked.take().expect("filled");
        if let Ok(t) = &t {
            self.consumed = t.end;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Spanned, ParseError> {
        let t = self.advance()?;
        if t.tok == want {
            Ok(t)
        } else {
            Err(ParseError::syntax(
                t.pos,
                format!("expected {}, found {}", want.describe(), t.tok.describe()),
            ))
        }
    }

    /// Byte offset of the next unconsumed token (or of the end of input).
    pub fn offset(&mut self) -> usize {
        match self.peek() {
            Ok(t) => t.offset,
            Err(_) => self.lexer.offset,
        }
    }

    /// Byte offset just past the last consumed token.
    pub fn consumed(&self) -> usize {
        self.consumed
    }

    /// Position of the next unconsumed token.
    pub fn position(&mut self) -> SourcePos {
        match self.peek() {
            Ok(t) => t.pos,
            Err(_) => self.lexer.pos(),
        }
    }

    pub fn at_eof(&mut self) -> bool {
        matches!(self.peek(), Ok(Spanned { tok: Tok::Eof, .. }))
    }

    /// Consumes a `,` if it is the next token. Lexing failures count as "no".
    pub fn eat_comma(&mut self) -> bool {
        if matches!(self.peek(), Ok(Spanned { tok: Tok::Comma, .. })) {
            let _ = self.advance();
            true
        } else {
            false
        }
    }

    pub fn parse_program(&mut self) -> Result<Program, ParseError> {
        let mut rules = Vec::new();
        while !matches!(self.peek_tok()?, Tok::Eof) {
            rules.push(self.parse_rule()?);
        }
        Ok(Program { rules })
    }

    pub fn parse_rule(&mut self) -> Result<Rule, ParseError> {
        let pos = self.peek()?.pos;
        let head = match self.peek_tok()? {
            Tok::If => Head::Constraint,
            Tok::LBrace | Tok::Int(_) => self.parse_choice()?,
            _ => Head::Normal(self.parse_atom()?),
        };
        let mut body = Vec::new();
        match self.advance()? {
            Spanned { tok: Tok::Dot, .. } if !matches!(head, Head::Constraint) => {}
            Spanned { tok: Tok::If, .. } => {
                if !matches!(self.peek_tok()?, Tok::Dot) {
                    body = self.parse_body()?;
                }
                self.expect(Tok::Dot)?;
            }
            t => {
                return Err(ParseError::syntax(
                    t.pos,
                    format!("expected `.` or `:-`, found {}", t.tok.describe()),
                ))
            }
        }
        let rule = Rule { head, body, pos };
        check_safety(&rule)?;
        Ok(rule)
    }

    fn parse_choice(&mut self) -> Result<Head, ParseError> {
        let lower = match self.peek_tok()? {
            Tok::Int(_) => Some(self.parse_bound()?),
            _ => None,
        };
        self.expect(Tok::LBrace)?;
        let mut elements = Vec::new();
        if !matches!(self.peek_tok()?, Tok::RBrace) {
            loop {
                let head = self.parse_atom()?;
                let mut conditions = Vec::new();
                while matches!(self.peek_tok()?, Tok::Colon) {
                    self.advance()?;
                    conditions.push(self.parse_body_elem()?);
                }
                elements.push(ChoiceElement { head, conditions });
                match self.peek_tok()? {
                    Tok::Semi | Tok::Comma => {
                        self.advance()?;
                    }
                    _ => break,
                }
            }
        }
        self.expect(Tok::RBrace)?;
        let upper = match self.peek_tok()? {
            Tok::Int(_) => Some(self.parse_bound()?),
            Tok::Var(_) => {
                let t = self.advance()?;
                return Err(ParseError::syntax(t.pos, "choice bounds must be integer literals"));
            }
            _ => None,
        };
        Ok(Head::Choice { lower, elements, upper })
    }

    fn parse_bound(&mut self) -> Result<u32, ParseError> {
        let t = self.advance()?;
        match t.tok {
            Tok::Int(i) => u32::try_from(i).map_err(|_| ParseError::syntax(t.pos, "choice bound out of range")),
            other => Err(ParseError::syntax(t.pos, format!("expected bound, found {}", other.describe()))),
        }
    }

    pub fn parse_body(&mut self) -> Result<Vec<BodyElem>, ParseError> {
        let mut body = vec![self.parse_body_elem()?];
        while matches!(self.peek_tok()?, Tok::Comma) {
            self.advance()?;
            body.push(self.parse_body_elem()?);
        }
        Ok(body)
    }

    pub fn parse_body_elem(&mut self) -> Result<BodyElem, ParseError> {
        let pos = self.peek()?.pos;
        if let Tok::Ident(w) = self.peek_tok()? {
            if w == "not" {
                self.advance()?;
                if let Tok::Ident(_) = self.peek_tok()? {
                    return Ok(BodyElem::Lit(Literal::naf(self.parse_atom()?)));
                }
                // `not` used as a plain constant
                return self.finish_body_elem(Term::Sym(w), pos);
            }
        }
        let term = self.parse_term()?;
        self.finish_body_elem(term, pos)
    }

    fn finish_body_elem(&mut self, left: Term, pos: SourcePos) -> Result<BodyElem, ParseError> {
        if let Tok::Cmp(op) = self.peek_tok()? {
            self.advance()?;
            let right = self.parse_term()?;
            return Ok(BodyElem::Cmp(Comparison { op, left, right }));
        }
        Ok(BodyElem::Lit(Literal::pos(term_to_atom(left, pos)?)))
    }

    pub fn parse_atom(&mut self) -> Result<Atom, ParseError> {
        let t = self.advance()?;
        let Tok::Ident(name) = t.tok else {
            return Err(ParseError::syntax(t.pos, format!("expected atom, found {}", t.tok.describe())));
        };
        // a lexing failure after the name just ends the atom
        let args = if matches!(self.peek(), Ok(Spanned { tok: Tok::LParen, .. })) {
            self.parse_args()?
        } else {
            Vec::new()
        };
        Ok(Atom { predicate: name, args })
    }

    fn parse_args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if !matches!(self.peek_tok()?, Tok::RParen) {
            args.push(self.parse_term()?);
            while matches!(self.peek_tok()?, Tok::Comma) {
                self.advance()?;
                args.push(self.parse_term()?);
            }
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    pub fn parse_term(&mut self) -> Result<Term, ParseError> {
        let mut left = self.parse_primary()?;
        loop {
            let op = match self.peek().map(|t| &t.tok) {
                Ok(Tok::Plus) => ArithOp::Add,
                Ok(Tok::Minus) => ArithOp::Sub,
                _ => return Ok(left),
            };
            self.advance()?;
            let right = self.parse_primary()?;
            left = Term::Arith(op, Box::new(left), Box::new(right));
        }
    }

    fn parse_int_literal(&mut self) -> Result<Option<i64>, ParseError> {
        match self.peek_tok()? {
            Tok::Int(i) => {
                self.advance()?;
                Ok(Some(i))
            }
            Tok::Minus => {
                self.advance()?;
                let t = self.advance()?;
                match t.tok {
                    Tok::Int(i) => Ok(Some(-i)),
                    other => Err(ParseError::syntax(t.pos, format!("expected integer after `-`, found {}", other.describe()))),
                }
            }
            _ => Ok(None),
        }
    }

    fn parse_primary(&mut self) -> Result<Term, ParseError> {
        let pos = self.peek()?.pos;
        if let Some(i) = self.parse_int_literal()? {
            if self.next_is(&Tok::DotDot) {
                self.advance()?;
                let hi_pos = self.position();
                let Some(hi) = self.parse_int_literal()? else {
                    return Err(ParseError::syntax(hi_pos, "interval bounds must be integer literals"));
                };
                if i > hi {
                    return Err(ParseError::syntax(pos, format!("empty interval {i}..{hi}")));
                }
                return Ok(Term::Interval(i, hi));
            }
            return Ok(Term::Int(i));
        }
        let t = self.advance()?;
        match t.tok {
            Tok::Var(v) if v == "_" => {
                self.anon_counter += 1;
                Ok(Term::Var(format!("_{}", self.anon_counter)))
            }
            Tok::Var(v) => Ok(Term::Var(v)),
            Tok::Ident(name) => {
                if self.next_is(&Tok::LParen) {
                    Ok(Term::Func(name, self.parse_args()?))
                } else {
                    Ok(Term::Sym(name))
                }
            }
            Tok::Str(s) => Ok(Term::Sym(normalize_quoted(&s))),
            Tok::LParen => {
                let inner = self.parse_term()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(ParseError::syntax(t.pos, format!("expected term, found {}", other.describe()))),
        }
    }
}

/// Quoted constants that spell a plain lowercase identifier are the same
/// constant as the bare identifier.
fn normalize_quoted(content: &str) -> String {
    let mut chars = content.chars();
    let plain = chars.next().is_some_and(|c| c.is_lowercase())
        && content.chars().all(|c| c.is_alphanumeric() || c == '_')
        && content != "not";
    if plain {
        content.to_string()
    } else {
        format!("\"{content}\"")
    }
}

fn term_to_atom(term: Term, pos: SourcePos) -> Result<Atom, ParseError> {
    match term {
        Term::Sym(name) if !name.starts_with('"') => Ok(Atom { predicate: name, args: Vec::new() }),
        Term::Func(name, args) => Ok(Atom { predicate: name, args }),
        other => Err(ParseError::syntax(pos, format!("expected atom or comparison, found term `{other}`"))),
    }
}

/// Variables bound by positive literals and by `=` assignments whose other
/// side is already bound, starting from `bound`.
fn bound_vars<'a>(elems: &'a [BodyElem], mut bound: BTreeSet<&'a str>) -> BTreeSet<&'a str> {
    for e in elems {
        if let BodyElem::Lit(l) = e {
            if l.is_positive() {
                let mut vs = Vec::new();
                l.atom.args.iter().for_each(|a| a.collect_bindable_vars(&mut vs));
                bound.extend(vs);
            }
        }
    }
    loop {
        let mut changed = false;
        for e in elems {
            if let BodyElem::Cmp(Comparison { op: CmpOp::Eq, left, right }) = e {
                for (target, source) in [(left, right), (right, left)] {
                    if let Term::Var(v) = target {
                        if bound.contains(v.as_str()) {
                            continue;
                        }
                        let mut vs = Vec::new();
                        source.collect_vars(&mut vs);
                        if vs.iter().all(|s| bound.contains(s)) {
                            bound.insert(v);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return bound;
        }
    }
}

fn check_safety(rule: &Rule) -> Result<(), ParseError> {
    let global = bound_vars(&rule.body, BTreeSet::new());
    let unsafe_in = |vars: Vec<&str>, bound: &BTreeSet<&str>| -> Option<String> {
        vars.into_iter().find(|v| !bound.contains(v)).map(str::to_string)
    };
    let mut body_vars = Vec::new();
    rule.body.iter().for_each(|e| e.collect_vars(&mut body_vars));
    if let Some(var) = unsafe_in(body_vars, &global) {
        return Err(ParseError::Unsafe { pos: rule.pos, var });
    }
    match &rule.head {
        Head::Normal(a) => {
            let mut vs = Vec::new();
            a.collect_vars(&mut vs);
            if let Some(var) = unsafe_in(vs, &global) {
                return Err(ParseError::Unsafe { pos: rule.pos, var });
            }
        }
        Head::Constraint => {}
        Head::Choice { elements, .. } => {
            for el in elements {
                let local = bound_vars(&el.conditions, global.clone());
                let mut vs = Vec::new();
                el.head.collect_vars(&mut vs);
                el.conditions.iter().for_each(|c| c.collect_vars(&mut vs));
                if let Some(var) = unsafe_in(vs, &local) {
                    return Err(ParseError::Unsafe { pos: rule.pos, var });
                }
            }
        }
    }
    Ok(())
}

/// Parses a complete program.
pub fn parse_asp(text: &str) -> Result<Program, ParseError> {
    Parser::new(text).parse_program()
}

/// Parses a program whose first character sits at `origin` in a larger file.
pub fn parse_asp_at(text: &str, origin: SourcePos) -> Result<Program, ParseError> {
    Parser::with_origin(text, origin).parse_program()
}

/// Parses exactly one atom, e.g. `ship(1,1,1,2)`.
pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let mut p = Parser::new(text);
    let atom = p.parse_atom()?;
    let pos = p.position();
    if !p.at_eof() {
        return Err(ParseError::syntax(pos, "trailing input after atom"));
    }
    Ok(atom)
}
