//! Non-ground syntax tree for gringo-style normal programs with choice rules.

use std::fmt;

/// 1-based line and column of a token in its source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SourcePos {
    pub line: u32,
    pub col: u32,
}

impl SourcePos {
    pub const fn new(line: u32, col: u32) -> Self {
        Self { line, col }
    }
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Int(i64),
    /// Lowercase identifier, or a quoted string kept with its quotes when it
    /// is not a plain identifier.
    Sym(String),
    /// Function term; grounds as inert structure.
    Func(String, Vec<Term>),
    Interval(i64, i64),
    Arith(ArithOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn sym(name: impl Into<String>) -> Self {
        Term::Sym(name.into())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Int(_) | Term::Sym(_) | Term::Interval(..) => true,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
            Term::Arith(_, l, r) => l.is_ground() && r.is_ground(),
        }
    }

    pub fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Int(_) | Term::Sym(_) | Term::Interval(..) => {}
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Arith(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Variables that a match against a ground value can bind: those not
    /// buried inside arithmetic.
    pub(crate) fn collect_bindable_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_bindable_vars(out)),
            _ => {}
        }
    }

    fn contains_interval(&self) -> bool {
        match self {
            Term::Interval(..) => true,
            Term::Func(_, args) => args.iter().any(Term::contains_interval),
            Term::Arith(_, l, r) => l.contains_interval() || r.contains_interval(),
            _ => false,
        }
    }

    pub fn substitute(&self, var: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => replacement.clone(),
            Term::Func(n, args) => {
                Term::Func(n.clone(), args.iter().map(|a| a.substitute(var, replacement)).collect())
            }
            Term::Arith(op, l, r) => Term::Arith(
                *op,
                Box::new(l.substitute(var, replacement)),
                Box::new(r.substitute(var, replacement)),
            ),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Int(i) => write!(f, "{i}"),
            Term::Sym(s) => f.write_str(s),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                write_joined(f, args, ",")?;
                f.write_str(")")
            }
            Term::Interval(lo, hi) => write!(f, "{lo}..{hi}"),
            Term::Arith(op, l, r) => {
                let sym = match op {
                    ArithOp::Add => '+',
                    ArithOp::Sub => '-',
                };
                write!(f, "{l}{sym}")?;
                if matches!(**r, Term::Arith(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

pub(crate) fn write_joined<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: &[T],
    sep: &str,
) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// Predicate name plus arity, rendered `name/arity`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub predicate: String,
    pub arity: usize,
}

impl Signature {
    pub fn new(predicate: impl Into<String>, arity: usize) -> Self {
        Self { predicate: predicate.into(), arity }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.predicate, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self { predicate: predicate.into(), args }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        Self::new(predicate, Vec::new())
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.predicate.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }

    pub(crate) fn contains_interval(&self) -> bool {
        self.args.iter().any(Term::contains_interval)
    }

    pub fn substitute(&self, var: &str, replacement: &Term) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|a| a.substitute(var, replacement)).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_joined(f, &self.args, ",")?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    /// `not a`
    Naf,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub polarity: Polarity,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Self { atom, polarity: Polarity::Positive }
    }

    pub fn naf(atom: Atom) -> Self {
        Self { atom, polarity: Polarity::Naf }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Positive => write!(f, "{}", self.atom),
            Polarity::Naf => write!(f, "not {}", self.atom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Comparison {
    pub op: CmpOp,
    pub left: Term,
    pub right: Term,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.left, self.op.as_str(), self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BodyElem {
    Lit(Literal),
    Cmp(Comparison),
}

impl BodyElem {
    pub fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            BodyElem::Lit(l) => l.atom.collect_vars(out),
            BodyElem::Cmp(c) => {
                c.left.collect_vars(out);
                c.right.collect_vars(out);
            }
        }
    }

    pub fn substitute(&self, var: &str, replacement: &Term) -> BodyElem {
        match self {
            BodyElem::Lit(l) => BodyElem::Lit(Literal {
                atom: l.atom.substitute(var, replacement),
                polarity: l.polarity,
            }),
            BodyElem::Cmp(c) => BodyElem::Cmp(Comparison {
                op: c.op,
                left: c.left.substitute(var, replacement),
                right: c.right.substitute(var, replacement),
            }),
        }
    }

    pub fn atom(&self) -> Option<&Atom> {
        match self {
            BodyElem::Lit(l) => Some(&l.atom),
            BodyElem::Cmp(_) => None,
        }
    }
}

impl fmt::Display for BodyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyElem::Lit(l) => write!(f, "{l}"),
            BodyElem::Cmp(c) => write!(f, "{c}"),
        }
    }
}

/// `head : cond1 : cond2 ...` inside a choice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceElement {
    pub head: Atom,
    pub conditions: Vec<BodyElem>,
}

impl fmt::Display for ChoiceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for c in &self.conditions {
            write!(f, ":{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Head {
    Normal(Atom),
    Constraint,
    Choice { lower: Option<u32>, elements: Vec<ChoiceElement>, upper: Option<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyElem>,
    pub pos: SourcePos,
}

impl Rule {
    pub fn fact(atom: Atom) -> Self {
        Self { head: Head::Normal(atom), body: Vec::new(), pos: SourcePos::default() }
    }

    pub fn is_fact(&self) -> bool {
        matches!(self.head, Head::Normal(_)) && self.body.is_empty()
    }

    /// Every atom in the rule: head atom(s), element conditions, body.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        match &self.head {
            Head::Normal(a) => out.push(a),
            Head::Constraint => {}
            Head::Choice { elements, .. } => {
                for e in elements {
                    out.push(&e.head);
                    out.extend(e.conditions.iter().filter_map(BodyElem::atom));
                }
            }
        }
        out.extend(self.body.iter().filter_map(BodyElem::atom));
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Normal(a) => write!(f, "{a}")?,
            Head::Constraint => {}
            Head::Choice { lower, elements, upper } => {
                if let Some(l) = lower {
                    write!(f, "{l} ")?;
                }
                f.write_str("{")?;
                write_joined(f, elements, "; ")?;
                f.write_str("}")?;
                if let Some(u) = upper {
                    write!(f, " {u}")?;
                }
            }
        }
        if !self.body.is_empty() {
            if matches!(self.head, Head::Constraint) {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            write_joined(f, &self.body, ", ")?;
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Self { rules }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn extend(&mut self, other: &Program) {
        self.rules.extend(other.rules.iter().cloned());
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Program>) -> Program {
        let mut out = Program::default();
        for p in parts {
            out.extend(p);
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
