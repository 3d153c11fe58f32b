//! Bottom-up grounding.
//!
//! Grounding runs in three passes over the non-ground rules:
//!
//! 1. the *possible* atoms: the least fixpoint of all rules with negation
//!    ignored and every choice element treated as derivable;
//! 2. the *certain* atoms: the least fixpoint of the normal rules whose
//!    negative literals all range over impossible atoms;
//! 3. instantiation of every rule against the possible atoms.
//!
//! Certain atoms become facts and are dropped from positive bodies; rules
//! with a negative literal over a certain atom are dropped; negative
//! literals over impossible atoms are dropped. Choice-element conditions
//! must be decided by the certain/possible split, since they are removed
//! from the ground choice.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::GroundError;
use crate::syntax::*;

/// A ground term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Sym(String),
    Func(String, Vec<Value>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(s),
            Value::Func(name, args) => {
                write!(f, "{name}(")?;
                write_joined(f, args, ", ")?;
                f.write_str(")")
            }
        }
    }
}

impl Value {
    pub fn to_term(&self) -> Term {
        match self {
            Value::Int(i) => Term::Int(*i),
            Value::Sym(s) => Term::Sym(s.clone()),
            Value::Func(n, args) => Term::Func(n.clone(), args.iter().map(Value::to_term).collect()),
        }
    }

    /// Converts a ground, interval-free term without arithmetic evaluation
    /// failures into a value.
    pub fn from_term(term: &Term) -> Option<Value> {
        eval(term, &Subst::new(), SourcePos::default()).ok()
    }
}

/// A variable-free atom.
///
/// Ordering is the canonical order used for models and reports: predicate
/// name, then arity, then the textual rendering of each argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<Value>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Value>) -> Self {
        Self { predicate: predicate.into(), args }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        Self::new(predicate, Vec::new())
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.predicate.clone(), self.args.len())
    }

    pub fn to_atom(&self) -> Atom {
        Atom::new(self.predicate.clone(), self.args.iter().map(Value::to_term).collect())
    }

    /// Grounds an atom that has no variables. Intervals are rejected.
    pub fn from_atom(atom: &Atom) -> Option<GroundAtom> {
        let args = atom.args.iter().map(Value::from_term).collect::<Option<Vec<_>>>()?;
        Some(GroundAtom::new(atom.predicate.clone(), args))
    }

    /// Parses atom text such as `ship(1, 1, 1, 2)`.
    pub fn parse(text: &str) -> Result<GroundAtom, crate::ParseError> {
        let atom = crate::parser::parse_atom(text.trim())?;
        GroundAtom::from_atom(&atom).ok_or_else(|| crate::ParseError::Syntax {
            pos: SourcePos::new(1, 1),
            message: format!("`{text}` is not a ground atom"),
        })
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_joined(f, &self.args, ", ")?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Ord for GroundAtom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.predicate
            .cmp(&other.predicate)
            .then(self.args.len().cmp(&other.args.len()))
            .then_with(|| {
                for (a, b) in self.args.iter().zip(&other.args) {
                    let ord = match (a, b) {
                        (Value::Sym(x), Value::Sym(y)) => x.cmp(y),
                        _ => a.to_string().cmp(&b.to_string()),
                    };
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for GroundAtom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Index into [`GroundProgram::atoms`]; ids follow the canonical atom order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundHead {
    Atom(AtomId),
    Constraint,
    /// Bounds are normalized so that `lower <= upper <= elements.len()`.
    Choice { lower: u32, upper: u32, elements: Vec<AtomId> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: GroundHead,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

impl GroundRule {
    pub fn is_fact(&self) -> bool {
        matches!(self.head, GroundHead::Atom(_)) && self.pos.is_empty() && self.neg.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct GroundProgram {
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, AtomId>,
    rules: Vec<GroundRule>,
}

impl GroundProgram {
    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id.index()]
    }

    pub fn id_of(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    pub fn rules(&self) -> &[GroundRule] {
        &self.rules
    }

    /// Atoms occurring in the head of some rule (choice elements included).
    pub fn head_atoms(&self) -> Vec<AtomId> {
        let mut seen = vec![false; self.atoms.len()];
        for r in &self.rules {
            match &r.head {
                GroundHead::Atom(a) => seen[a.index()] = true,
                GroundHead::Choice { elements, .. } => elements.iter().for_each(|a| seen[a.index()] = true),
                GroundHead::Constraint => {}
            }
        }
        (0..self.atoms.len()).filter(|&i| seen[i]).map(|i| AtomId(i as u32)).collect()
    }

    fn write_atoms(&self, f: &mut fmt::Formatter<'_>, ids: &[AtomId], prefix: &str, sep: &mut bool) -> fmt::Result {
        for id in ids {
            if *sep {
                f.write_str(", ")?;
            }
            *sep = true;
            write!(f, "{prefix}{}", self.atom(*id))?;
        }
        Ok(())
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            match &r.head {
                GroundHead::Atom(a) => write!(f, "{}", self.atom(*a))?,
                GroundHead::Constraint => {}
                GroundHead::Choice { lower, upper, elements } => {
                    write!(f, "{lower} {{")?;
                    for (i, e) in elements.iter().enumerate() {
                        if i > 0 {
                            f.write_str("; ")?;
                        }
                        write!(f, "{}", self.atom(*e))?;
                    }
                    write!(f, "}} {upper}")?;
                }
            }
            if !r.pos.is_empty() || !r.neg.is_empty() {
                f.write_str(if matches!(r.head, GroundHead::Constraint) { ":- " } else { " :- " })?;
                let mut sep = false;
                self.write_atoms(f, &r.pos, "", &mut sep)?;
                self.write_atoms(f, &r.neg, "not ", &mut sep)?;
            }
            writeln!(f, ".")?;
        }
        Ok(())
    }
}

type Subst = HashMap<String, Value>;

fn eval(term: &Term, subst: &Subst, pos: SourcePos) -> Result<Value, GroundError> {
    match term {
        Term::Var(v) => subst.get(v).cloned().ok_or(GroundError::ArithmeticType {
            pos,
            expr: format!("unbound variable {v}"),
        }),
        Term::Int(i) => Ok(Value::Int(*i)),
        Term::Sym(s) => Ok(Value::Sym(s.clone())),
        Term::Func(n, args) => Ok(Value::Func(
            n.clone(),
            args.iter().map(|a| eval(a, subst, pos)).collect::<Result<_, _>>()?,
        )),
        Term::Interval(..) => Err(GroundError::IntervalInBody { pos, term: term.to_string() }),
        Term::Arith(op, l, r) => {
            let (Value::Int(a), Value::Int(b)) = (eval(l, subst, pos)?, eval(r, subst, pos)?) else {
                return Err(GroundError::ArithmeticType { pos, expr: term.to_string() });
            };
            let v = match op {
                ArithOp::Add => a.checked_add(b),
                ArithOp::Sub => a.checked_sub(b),
            };
            v.map(Value::Int).ok_or(GroundError::Overflow { pos })
        }
    }
}

/// Like [`eval`] but expands intervals into every member.
fn expand(term: &Term, subst: &Subst, pos: SourcePos) -> Result<Vec<Value>, GroundError> {
    match term {
        Term::Interval(lo, hi) => Ok((*lo..=*hi).map(Value::Int).collect()),
        Term::Func(n, args) => {
            let parts = args.iter().map(|a| expand(a, subst, pos)).collect::<Result<Vec<_>, _>>()?;
            Ok(product(&parts).into_iter().map(|args| Value::Func(n.clone(), args)).collect())
        }
        Term::Arith(op, l, r) => {
            let mut out = Vec::new();
            for a in expand(l, subst, pos)? {
                for b in expand(r, subst, pos)? {
                    let t = Term::Arith(*op, Box::new(a.to_term()), Box::new(b.to_term()));
                    out.push(eval(&t, subst, pos)?);
                }
            }
            Ok(out)
        }
        other => Ok(vec![eval(other, subst, pos)?]),
    }
}

fn product(parts: &[Vec<Value>]) -> Vec<Vec<Value>> {
    let mut acc: Vec<Vec<Value>> = vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for prefix in &acc {
            for v in part {
                let mut row = prefix.clone();
                row.push(v.clone());
                next.push(row);
            }
        }
        acc = next;
    }
    acc
}

fn instantiate_all(atom: &Atom, subst: &Subst, pos: SourcePos) -> Result<Vec<GroundAtom>, GroundError> {
    let parts = atom.args.iter().map(|a| expand(a, subst, pos)).collect::<Result<Vec<_>, _>>()?;
    Ok(product(&parts).into_iter().map(|args| GroundAtom::new(atom.predicate.clone(), args)).collect())
}

fn instantiate(atom: &Atom, subst: &Subst, pos: SourcePos) -> Result<GroundAtom, GroundError> {
    let args = atom.args.iter().map(|a| eval(a, subst, pos)).collect::<Result<_, _>>()?;
    Ok(GroundAtom::new(atom.predicate.clone(), args))
}

fn compare(op: CmpOp, l: &Value, r: &Value, pos: SourcePos, expr: &Comparison) -> Result<bool, GroundError> {
    if op.is_ordering() {
        let (Value::Int(a), Value::Int(b)) = (l, r) else {
            return Err(GroundError::ArithmeticType { pos, expr: expr.to_string() });
        };
        return Ok(match op {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq | CmpOp::Ne => unreachable!(),
        });
    }
    Ok((l == r) == (op == CmpOp::Eq))
}

fn match_term(pattern: &Term, value: &Value, subst: &mut Subst, pos: SourcePos) -> Result<bool, GroundError> {
    match pattern {
        Term::Var(v) => match subst.get(v) {
            Some(bound) => Ok(bound == value),
            None => {
                subst.insert(v.clone(), value.clone());
                Ok(true)
            }
        },
        Term::Int(i) => Ok(matches!(value, Value::Int(j) if i == j)),
        Term::Sym(s) => Ok(matches!(value, Value::Sym(t) if s == t)),
        Term::Func(n, args) => match value {
            Value::Func(m, vals) if n == m && args.len() == vals.len() => {
                for (a, v) in args.iter().zip(vals) {
                    if !match_term(a, v, subst, pos)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        },
        Term::Arith(..) => Ok(&eval(pattern, subst, pos)? == value),
        Term::Interval(..) => Err(GroundError::IntervalInBody { pos, term: pattern.to_string() }),
    }
}

#[derive(Default)]
struct Domain {
    atoms: HashSet<GroundAtom>,
    by_sig: HashMap<(String, usize), Vec<GroundAtom>>,
}

impl Domain {
    fn insert(&mut self, atom: GroundAtom) -> bool {
        if self.atoms.contains(&atom) {
            return false;
        }
        self.by_sig.entry((atom.predicate.clone(), atom.args.len())).or_default().push(atom.clone());
        self.atoms.insert(atom);
        true
    }

    fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    fn candidates(&self, atom: &Atom) -> &[GroundAtom] {
        self.by_sig
            .get(&(atom.predicate.clone(), atom.args.len()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

fn is_bound(term: &Term, subst: &Subst) -> bool {
    let mut vs = Vec::new();
    term.collect_vars(&mut vs);
    vs.iter().all(|v| subst.contains_key(*v))
}

fn arith_vars_bound(term: &Term, subst: &Subst) -> bool {
    match term {
        Term::Arith(..) => is_bound(term, subst),
        Term::Func(_, args) => args.iter().all(|a| arith_vars_bound(a, subst)),
        _ => true,
    }
}

/// Enumerates substitutions satisfying the positive literals and
/// comparisons of `elems`; negative literals are left to the caller.
fn join(
    elems: &[BodyElem],
    done: &mut [bool],
    subst: &Subst,
    domain: &Domain,
    pos: SourcePos,
    emit: &mut dyn FnMut(&Subst) -> Result<(), GroundError>,
) -> Result<(), GroundError> {
    // Cheap filters and assignments first.
    for (i, e) in elems.iter().enumerate() {
        if done[i] {
            continue;
        }
        let BodyElem::Cmp(c) = e else { continue };
        let (lb, rb) = (is_bound(&c.left, subst), is_bound(&c.right, subst));
        if lb && rb && !matches!(c.right, Term::Interval(..)) && !matches!(c.left, Term::Interval(..)) {
            done[i] = true;
            let ok = compare(c.op, &eval(&c.left, subst, pos)?, &eval(&c.right, subst, pos)?, pos, c)?;
            if ok {
                join(elems, done, subst, domain, pos, emit)?;
            }
            done[i] = false;
            return Ok(());
        }
        if c.op == CmpOp::Eq {
            let assignment = match (&c.left, &c.right) {
                (Term::Var(v), other) if !lb && rb => Some((v, other)),
                (other, Term::Var(v)) if lb && !rb => Some((v, other)),
                _ => None,
            };
            if let Some((var, source)) = assignment {
                done[i] = true;
                for value in expand(source, subst, pos)? {
                    let mut next = subst.clone();
                    next.insert(var.clone(), value);
                    join(elems, done, &next, domain, pos, emit)?;
                }
                done[i] = false;
                return Ok(());
            }
        }
    }
    for (i, e) in elems.iter().enumerate() {
        if done[i] {
            continue;
        }
        let BodyElem::Lit(l) = e else { continue };
        if !l.is_positive() || !l.atom.args.iter().all(|a| arith_vars_bound(a, subst)) {
            continue;
        }
        if l.atom.contains_interval() {
            return Err(GroundError::IntervalInBody { pos, term: l.atom.to_string() });
        }
        done[i] = true;
        for candidate in domain.candidates(&l.atom) {
            let mut next = subst.clone();
            let mut ok = true;
            for (pattern, value) in l.atom.args.iter().zip(&candidate.args) {
                if !match_term(pattern, value, &mut next, pos)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                join(elems, done, &next, domain, pos, emit)?;
            }
        }
        done[i] = false;
        return Ok(());
    }
    let only_naf_left = elems
        .iter()
        .zip(done.iter())
        .all(|(e, d)| *d || matches!(e, BodyElem::Lit(l) if !l.is_positive()));
    if only_naf_left {
        emit(subst)?;
    }
    Ok(())
}

fn for_each_match(
    elems: &[BodyElem],
    subst: &Subst,
    domain: &Domain,
    pos: SourcePos,
    emit: &mut dyn FnMut(&Subst) -> Result<(), GroundError>,
) -> Result<(), GroundError> {
    let mut done = vec![false; elems.len()];
    join(elems, &mut done, subst, domain, pos, emit)
}

fn naf_atoms(elems: &[BodyElem]) -> impl Iterator<Item = &Atom> {
    elems.iter().filter_map(|e| match e {
        BodyElem::Lit(l) if !l.is_positive() => Some(&l.atom),
        _ => None,
    })
}

fn pos_atoms(elems: &[BodyElem]) -> impl Iterator<Item = &Atom> {
    elems.iter().filter_map(|e| match e {
        BodyElem::Lit(l) if l.is_positive() => Some(&l.atom),
        _ => None,
    })
}

/// Heads derivable from one rule instance, ignoring negation.
fn derivable_heads(rule: &Rule, subst: &Subst, domain: &Domain, out: &mut Vec<GroundAtom>) -> Result<(), GroundError> {
    match &rule.head {
        Head::Normal(a) => out.extend(instantiate_all(a, subst, rule.pos)?),
        Head::Constraint => {}
        Head::Choice { elements, .. } => {
            for el in elements {
                let mut local = Vec::new();
                for_each_match(&el.conditions, subst, domain, rule.pos, &mut |s| {
                    local.extend(instantiate_all(&el.head, s, rule.pos)?);
                    Ok(())
                })?;
                out.extend(local);
            }
        }
    }
    Ok(())
}

fn possible_atoms(program: &Program) -> Result<Domain, GroundError> {
    let mut domain = Domain::default();
    loop {
        let mut fresh = Vec::new();
        for rule in &program.rules {
            for_each_match(&rule.body, &Subst::new(), &domain, rule.pos, &mut |s| {
                derivable_heads(rule, s, &domain, &mut fresh)
            })?;
        }
        let mut changed = false;
        for a in fresh {
            changed |= domain.insert(a);
        }
        if !changed {
            return Ok(domain);
        }
    }
}

fn certain_atoms(program: &Program, possible: &Domain) -> Result<Domain, GroundError> {
    let mut certain = Domain::default();
    loop {
        let mut fresh = Vec::new();
        for rule in &program.rules {
            let Head::Normal(head) = &rule.head else { continue };
            for_each_match(&rule.body, &Subst::new(), &certain, rule.pos, &mut |s| {
                for a in naf_atoms(&rule.body) {
                    if possible.contains(&instantiate(a, s, rule.pos)?) {
                        return Ok(());
                    }
                }
                fresh.extend(instantiate_all(head, s, rule.pos)?);
                Ok(())
            })?;
        }
        let mut changed = false;
        for a in fresh {
            changed |= certain.insert(a);
        }
        if !changed {
            return Ok(certain);
        }
    }
}

struct Builder {
    rules: Vec<(HeadSpec, Vec<GroundAtom>, Vec<GroundAtom>)>,
}

enum HeadSpec {
    Atom(GroundAtom),
    Constraint,
    Choice { lower: Option<u32>, upper: Option<u32>, elements: Vec<GroundAtom> },
}

/// Checks a choice-element condition instance; conditions must be decided
/// by the certain/possible split.
fn condition_holds(
    el: &ChoiceElement,
    subst: &Subst,
    certain: &Domain,
    possible: &Domain,
    pos: SourcePos,
) -> Result<bool, GroundError> {
    for a in pos_atoms(&el.conditions) {
        let g = instantiate(a, subst, pos)?;
        if !certain.contains(&g) {
            return Err(GroundError::NonDomainCondition { pos, atom: g.to_string() });
        }
    }
    for a in naf_atoms(&el.conditions) {
        let g = instantiate(a, subst, pos)?;
        if certain.contains(&g) {
            return Ok(false);
        }
        if possible.contains(&g) {
            return Err(GroundError::NonDomainCondition { pos, atom: g.to_string() });
        }
    }
    Ok(true)
}

/// Replaces variables by constants, producing a ground program with the same
/// stable models.
pub fn ground(program: &Program) -> Result<GroundProgram, GroundError> {
    let possible = possible_atoms(program)?;
    let certain = certain_atoms(program, &possible)?;
    let mut builder = Builder { rules: Vec::new() };

    let mut certain_sorted: Vec<&GroundAtom> = certain.atoms.iter().collect();
    certain_sorted.sort();
    for a in certain_sorted {
        builder.rules.push((HeadSpec::Atom(a.clone()), Vec::new(), Vec::new()));
    }

    for rule in &program.rules {
        let pos = rule.pos;
        for_each_match(&rule.body, &Subst::new(), &possible, pos, &mut |s| {
            let mut body_pos = Vec::new();
            for a in pos_atoms(&rule.body) {
                let g = instantiate(a, s, pos)?;
                if !certain.contains(&g) {
                    body_pos.push(g);
                }
            }
            let mut body_neg = Vec::new();
            for a in naf_atoms(&rule.body) {
                let g = instantiate(a, s, pos)?;
                if certain.contains(&g) {
                    return Ok(());
                }
                if possible.contains(&g) {
                    body_neg.push(g);
                }
            }
            match &rule.head {
                Head::Normal(h) => {
                    for g in instantiate_all(h, s, pos)? {
                        if !certain.contains(&g) {
                            builder.rules.push((HeadSpec::Atom(g), body_pos.clone(), body_neg.clone()));
                        }
                    }
                }
                Head::Constraint => builder.rules.push((HeadSpec::Constraint, body_pos, body_neg)),
                Head::Choice { lower, elements, upper } => {
                    let mut heads: Vec<GroundAtom> = Vec::new();
                    for el in elements {
                        for_each_match(&el.conditions, s, &possible, pos, &mut |ls| {
                            if condition_holds(el, ls, &certain, &possible, pos)? {
                                heads.extend(instantiate_all(&el.head, ls, pos)?);
                            }
                            Ok(())
                        })?;
                    }
                    heads.sort();
                    heads.dedup();
                    builder.rules.push((
                        HeadSpec::Choice { lower: *lower, upper: *upper, elements: heads },
                        body_pos,
                        body_neg,
                    ));
                }
            }
            Ok(())
        })?;
    }
    Ok(builder.finish())
}

impl Builder {
    fn finish(self) -> GroundProgram {
        let mut atoms: Vec<GroundAtom> = Vec::new();
        for (head, pos, neg) in &self.rules {
            match head {
                HeadSpec::Atom(a) => atoms.push(a.clone()),
                HeadSpec::Constraint => {}
                HeadSpec::Choice { elements, .. } => atoms.extend(elements.iter().cloned()),
            }
            atoms.extend(pos.iter().cloned());
            atoms.extend(neg.iter().cloned());
        }
        atoms.sort();
        atoms.dedup();
        let index: HashMap<GroundAtom, AtomId> =
            atoms.iter().enumerate().map(|(i, a)| (a.clone(), AtomId(i as u32))).collect();
        let id = |a: &GroundAtom| index[a];

        let mut seen = HashSet::new();
        let mut rules = Vec::new();
        for (head, pos, neg) in self.rules {
            let mut pos: Vec<AtomId> = pos.iter().map(id).collect();
            let mut neg: Vec<AtomId> = neg.iter().map(id).collect();
            pos.sort();
            pos.dedup();
            neg.sort();
            neg.dedup();
            let head = match head {
                HeadSpec::Atom(a) => GroundHead::Atom(id(&a)),
                HeadSpec::Constraint => GroundHead::Constraint,
                HeadSpec::Choice { lower, upper, elements } => {
                    let n = elements.len() as u32;
                    let lower = lower.unwrap_or(0);
                    let upper = upper.unwrap_or(n).min(n);
                    if lower > upper {
                        GroundHead::Constraint
                    } else {
                        GroundHead::Choice { lower, upper, elements: elements.iter().map(id).collect() }
                    }
                }
            };
            let rule = GroundRule { head, pos, neg };
            if seen.insert(rule.clone()) {
                rules.push(rule);
            }
        }
        GroundProgram { atoms, index, rules }
    }
}
