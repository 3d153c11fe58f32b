//! Static checks over the model: declared signatures and term types.

use std::collections::{BTreeSet, HashMap, HashSet};

use asp_core::{
    cautious_consequences, parse_asp, solve_program, AspError, Atom, BodyElem, GroundAtom, ModelCap, Program,
    Rule, Signature, SourcePos, Term, Value,
};

use crate::diag::{sort_diagnostics, Diagnostic, DiagnosticKind};
use crate::model::{effective_declarations, lookup_term, AnnotatedProgram, Block, TermDecl, TypeSpec, TYPE_VAR};

const MEMBER: &str = "__lana_member";

/// Membership test for an `@with` type.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipTest {
    body: Vec<BodyElem>,
    code: Program,
    /// Precomputed when the body binds the type variable itself.
    members: Option<BTreeSet<Value>>,
}

impl MembershipTest {
    fn new(body: Vec<BodyElem>, code: Program) -> Result<Self, String> {
        let body_text: Vec<String> = body.iter().map(|e| e.to_string()).collect();
        let rule = format!("{MEMBER}({TYPE_VAR}) :- {}.", body_text.join(", "));
        let members = match parse_asp(&rule) {
            Ok(extra) => {
                let models = solve(&code, &extra)?;
                let cautious = cautious_consequences(&models).map_err(|e| e.to_string())?;
                Some(
                    cautious
                        .into_iter()
                        .filter(|a| a.predicate == MEMBER && a.args.len() == 1)
                        .map(|a| a.args[0].clone())
                        .collect(),
                )
            }
            // the body does not bind #V; check values one at a time
            Err(_) => {
                solve(&code, &Program::default())?;
                None
            }
        };
        Ok(MembershipTest { body, code, members })
    }

    pub fn contains(&self, value: &Value) -> Result<bool, String> {
        if let Some(m) = &self.members {
            return Ok(m.contains(value));
        }
        let term = value.to_term();
        let body: Vec<BodyElem> = self.body.iter().map(|e| e.substitute(TYPE_VAR, &term)).collect();
        let rule = Rule { head: asp_core::Head::Normal(Atom::prop(MEMBER)), body, pos: SourcePos::default() };
        let models = solve(&self.code, &Program::new(vec![rule]))?;
        Ok(models.iter().all(|m| m.contains(&GroundAtom::prop(MEMBER))))
    }
}

fn solve(code: &Program, extra: &Program) -> Result<Vec<asp_core::AnswerSet>, String> {
    let program = Program::concat([code, extra]);
    let e = solve_program(&program, ModelCap::Unbounded).map_err(|e: AspError| e.to_string())?;
    if e.models.is_empty() {
        return Err("the embedded code has no answer set".to_string());
    }
    Ok(e.models)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ResolvedType {
    Extensional(BTreeSet<Value>),
    Predicate(MembershipTest),
    Unconstrained,
}

impl ResolvedType {
    pub fn contains(&self, value: &Value) -> Result<bool, String> {
        match self {
            ResolvedType::Extensional(set) => Ok(set.contains(value)),
            ResolvedType::Predicate(test) => test.contains(value),
            ResolvedType::Unconstrained => Ok(true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("term {0} is not declared")]
    UnknownTerm(String),
    #[error("@samerangeas cycle: {}", .0.join(" -> "))]
    CircularSameRangeAs(Vec<String>),
    #[error("type of {term} cannot be evaluated: {message}")]
    Evaluation { term: String, message: String },
}

/// Resolves the type of `name` among effective term declarations.
pub fn resolve_type(name: &str, terms: &[TermDecl]) -> Result<ResolvedType, TypeError> {
    let mut chain: Vec<String> = vec![name.to_string()];
    let mut current = name.to_string();
    loop {
        let decl = lookup_term(terms, &current).ok_or_else(|| TypeError::UnknownTerm(current.clone()))?;
        match &decl.type_spec {
            None => return Ok(ResolvedType::Unconstrained),
            Some(TypeSpec::FromList(list)) => {
                return Ok(ResolvedType::Extensional(list.iter().filter_map(Value::from_term).collect()))
            }
            Some(TypeSpec::WithBody { body, code }) => {
                return MembershipTest::new(body.clone(), code.clone())
                    .map(ResolvedType::Predicate)
                    .map_err(|message| TypeError::Evaluation { term: current, message })
            }
            Some(TypeSpec::SameRangeAs(next)) => {
                if let Some(start) = chain.iter().position(|n| n == next) {
                    let mut cycle = chain[start..].to_vec();
                    cycle.push(next.clone());
                    return Err(TypeError::CircularSameRangeAs(cycle));
                }
                chain.push(next.clone());
                current = next.clone();
            }
        }
    }
}

/// Resolves a term type as seen from the named block.
pub fn resolve_type_in(ap: &AnnotatedProgram, block: &str, name: &str) -> Result<ResolvedType, TypeError> {
    let (_, terms) = ap.effective_declarations(block).ok_or_else(|| TypeError::UnknownTerm(name.to_string()))?;
    resolve_type(name, &terms)
}

/// Blocks paired with their root-to-block path.
fn block_paths(root: &Block) -> Vec<Vec<&Block>> {
    fn go<'a>(b: &'a Block, path: &mut Vec<&'a Block>, out: &mut Vec<Vec<&'a Block>>) {
        path.push(b);
        out.push(path.clone());
        for c in &b.children {
            go(c, path, out);
        }
        path.pop();
    }
    let mut out = Vec::new();
    go(root, &mut Vec::new(), &mut out);
    out
}

/// Predicates used by a block's own rules, with the first rule using each.
fn used_signatures(b: &Block) -> Vec<(Signature, SourcePos)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in &b.rules.rules {
        for a in r.atoms() {
            let sig = a.signature();
            if seen.insert(sig.clone()) {
                out.push((sig, r.pos));
            }
        }
    }
    out
}

/// Predicates in the block's own rules that are in neither signature.
/// Empty when the block declares no signatures.
pub fn hidden_atoms(b: &Block) -> Vec<Signature> {
    if !b.declares_signatures() {
        return Vec::new();
    }
    let declared: HashSet<&Signature> = b.input_sig.iter().chain(&b.output_sig).collect();
    let hidden: BTreeSet<Signature> =
        used_signatures(b).into_iter().map(|(s, _)| s).filter(|s| !declared.contains(s)).collect();
    hidden.into_iter().collect()
}

pub fn check_signatures(ap: &AnnotatedProgram) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for path in block_paths(&ap.root) {
        let b = *path.last().expect("non-empty path");
        let file = ap.file_name(b.span.start.file);
        let (atoms, _) = effective_declarations(&path);
        let declared: HashSet<Signature> = atoms.iter().map(|d| d.signature()).collect();
        let mut mismatched = HashSet::new();
        for (sig, pos) in used_signatures(b) {
            if declared.contains(&sig) {
                continue;
            }
            let mut arities: Vec<usize> =
                atoms.iter().filter(|d| d.predicate == sig.predicate).map(|d| d.term_names.len()).collect();
            arities.sort_unstable();
            arities.dedup();
            if !arities.is_empty() {
                let kind = DiagnosticKind::ArityMismatch {
                    predicate: sig.predicate.clone(),
                    found: sig.arity,
                    declared: arities,
                };
                diags.push(Diagnostic::new(kind, file, pos));
                mismatched.insert(sig);
            } else if !b.atom_decls.is_empty() {
                diags.push(Diagnostic::new(DiagnosticKind::UndeclaredPredicate { signature: sig }, file, pos));
            }
        }
        for sig in b.input_sig.iter().chain(&b.output_sig) {
            if !declared.contains(sig) {
                let kind = DiagnosticKind::SignatureNotDeclared { signature: sig.clone() };
                diags.push(Diagnostic::new(kind, file, b.span.start.pos));
            }
        }
        let hidden: HashSet<Signature> = hidden_atoms(b).into_iter().collect();
        for (sig, pos) in used_signatures(b) {
            if hidden.contains(&sig) && !mismatched.contains(&sig) {
                let kind = DiagnosticKind::HiddenAtom { block: b.name.clone(), signature: sig };
                diags.push(Diagnostic::new(kind, file, pos));
            }
        }
    }
    sort_diagnostics(&mut diags);
    diags
}

/// Values a fact argument stands for; intervals expand.
fn argument_values(t: &Term) -> Option<Vec<Value>> {
    match t {
        Term::Interval(lo, hi) => Some((*lo..=*hi).map(Value::Int).collect()),
        t if t.is_ground() => Value::from_term(t).map(|v| vec![v]),
        _ => None,
    }
}

pub fn check_types(ap: &AnnotatedProgram) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut reported_cycles: HashSet<BTreeSet<String>> = HashSet::new();

    // declarations first: broken types are reported where they are declared
    for path in block_paths(&ap.root) {
        let b = *path.last().expect("non-empty path");
        let file = ap.file_name(b.span.start.file);
        let (_, terms) = effective_declarations(&path);
        for decl in &b.term_decls {
            let Some(spec) = &decl.type_spec else { continue };
            if matches!(spec, TypeSpec::FromList(_)) {
                continue;
            }
            let name = &decl.names[0];
            let kind = match resolve_type(name, &terms) {
                Ok(_) => continue,
                Err(TypeError::CircularSameRangeAs(cycle)) => {
                    if !reported_cycles.insert(cycle.iter().cloned().collect()) {
                        continue;
                    }
                    DiagnosticKind::CircularSameRangeAs { cycle }
                }
                Err(TypeError::UnknownTerm(name)) => DiagnosticKind::UnknownTerm { name },
                Err(TypeError::Evaluation { term, message }) => DiagnosticKind::TypeEvaluationError { term, message },
            };
            diags.push(Diagnostic::new(kind, file, decl.location.pos));
        }
    }

    for path in block_paths(&ap.root) {
        let b = *path.last().expect("non-empty path");
        let file = ap.file_name(b.span.start.file);
        let (atoms, terms) = effective_declarations(&path);
        let mut types: HashMap<String, Option<ResolvedType>> = HashMap::new();
        for rule in b.rules.rules.iter().filter(|r| r.is_fact()) {
            let asp_core::Head::Normal(atom) = &rule.head else { continue };
            let Some(decl) = atoms.iter().find(|d| d.signature() == atom.signature()) else { continue };
            for (i, (arg, term_name)) in atom.args.iter().zip(&decl.term_names).enumerate() {
                let ty = types
                    .entry(term_name.clone())
                    .or_insert_with(|| resolve_type(term_name, &terms).ok())
                    .as_ref();
                let Some(ty) = ty else { continue };
                if matches!(ty, ResolvedType::Unconstrained) {
                    continue;
                }
                for value in argument_values(arg).unwrap_or_default() {
                    if let Ok(false) = ty.contains(&value) {
                        let kind = DiagnosticKind::TypeViolation {
                            predicate: atom.predicate.clone(),
                            position: i + 1,
                            value: value.to_string(),
                        };
                        diags.push(Diagnostic::new(kind, file, rule.pos));
                    }
                }
            }
        }
    }
    sort_diagnostics(&mut diags);
    diags
}

/// Both checks, merged in diagnostic order.
pub fn lint(ap: &AnnotatedProgram) -> Vec<Diagnostic> {
    let mut diags = check_signatures(ap);
    diags.extend(check_types(ap));
    sort_diagnostics(&mut diags);
    diags
}
