//! Stable-model enumeration for ground programs.
//!
//! The search first narrows the atoms with a well-founded style alternating
//! fixpoint (atoms true in every stable model, atoms possibly true in some),
//! then enumerates assignments to the remaining *free* atoms depth first.
//! Atoms are decided from the highest canonical id down with `false` tried
//! first, so models come out in ascending bitvector order with the
//! canonically smallest atom as least significant bit.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::SolveError;
use crate::ground::{AtomId, GroundAtom, GroundHead, GroundProgram, GroundRule};

/// Maximum number of undecided atoms the internal search accepts.
pub const SEARCH_LIMIT: usize = 24;

/// How many models to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModelCap {
    #[default]
    Unbounded,
    /// At most this many (values below 1 are treated as 1).
    AtMost(usize),
}

impl ModelCap {
    pub fn limit(self) -> Option<usize> {
        match self {
            ModelCap::Unbounded => None,
            ModelCap::AtMost(n) => Some(n.max(1)),
        }
    }
}

/// A set of ground atoms.
///
/// `Ord` is the canonical model order: of two sets, the one containing the
/// canonically greatest atom of their symmetric difference is greater.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AnswerSet(BTreeSet<GroundAtom>);

impl AnswerSet {
    pub fn new(atoms: impl IntoIterator<Item = GroundAtom>) -> Self {
        Self(atoms.into_iter().collect())
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.0.contains(atom)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &GroundAtom> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atoms(&self) -> &BTreeSet<GroundAtom> {
        &self.0
    }

    pub fn into_atoms(self) -> BTreeSet<GroundAtom> {
        self.0
    }
}

impl FromIterator<GroundAtom> for AnswerSet {
    fn from_iter<I: IntoIterator<Item = GroundAtom>>(iter: I) -> Self {
        Self::new(iter)
    }
}

impl Ord for AnswerSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().rev().peekable();
        let mut b = other.0.iter().rev().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => {
                        a.next();
                        b.next();
                    }
                    // the greater atom is missing from the other set
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Less => return Ordering::Less,
                },
            }
        }
    }
}

impl PartialOrd for AnswerSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AnswerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// Result of a (possibly capped) enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub models: Vec<AnswerSet>,
    /// `false` when the cap cut the enumeration short.
    pub exhausted: bool,
}

/// Three-valued starting point for the search.
struct Bounds {
    /// In every stable model.
    certain: Vec<bool>,
    /// In some stable model, possibly.
    possible: Vec<bool>,
}

/// Least model of the definite program made of `rules`, where each rule is
/// given as (heads it supports, positive body).
fn least_model(n: usize, rules: &[(Vec<AtomId>, &[AtomId])]) -> Vec<bool> {
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut missing: Vec<usize> = Vec::with_capacity(rules.len());
    let mut queue = Vec::new();
    let mut truth = vec![false; n];
    for (i, (_, body)) in rules.iter().enumerate() {
        missing.push(body.len());
        for a in body.iter() {
            watch[a.index()].push(i);
        }
        if body.is_empty() {
            queue.push(i);
        }
    }
    while let Some(r) = queue.pop() {
        for h in &rules[r].0 {
            if !truth[h.index()] {
                truth[h.index()] = true;
                for &w in &watch[h.index()] {
                    missing[w] -= 1;
                    if missing[w] == 0 {
                        queue.push(w);
                    }
                }
            }
        }
    }
    truth
}

fn bounds(gp: &GroundProgram) -> Bounds {
    let n = gp.atoms().len();
    let mut certain = vec![false; n];
    let mut possible = vec![true; n];
    loop {
        let definite: Vec<(Vec<AtomId>, &[AtomId])> = gp
            .rules()
            .iter()
            .filter_map(|r| match &r.head {
                GroundHead::Atom(h) if r.neg.iter().all(|a| !possible[a.index()]) => {
                    Some((vec![*h], r.pos.as_slice()))
                }
                _ => None,
            })
            .collect();
        let next_certain = least_model(n, &definite);
        let relaxed: Vec<(Vec<AtomId>, &[AtomId])> = gp
            .rules()
            .iter()
            .filter(|r| r.neg.iter().all(|a| !next_certain[a.index()]))
            .filter_map(|r| match &r.head {
                GroundHead::Atom(h) => Some((vec![*h], r.pos.as_slice())),
                GroundHead::Choice { elements, .. } => Some((elements.clone(), r.pos.as_slice())),
                GroundHead::Constraint => None,
            })
            .collect();
        let next_possible = least_model(n, &relaxed);
        if next_certain == certain && next_possible == possible {
            return Bounds { certain, possible };
        }
        certain = next_certain;
        possible = next_possible;
    }
}

fn body_true(r: &GroundRule, truth: &[bool]) -> bool {
    r.pos.iter().all(|a| truth[a.index()]) && r.neg.iter().all(|a| !truth[a.index()])
}

fn rule_satisfied(r: &GroundRule, truth: &[bool]) -> bool {
    if !body_true(r, truth) {
        return true;
    }
    match &r.head {
        GroundHead::Atom(h) => truth[h.index()],
        GroundHead::Constraint => false,
        GroundHead::Choice { lower, upper, elements } => {
            let k = elements.iter().filter(|a| truth[a.index()]).count() as u32;
            *lower <= k && k <= *upper
        }
    }
}

struct Search<'a> {
    gp: &'a GroundProgram,
    free: Vec<AtomId>,
    /// Rules to check once `free[i]` is decided (their lowest free atom).
    check_at: Vec<Vec<usize>>,
    truth: Vec<bool>,
    limit: Option<usize>,
    found: Vec<AnswerSet>,
}

impl Search<'_> {
    fn is_stable(&self) -> bool {
        let n = self.truth.len();
        let reduct: Vec<(Vec<AtomId>, &[AtomId])> = self
            .gp
            .rules()
            .iter()
            .filter(|r| r.neg.iter().all(|a| !self.truth[a.index()]))
            .filter_map(|r| match &r.head {
                GroundHead::Atom(h) => Some((vec![*h], r.pos.as_slice())),
                GroundHead::Choice { elements, .. } => Some((
                    elements.iter().copied().filter(|a| self.truth[a.index()]).collect(),
                    r.pos.as_slice(),
                )),
                GroundHead::Constraint => None,
            })
            .collect();
        least_model(n, &reduct) == self.truth
    }

    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    /// Decides `free[k-1]`, then recurses; `k == 0` is a complete assignment.
    fn descend(&mut self, k: usize) {
        if self.done() {
            return;
        }
        if k == 0 {
            if self.is_stable() {
                let model = self
                    .truth
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| **t)
                    .map(|(i, _)| self.gp.atom(AtomId(i as u32)).clone())
                    .collect();
                self.found.push(model);
            }
            return;
        }
        let atom = self.free[k - 1];
        for value in [false, true] {
            self.truth[atom.index()] = value;
            let consistent = self.check_at[k - 1]
                .iter()
                .all(|&r| rule_satisfied(&self.gp.rules()[r], &self.truth));
            if consistent {
                self.descend(k - 1);
            }
        }
        self.truth[atom.index()] = false;
    }
}

/// Enumerates stable models in canonical order, stopping after `cap`.
pub fn enumerate(gp: &GroundProgram, cap: ModelCap) -> Result<Enumeration, SolveError> {
    let Bounds { certain, possible } = bounds(gp);
    let free: Vec<AtomId> = (0..gp.atoms().len())
        .filter(|&i| possible[i] && !certain[i])
        .map(|i| AtomId(i as u32))
        .collect();
    if free.len() > SEARCH_LIMIT {
        return Err(SolveError::SearchLimitExceeded { free: free.len(), limit: SEARCH_LIMIT });
    }
    let mut position = vec![None; gp.atoms().len()];
    for (i, a) in free.iter().enumerate() {
        position[a.index()] = Some(i);
    }
    let truth = certain;
    let mut check_at = vec![Vec::new(); free.len()];
    for (ri, r) in gp.rules().iter().enumerate() {
        let mut atoms: Vec<AtomId> = r.pos.iter().chain(&r.neg).copied().collect();
        match &r.head {
            GroundHead::Atom(h) => atoms.push(*h),
            GroundHead::Choice { elements, .. } => atoms.extend(elements),
            GroundHead::Constraint => {}
        }
        match atoms.iter().filter_map(|a| position[a.index()]).min() {
            Some(lowest) => check_at[lowest].push(ri),
            None => {
                if !rule_satisfied(r, &truth) {
                    return Ok(Enumeration { models: Vec::new(), exhausted: true });
                }
            }
        }
    }
    // one extra model tells whether the cap truncated the enumeration
    let limit = cap.limit().map(|l| l + 1);
    let mut search = Search { gp, free, check_at, truth, limit, found: Vec::new() };
    let k = search.free.len();
    search.descend(k);
    let mut models = search.found;
    let exhausted = match cap.limit() {
        Some(l) if models.len() > l => {
            models.truncate(l);
            false
        }
        _ => true,
    };
    Ok(Enumeration { models, exhausted })
}

/// All stable models (or the first `cap`) in canonical order.
pub fn stable_models(gp: &GroundProgram, cap: ModelCap) -> Result<Vec<AnswerSet>, SolveError> {
    enumerate(gp, cap).map(|e| e.models)
}

/// Gelfond–Lifschitz check of a single candidate, independent of the
/// enumeration machinery.
pub fn is_stable_model(gp: &GroundProgram, candidate: &AnswerSet) -> bool {
    let mut set: HashSet<AtomId> = HashSet::new();
    for atom in candidate.iter() {
        match gp.id_of(atom) {
            Some(id) => {
                set.insert(id);
            }
            None => return false,
        }
    }
    let holds = |r: &GroundRule| r.pos.iter().all(|a| set.contains(a)) && r.neg.iter().all(|a| !set.contains(a));
    for r in gp.rules() {
        if !holds(r) {
            continue;
        }
        let ok = match &r.head {
            GroundHead::Atom(h) => set.contains(h),
            GroundHead::Constraint => false,
            GroundHead::Choice { lower, upper, elements } => {
                let k = elements.iter().filter(|a| set.contains(a)).count() as u32;
                *lower <= k && k <= *upper
            }
        };
        if !ok {
            return false;
        }
    }
    // least model of the reduct, by naive iteration
    let mut derived: HashSet<AtomId> = HashSet::new();
    loop {
        let mut changed = false;
        for r in gp.rules() {
            if r.neg.iter().any(|a| set.contains(a)) || !r.pos.iter().all(|a| derived.contains(a)) {
                continue;
            }
            let heads: Vec<AtomId> = match &r.head {
                GroundHead::Atom(h) => vec![*h],
                GroundHead::Constraint => Vec::new(),
                GroundHead::Choice { elements, .. } => elements.iter().copied().filter(|a| set.contains(a)).collect(),
            };
            for h in heads {
                changed |= derived.insert(h);
            }
        }
        if !changed {
            break;
        }
    }
    derived == set
}

/// Atoms true in every model.
pub fn cautious_consequences(models: &[AnswerSet]) -> Result<BTreeSet<GroundAtom>, SolveError> {
    let (first, rest) = models.split_first().ok_or(SolveError::EmptyModelList)?;
    Ok(first
        .iter()
        .filter(|a| rest.iter().all(|m| m.contains(a)))
        .cloned()
        .collect())
}

/// Number of models in which `atom` has truth value `value`.
pub fn count_models_where(models: &[AnswerSet], atom: &GroundAtom, value: bool) -> usize {
    models.iter().filter(|m| m.contains(atom) == value).count()
}

/// Sorts models into canonical order and removes duplicates.
pub fn canonicalize(models: &mut Vec<AnswerSet>) {
    models.sort();
    models.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ground, parse_asp};

    fn models(src: &str) -> Vec<String> {
        let gp = ground(&parse_asp(src).unwrap()).unwrap();
        stable_models(&gp, ModelCap::Unbounded).unwrap().iter().map(ToString::to_string).collect()
    }

    fn set(atoms: &[&str]) -> AnswerSet {
        atoms.iter().map(|a| GroundAtom::parse(a).unwrap()).collect()
    }

    #[test]
    fn even_loop_has_two_models() {
        assert_eq!(models("a :- not b. b :- not a."), ["{a}", "{b}"]);
    }

    #[test]
    fn odd_loop_has_none() {
        assert!(models("a :- not a.").is_empty());
    }

    #[test]
    fn exactly_one_choice() {
        assert_eq!(models("1 {a; b} 1."), ["{a}", "{b}"]);
    }

    #[test]
    fn constraint_kills_fact() {
        assert!(models("p. :- p.").is_empty());
    }

    #[test]
    fn unbounded_choice_enumerates_subsets_in_order() {
        assert_eq!(models("{a; b}."), ["{}", "{a}", "{b}", "{a, b}"]);
    }

    #[test]
    fn positive_loop_is_unfounded() {
        assert_eq!(models("a :- b. b :- a. c :- not a."), ["{c}"]);
    }

    #[test]
    fn stability_check_examples() {
        let gp = ground(&parse_asp("p.").unwrap()).unwrap();
        assert!(is_stable_model(&gp, &set(&["p"])));
        assert!(!is_stable_model(&gp, &set(&[])));
        let gp = ground(&parse_asp("a :- not b. b :- not a.").unwrap()).unwrap();
        assert!(!is_stable_model(&gp, &set(&["a", "b"])));
        assert!(is_stable_model(&gp, &set(&["a"])));
        assert!(!is_stable_model(&gp, &set(&["zzz"])));
    }

    #[test]
    fn cap_truncates_and_reports() {
        let gp = ground(&parse_asp("{a; b; c}.").unwrap()).unwrap();
        let e = enumerate(&gp, ModelCap::AtMost(3)).unwrap();
        assert_eq!(e.models.len(), 3);
        assert!(!e.exhausted);
        let e = enumerate(&gp, ModelCap::AtMost(8)).unwrap();
        assert_eq!(e.models.len(), 8);
        assert!(e.exhausted);
    }

    #[test]
    fn search_limit_is_enforced() {
        let gp = ground(&parse_asp("n(1..30). {p(X) : n(X)}.").unwrap()).unwrap();
        assert_eq!(
            enumerate(&gp, ModelCap::Unbounded).unwrap_err(),
            SolveError::SearchLimitExceeded { free: 30, limit: SEARCH_LIMIT }
        );
        // facts do not count against the limit
        let gp = ground(&parse_asp("n(1..1000). q :- n(500).").unwrap()).unwrap();
        assert_eq!(stable_models(&gp, ModelCap::Unbounded).unwrap().len(), 1);
    }

    #[test]
    fn cautious_examples() {
        let c = cautious_consequences(&[set(&["a", "b"]), set(&["a", "c"])]).unwrap();
        assert_eq!(c.into_iter().map(|a| a.to_string()).collect::<Vec<_>>(), ["a"]);
        assert_eq!(cautious_consequences(&[set(&["a"])]).unwrap().len(), 1);
        assert!(cautious_consequences(&[set(&[]), set(&["a"])]).unwrap().is_empty());
        assert_eq!(cautious_consequences(&[]), Err(SolveError::EmptyModelList));
    }

    #[test]
    fn count_examples() {
        let ms = [set(&["a"]), set(&["b"])];
        let a = GroundAtom::prop("a");
        assert_eq!(count_models_where(&ms, &a, true), 1);
        assert_eq!(count_models_where(&ms, &a, false), 1);
        assert_eq!(count_models_where(&[], &a, true), 0);
    }

    #[test]
    fn canonical_set_order_matches_enumeration() {
        let mut ms = vec![set(&["a", "b"]), set(&["b"]), set(&[]), set(&["a"])];
        canonicalize(&mut ms);
        let text: Vec<String> = ms.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["{}", "{a}", "{b}", "{a, b}"]);
    }
}
