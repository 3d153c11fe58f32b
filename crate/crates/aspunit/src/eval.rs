//! Verdicts of test conditions and pre/postconditions over enumerated models.

use asp_core::{AnswerSet, GroundAtom, Program};
use asp_solver::{solve, SolverConfig, SolverError, SolverResult};
use lana::{AtomsMode, Condition, ConditionMode, TestCondition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// Enumeration was cut short before the question was settled.
    Indeterminate,
}

impl Verdict {
    /// Fail beats indeterminate beats pass.
    fn combine(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Indeterminate, _) | (_, Verdict::Indeterminate) => Verdict::Indeterminate,
            _ => Verdict::Pass,
        }
    }
}

/// Observed number of answer sets against the bound the mode asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub observed: usize,
    pub required: usize,
    /// `true` for at-least bounds.
    pub at_least: bool,
}

/// A check that did not pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailedCheck {
    /// `@falseinall forbiddenShip` and the like.
    pub description: String,
    pub verdict: Verdict,
    pub counterexample: Option<AnswerSet>,
    pub counts: Option<Counts>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub verdict: Verdict,
    pub failed_checks: Vec<FailedCheck>,
    pub warnings: Vec<String>,
}

impl ConditionResult {
    fn from_checks(checks: Vec<FailedCheck>) -> Self {
        let verdict = checks.iter().fold(Verdict::Pass, |v, c| v.combine(c.verdict));
        ConditionResult { verdict, failed_checks: checks, warnings: Vec::new() }
    }
}

pub const VACUOUS_WARNING: &str = "no answer sets; condition vacuously satisfied";

/// One atom against one mode. `None` when the check passes.
fn check_atom(atom: &GroundAtom, mode: AtomsMode, label: &str, models: &[AnswerSet], exhausted: bool) -> Option<FailedCheck> {
    let polarity = mode.polarity();
    let agreeing: Vec<&AnswerSet> = models.iter().filter(|m| m.contains(atom) == polarity).collect();
    let fail = |counterexample: Option<&AnswerSet>, counts| FailedCheck {
        description: format!("{label} {atom}"),
        verdict: Verdict::Fail,
        counterexample: counterexample.cloned(),
        counts,
    };
    let undecided = FailedCheck {
        description: format!("{label} {atom}"),
        verdict: Verdict::Indeterminate,
        counterexample: None,
        counts: None,
    };
    match mode {
        AtomsMode::TrueInAll | AtomsMode::FalseInAll => {
            if let Some(m) = models.iter().find(|m| m.contains(atom) != polarity) {
                Some(fail(Some(m), None))
            } else if exhausted {
                None
            } else {
                Some(undecided)
            }
        }
        AtomsMode::TrueInAtLeast(n) | AtomsMode::FalseInAtLeast(n) => {
            let n = n as usize;
            if agreeing.len() >= n {
                None
            } else if exhausted {
                Some(fail(None, Some(Counts { observed: agreeing.len(), required: n, at_least: true })))
            } else {
                Some(undecided)
            }
        }
        AtomsMode::TrueInAtMost(n) | AtomsMode::FalseInAtMost(n) => {
            let n = n as usize;
            if agreeing.len() > n {
                // the model that pushed the count over the bound
                let counts = Counts { observed: agreeing.len(), required: n, at_least: false };
                Some(fail(Some(agreeing[n]), Some(counts)))
            } else if exhausted {
                None
            } else {
                Some(undecided)
            }
        }
    }
}

/// Evaluates a test condition on the answer sets of the tested program.
/// Models are expected in canonical order, so counterexamples are the first
/// violating model in that order.
pub fn evaluate_condition(cond: &TestCondition, result: &SolverResult) -> ConditionResult {
    let models = &result.models;
    let exhausted = result.exhausted;
    let whole = |verdict, counterexample: Option<&AnswerSet>| FailedCheck {
        description: cond.to_string(),
        verdict,
        counterexample: counterexample.cloned(),
        counts: None,
    };
    let checks = match cond {
        TestCondition::HasAnswerSet if !models.is_empty() => vec![],
        TestCondition::HasAnswerSet if exhausted => vec![whole(Verdict::Fail, None)],
        TestCondition::HasAnswerSet => vec![whole(Verdict::Indeterminate, None)],
        TestCondition::NoAnswerSet if !models.is_empty() => vec![whole(Verdict::Fail, models.first())],
        TestCondition::NoAnswerSet if exhausted => vec![],
        TestCondition::NoAnswerSet => vec![whole(Verdict::Indeterminate, None)],
        TestCondition::TestAtoms { atoms, mode } => {
            let label = mode.to_string();
            atoms.iter().filter_map(|a| check_atom(a, *mode, &label, models, exhausted)).collect()
        }
    };
    ConditionResult::from_checks(checks)
}

/// Cautious entailment of a condition's `@always` atoms, and of the
/// negation of its `@never` atoms.
pub fn entailment(cond: &Condition, result: &SolverResult) -> ConditionResult {
    let mode = match cond.mode {
        ConditionMode::Always => AtomsMode::TrueInAll,
        ConditionMode::Never => AtomsMode::FalseInAll,
    };
    let checks = cond
        .atoms
        .iter()
        .filter_map(|a| check_atom(a, mode, cond.mode.keyword(), &result.models, result.exhausted))
        .collect();
    let mut r = ConditionResult::from_checks(checks);
    if result.models.is_empty() && result.exhausted {
        r.warnings.push(VACUOUS_WARNING.to_string());
    }
    r
}

/// Input facts joined with the precondition's rules.
pub fn check_precondition(cond: &Condition, input: &Program, cfg: &SolverConfig) -> Result<ConditionResult, SolverError> {
    let program = Program::concat([input, &cond.rules]);
    Ok(entailment(cond, &solve(&program.to_string(), cfg)?))
}

/// The block (the whole program, for asserts) joined with the input facts
/// and the condition's rules.
pub fn check_postcondition(
    cond: &Condition,
    block_rules: &Program,
    input: &Program,
    cfg: &SolverConfig,
) -> Result<ConditionResult, SolverError> {
    let program = Program::concat([block_rules, input, &cond.rules]);
    Ok(entailment(cond, &solve(&program.to_string(), cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn set(atoms: &[&str]) -> AnswerSet {
        AnswerSet::new(atoms.iter().map(|a| GroundAtom::parse(a).unwrap()))
    }

    fn result(models: Vec<AnswerSet>, exhausted: bool) -> SolverResult {
        SolverResult { models, exhausted, raw_output: String::new(), elapsed: Duration::ZERO }
    }

    fn atoms(mode: AtomsMode, a: &str) -> TestCondition {
        TestCondition::TestAtoms { atoms: vec![GroundAtom::parse(a).unwrap()], mode }
    }

    #[test]
    fn trueinatleast_decided_early() {
        let r = result(vec![set(&["goal"])], false);
        assert_eq!(evaluate_condition(&atoms(AtomsMode::TrueInAtLeast(1), "goal"), &r).verdict, Verdict::Pass);
        let r = result(vec![set(&[])], false);
        assert_eq!(evaluate_condition(&atoms(AtomsMode::TrueInAtLeast(1), "goal"), &r).verdict, Verdict::Indeterminate);
    }

    #[test]
    fn falseinall_counterexample() {
        let r = result(vec![set(&["a"]), set(&["a", "f"]), set(&["f"])], true);
        let c = evaluate_condition(&atoms(AtomsMode::FalseInAll, "f"), &r);
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(c.failed_checks[0].description, "@falseinall f");
        assert_eq!(c.failed_checks[0].counterexample, Some(set(&["a", "f"])));
    }

    #[test]
    fn answer_set_existence() {
        let none = result(vec![], true);
        assert_eq!(evaluate_condition(&TestCondition::NoAnswerSet, &none).verdict, Verdict::Pass);
        assert_eq!(evaluate_condition(&TestCondition::HasAnswerSet, &none).verdict, Verdict::Fail);
        let cut = result(vec![], false);
        assert_eq!(evaluate_condition(&TestCondition::NoAnswerSet, &cut).verdict, Verdict::Indeterminate);
        let one = result(vec![set(&[])], false);
        assert_eq!(evaluate_condition(&TestCondition::HasAnswerSet, &one).verdict, Verdict::Pass);
        assert_eq!(evaluate_condition(&TestCondition::NoAnswerSet, &one).verdict, Verdict::Fail);
    }

    #[test]
    fn atmost_counts() {
        let r = result(vec![set(&["a"]), set(&["a", "b"]), set(&["b"])], true);
        let c = evaluate_condition(&atoms(AtomsMode::TrueInAtMost(1), "a"), &r);
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(c.failed_checks[0].counts, Some(Counts { observed: 2, required: 1, at_least: false }));
        assert_eq!(c.failed_checks[0].counterexample, Some(set(&["a", "b"])));
        let c = evaluate_condition(&atoms(AtomsMode::FalseInAtLeast(2), "a"), &r);
        assert_eq!(c.failed_checks[0].counts, Some(Counts { observed: 1, required: 2, at_least: true }));
    }

    #[test]
    fn all_atoms_must_pass() {
        let r = result(vec![set(&["a"])], true);
        let cond = TestCondition::TestAtoms {
            atoms: vec![GroundAtom::parse("a").unwrap(), GroundAtom::parse("b").unwrap()],
            mode: AtomsMode::TrueInAll,
        };
        let c = evaluate_condition(&cond, &r);
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(c.failed_checks.len(), 1);
        assert_eq!(c.failed_checks[0].description, "@trueinall b");
    }
}
