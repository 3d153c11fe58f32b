//! Running test cases and whole suites.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use asp_core::{ModelCap, Program};
use asp_solver::{default_timeout, solve, SolverConfig, SolverError, SolverType};
use lana::{parse_source, parse_sources, AnnotatedProgram, Condition, ConditionKind, SuiteConfig, TestCase};
use rayon::prelude::*;

use crate::eval::{check_postcondition, check_precondition, evaluate_condition, ConditionResult, Verdict};

/// Positive integer; caps the models requested per solver call.
pub const MODEL_CAP_ENV: &str = "LANA_MODEL_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Pass,
    Fail,
    Indeterminate,
    Error,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "Successful",
            Outcome::Fail => "Failed",
            Outcome::Indeterminate => "Indeterminate",
            Outcome::Error => "Error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestResult {
    pub name: String,
    pub description: String,
    pub outcome: Outcome,
    pub condition_results: Vec<ConditionResult>,
    /// Set exactly when the outcome is `Error`.
    pub error_message: Option<String>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub indeterminate: usize,
    pub errored: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestReport {
    pub suite_name: String,
    pub results: Vec<TestResult>,
    pub summary: Summary,
}

impl TestReport {
    pub fn new(suite_name: impl Into<String>, results: Vec<TestResult>) -> Self {
        let mut summary = Summary::default();
        for r in &results {
            match r.outcome {
                Outcome::Pass => summary.passed += 1,
                Outcome::Fail => summary.failed += 1,
                Outcome::Indeterminate => summary.indeterminate += 1,
                Outcome::Error => summary.errored += 1,
            }
        }
        TestReport { suite_name: suite_name.into(), results, summary }
    }

    /// 0 when everything passed, 2 if any test errored, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.errored > 0 {
            2
        } else if self.summary.failed + self.summary.indeterminate > 0 {
            1
        } else {
            0
        }
    }
}

/// A suite that could not be run at all.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}: {message}", path.display())]
pub struct SuiteError {
    pub path: PathBuf,
    pub message: String,
}

impl SuiteError {
    fn new(path: &Path, message: impl ToString) -> Self {
        SuiteError { path: path.to_path_buf(), message: message.to_string() }
    }
}

fn errored(tc: &TestCase, message: String, start: Instant) -> TestResult {
    TestResult {
        name: tc.name.clone(),
        description: tc.description.clone(),
        outcome: Outcome::Error,
        condition_results: Vec::new(),
        error_message: Some(message),
        elapsed: start.elapsed(),
    }
}

/// Solves the scoped blocks joined with the test's rules and checks every
/// condition on the answer sets.
pub fn run_testcase(tc: &TestCase, ap: &AnnotatedProgram, cfg: &SolverConfig) -> TestResult {
    let start = Instant::now();
    let scope = match ap.scope_rules(&tc.scope) {
        Ok(p) => p,
        Err(e) => return errored(tc, e.to_string(), start),
    };
    let program = Program::concat([&scope, &tc.rules]);
    let result = match solve(&program.to_string(), cfg) {
        Ok(r) => r,
        Err(e) => return errored(tc, e.to_string(), start),
    };
    let condition_results: Vec<ConditionResult> = tc.conditions.iter().map(|c| evaluate_condition(c, &result)).collect();
    let verdicts: Vec<Verdict> = condition_results.iter().map(|c| c.verdict).collect();
    let outcome = if verdicts.contains(&Verdict::Fail) {
        Outcome::Fail
    } else if verdicts.contains(&Verdict::Indeterminate) {
        Outcome::Indeterminate
    } else {
        Outcome::Pass
    };
    TestResult {
        name: tc.name.clone(),
        description: tc.description.clone(),
        outcome,
        condition_results,
        error_message: None,
        elapsed: start.elapsed(),
    }
}

fn solver_type(t: lana::SolverType) -> SolverType {
    match t {
        lana::SolverType::Dlv => SolverType::Dlv,
        lana::SolverType::Clasp => SolverType::Clasp,
        lana::SolverType::Clingo => SolverType::Clingo,
        lana::SolverType::Internal => SolverType::Internal,
    }
}

/// The model cap from the environment; unbounded when unset or unreadable.
pub fn model_cap_from_env() -> ModelCap {
    std::env::var(MODEL_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .map_or(ModelCap::Unbounded, ModelCap::AtMost)
}

/// Solver settings of a suite, with cap and timeout taken from the environment.
pub fn solver_config(suite: &SuiteConfig) -> Result<SolverConfig, SolverError> {
    let cfg = match suite.solver_type {
        lana::SolverType::Internal => SolverConfig::internal(),
        t => SolverConfig::external(solver_type(t), suite.solver_cmd.clone(), suite.grounder_cmd.clone())?,
    };
    Ok(cfg.with_model_cap(model_cap_from_env()).with_timeout(default_timeout()))
}

fn read(path: &Path) -> Result<String, SuiteError> {
    fs::read_to_string(path).map_err(|e| SuiteError::new(path, e))
}

fn display_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Loads the program files of a suite into one annotated program.
pub fn load_program(suite: &SuiteConfig) -> Result<AnnotatedProgram, SuiteError> {
    let paths = suite.program_paths();
    let mut files = Vec::new();
    for p in &paths {
        files.push((display_name(p), read(p)?));
    }
    parse_sources(&files).map(|(ap, _)| ap).map_err(|e| {
        // name the file the parser complained about
        let text = e.to_string();
        let path = paths.iter().find(|p| text.starts_with(&display_name(p))).unwrap_or(&paths[0]);
        SuiteError::new(path, text)
    })
}

/// Test cases of every test file, in suite order.
pub fn load_tests(suite: &SuiteConfig) -> Result<Vec<TestCase>, SuiteError> {
    let mut tests = Vec::new();
    for p in suite.test_paths() {
        let (ap, _) = parse_source(&display_name(&p), &read(&p)?).map_err(|e| SuiteError::new(&p, e))?;
        if ap.test_cases.is_empty() {
            return Err(SuiteError::new(&p, "no test case in file"));
        }
        tests.extend(ap.test_cases);
    }
    Ok(tests)
}

/// Runs every test of a suite. Tests run in parallel; results keep suite order.
pub fn run_suite(suite: &SuiteConfig, cfg: &SolverConfig) -> Result<TestReport, SuiteError> {
    let ap = load_program(suite)?;
    let tests = load_tests(suite)?;
    let results = tests.par_iter().map(|tc| run_testcase(tc, &ap, cfg)).collect();
    Ok(TestReport::new(suite.name.clone(), results))
}

/// Rules a condition of `block` is checked against: nothing for a
/// precondition, the block for a postcondition, the program for an assert.
pub fn condition_context(ap: &AnnotatedProgram, block: &str, cond: &Condition) -> Program {
    match cond.kind {
        ConditionKind::Precondition => Program::default(),
        ConditionKind::Postcondition => ap.scope_rules(&[block.to_string()]).unwrap_or_default(),
        ConditionKind::Assert => ap.scope_rules(std::slice::from_ref(&ap.root.name)).unwrap_or_default(),
    }
}

/// Checks every condition of a block against the given input facts.
pub fn check_block(
    ap: &AnnotatedProgram,
    block: &str,
    input: &Program,
    cfg: &SolverConfig,
) -> Option<Vec<(Condition, Result<ConditionResult, SolverError>)>> {
    let b = ap.find_block(block)?;
    let out = b
        .conditions
        .iter()
        .map(|c| {
            let r = match c.kind {
                ConditionKind::Precondition => check_precondition(c, input, cfg),
                _ => check_postcondition(c, &condition_context(ap, block, c), input, cfg),
            };
            (c.clone(), r)
        })
        .collect();
    Some(out)
}
