//! Unit testing for annotated answer-set programs.
//!
//! A test case names the blocks it tests and states conditions on the
//! answer sets of those blocks joined with the test's own rules. Suites of
//! test files are run against one solver configuration and summarized in a
//! plain-text report.

mod eval;
mod report;
mod run;

pub use eval::{
    check_postcondition, check_precondition, entailment, evaluate_condition, ConditionResult, Counts, FailedCheck,
    Verdict, VACUOUS_WARNING,
};
pub use report::{render_condition_checks, render_report, ReportOptions};
pub use run::{
    check_block, condition_context, load_program, load_tests, model_cap_from_env, run_suite, run_testcase, solver_config,
    Outcome, Summary, SuiteError, TestReport, TestResult, MODEL_CAP_ENV,
};
