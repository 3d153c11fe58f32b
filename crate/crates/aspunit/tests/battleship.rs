use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use asp_core::{parse_asp, AnswerSet, GroundAtom, Program};
use asp_solver::SolverConfig;
use aspunit::{
    check_block, check_postcondition, check_precondition, load_program, load_tests, render_report, run_suite,
    run_testcase, Outcome, ReportOptions, Verdict, VACUOUS_WARNING,
};
use lana::{parse_source, parse_testsuite, Condition, ConditionKind};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn suite(name: &str) -> lana::SuiteConfig {
    let path = fixtures().join("suite").join(name);
    parse_testsuite(&std::fs::read_to_string(&path).unwrap(), &path).unwrap()
}

fn atoms(list: &[&str]) -> BTreeSet<GroundAtom> {
    list.iter().map(|a| GroundAtom::parse(a).unwrap()).collect()
}

fn battleship_condition(name: &str) -> Condition {
    let src = std::fs::read_to_string(fixtures().join("battleship.lp")).unwrap();
    let (ap, _) = parse_source("battleship.lp", &src).unwrap();
    let (_, c) = ap.root.all_conditions().into_iter().find(|(_, c)| c.name == name).unwrap();
    c.clone()
}

fn facts(text: &str) -> Program {
    parse_asp(text).unwrap()
}

#[test]
fn scaled_suite_outcomes() {
    let s = suite("scaled.suite");
    let report = run_suite(&s, &SolverConfig::internal()).unwrap();
    let outcomes: Vec<(&str, Outcome)> = report.results.iter().map(|r| (r.name.as_str(), r.outcome)).collect();
    assert_eq!(
        outcomes,
        vec![
            ("ShipTopLeftCorner", Outcome::Pass),
            ("NoDiagonalShips", Outcome::Pass),
            ("TouchingShips", Outcome::Fail)
        ]
    );
    assert_eq!(report.exit_code(), 1);
}

/// On a one-row grid every set of horizontal ship placements is a model, so
/// the least model in canonical order with both touching ships holds just
/// those two ships.
#[test]
fn touching_counterexample_is_the_least_model() {
    let s = suite("scaled.suite");
    let report = run_suite(&s, &SolverConfig::internal()).unwrap();
    let touching = &report.results[2];
    let check = &touching.condition_results[0].failed_checks[0];
    assert_eq!(check.description, "@falseinall forbiddenShip");
    let expected = AnswerSet::new(atoms(&[
        "c(1)",
        "c(2)",
        "c(3)",
        "c(4)",
        "r(1)",
        "forbiddenShip",
        "ship(1,1,1,2)",
        "ship(1,2,1,4)",
    ]));
    assert_eq!(check.counterexample.as_ref(), Some(&expected));
}

#[test]
fn report_stanzas() {
    let s = suite("scaled.suite");
    let report = run_suite(&s, &SolverConfig::internal()).unwrap();
    let text = render_report(&report, ReportOptions { show_counterexample: true, show_description: true });
    let expected = "\
Test Suite BattleshipScaled: 2 passed, 1 failed, 0 indeterminate, 0 errors

Test Case ShipTopLeftCorner: Successful

Test Case NoDiagonalShips  : Successful

Test Case TouchingShips    : Failed
    two ships must not touch each other

  Failed Test : @falseinall forbiddenShip
    Counterexample:
      Answer set:
        c(1).c(2).c(3).c(4).forbiddenShip.r(1).
        ship(1, 1, 1, 2).ship(1, 2, 1, 4).
";
    assert_eq!(text, expected);
    let plain = render_report(&report, ReportOptions::default());
    assert!(plain.contains("  Failed Test : @falseinall forbiddenShip\n"));
    assert!(!plain.contains("Counterexample") && !plain.contains("two ships"));
}

#[test]
fn unknown_scope_block_is_an_error() {
    let s = suite("scaled.suite");
    let src = std::fs::read_to_string(fixtures().join("battleship.lp")).unwrap();
    // the unscaled fixture has no Touch block
    let (ap, _) = parse_source("battleship.lp", &src).unwrap();
    let touching = load_tests(&s).unwrap().into_iter().find(|t| t.name == "TouchingShips").unwrap();
    let r = run_testcase(&touching, &ap, &SolverConfig::internal());
    assert_eq!(r.outcome, Outcome::Error);
    assert_eq!(r.error_message.as_deref(), Some("unknown block `Touch`"));
}

#[test]
fn excl_precondition() {
    let excl = battleship_condition("Excl");
    assert_eq!(excl.kind, ConditionKind::Precondition);
    let cfg = SolverConfig::internal();
    let r = check_precondition(&excl, &facts("water(1,1). ship(1,1)."), &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert_eq!(r.failed_checks[0].description, "@never clash");
    assert_eq!(check_precondition(&excl, &facts("water(1,1)."), &cfg).unwrap().verdict, Verdict::Pass);
    assert_eq!(check_precondition(&excl, &Program::default(), &cfg).unwrap().verdict, Verdict::Pass);
}

#[test]
fn overlength_postcondition() {
    let ov = battleship_condition("Overlength");
    let cfg = SolverConfig::internal();
    let none = Program::default();
    let r = check_postcondition(&ov, &facts("ship(1,1,1,6)."), &none, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert_eq!(check_postcondition(&ov, &facts("ship(1,1,1,4)."), &none, &cfg).unwrap().verdict, Verdict::Pass);
    assert_eq!(check_postcondition(&ov, &none, &none, &cfg).unwrap().verdict, Verdict::Pass);
}

#[test]
fn inconsistent_input_is_vacuous() {
    let excl = battleship_condition("Excl");
    let r = check_precondition(&excl, &facts("water(1,1). ship(1,1). :- water(1,1)."), &SolverConfig::internal()).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.warnings, vec![VACUOUS_WARNING.to_string()]);
}

#[test]
fn check_block_on_scaled_program() {
    let s = suite("scaled.suite");
    let ap = load_program(&s).unwrap();
    let input = facts("water(1,1). ship(1,1).");
    let results = check_block(&ap, "Battleship", &input, &SolverConfig::internal()).unwrap();
    let verdicts: Vec<(&str, Verdict)> =
        results.iter().map(|(c, r)| (c.name.as_str(), r.as_ref().unwrap().verdict)).collect();
    assert_eq!(verdicts, vec![("Excl", Verdict::Fail), ("Overlength", Verdict::Pass)]);
    assert!(check_block(&ap, "Nope", &input, &SolverConfig::internal()).is_none());
}

#[test]
fn missing_program_file_names_it() {
    let mut s = suite("scaled.suite");
    s.program_files = vec!["missing.lp".into()];
    let e = run_suite(&s, &SolverConfig::internal()).unwrap_err();
    assert!(e.path.ends_with("missing.lp"));
}

#[test]
fn unnamed_test_takes_the_file_name() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p.lp"), "%** @block B { *%\na.\n%** } *%\n").unwrap();
    std::fs::write(dir.path().join("has_a.test"), "%** @testcase\n @scope B\n @testatoms a @trueinall *%\n").unwrap();
    let text = "@program p.lp\n@test has_a.test\n@solvertype internal\n";
    let s = parse_testsuite(text, &dir.path().join("s.suite")).unwrap();
    let report = run_suite(&s, &SolverConfig::internal()).unwrap();
    assert_eq!(report.results[0].name, "has_a");
    assert_eq!(report.results[0].outcome, Outcome::Pass);
    assert_eq!(report.exit_code(), 0);
}
