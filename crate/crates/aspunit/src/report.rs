//! Plain-text test reports.

use std::fmt::Write;

use asp_core::AnswerSet;
use asp_solver::SolverError;
use lana::Condition;

use crate::eval::{ConditionResult, Counts, FailedCheck, Verdict};
use crate::run::TestReport;

/// Atom text per counterexample line, not counting the indent.
const WRAP: usize = 40;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportOptions {
    pub show_counterexample: bool,
    pub show_description: bool,
}

fn answer_set_lines(out: &mut String, model: &AnswerSet) {
    let mut line = String::new();
    for atom in model.iter() {
        let text = format!("{atom}.");
        if !line.is_empty() && line.len() + text.len() > WRAP {
            let _ = writeln!(out, "        {line}");
            line.clear();
        }
        line.push_str(&text);
    }
    if !line.is_empty() {
        let _ = writeln!(out, "        {line}");
    }
}

fn counts_line(c: &Counts) -> String {
    let bound = if c.at_least { "at least" } else { "at most" };
    format!("    Observed : {} answer sets, required {bound} {}", c.observed, c.required)
}

fn render_check(out: &mut String, check: &FailedCheck, options: ReportOptions) {
    let label = match check.verdict {
        Verdict::Indeterminate => "Undecided Test",
        _ => "Failed Test",
    };
    let _ = writeln!(out, "  {label} : {}", check.description);
    if let Some(c) = &check.counts {
        let _ = writeln!(out, "{}", counts_line(c));
    }
    if let (true, Some(model)) = (options.show_counterexample, &check.counterexample) {
        out.push_str("    Counterexample:\n      Answer set:\n");
        answer_set_lines(out, model);
    }
}

fn render_checks(out: &mut String, result: &ConditionResult, options: ReportOptions) {
    for check in &result.failed_checks {
        render_check(out, check, options);
    }
}

fn description_lines(out: &mut String, text: &str) {
    for line in text.lines() {
        let _ = writeln!(out, "    {line}");
    }
    out.push('\n');
}

pub fn render_report(report: &TestReport, options: ReportOptions) -> String {
    let s = &report.summary;
    let mut out = format!(
        "Test Suite {}: {} passed, {} failed, {} indeterminate, {} errors\n",
        report.suite_name, s.passed, s.failed, s.indeterminate, s.errored
    );
    let width = report.results.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    for r in &report.results {
        let _ = write!(out, "\nTest Case {:<width$}: {}\n", r.name, r.outcome.label());
        if r.outcome == crate::Outcome::Pass {
            continue;
        }
        if options.show_description && !r.description.is_empty() {
            description_lines(&mut out, &r.description);
        }
        if let Some(msg) = &r.error_message {
            let _ = writeln!(out, "  Error : {msg}");
        }
        for c in &r.condition_results {
            render_checks(&mut out, c, options);
        }
    }
    out
}

/// Report of an on-demand pre/postcondition check.
pub fn render_condition_checks(results: &[(Condition, Result<ConditionResult, SolverError>)], options: ReportOptions) -> String {
    let names: Vec<String> = results
        .iter()
        .map(|(c, _)| match c.kind {
            lana::ConditionKind::Assert => format!("Assertion {}", c.name),
            lana::ConditionKind::Precondition => format!("Precondition {}", c.name),
            lana::ConditionKind::Postcondition => format!("Postcondition {}", c.name),
        })
        .collect();
    let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (i, ((cond, result), name)) in results.iter().zip(&names).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let label = match result {
            Ok(r) => match r.verdict {
                Verdict::Pass => "Successful",
                Verdict::Fail => "Failed",
                Verdict::Indeterminate => "Indeterminate",
            },
            Err(_) => "Error",
        };
        let _ = writeln!(out, "{name:<width$}: {label}");
        match result {
            Err(e) => {
                let _ = writeln!(out, "  Error : {e}");
            }
            Ok(r) => {
                if r.verdict != Verdict::Pass && options.show_description && !cond.description.is_empty() {
                    description_lines(&mut out, &cond.description);
                }
                for w in &r.warnings {
                    let _ = writeln!(out, "  Warning : {w}");
                }
                render_checks(&mut out, r, options);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use asp_core::GroundAtom;

    #[test]
    fn wrapping_keeps_atoms_whole() {
        let model = AnswerSet::new((1..=12).map(|i| GroundAtom::parse(&format!("c({i})")).unwrap()));
        let mut out = String::new();
        answer_set_lines(&mut out, &model);
        for line in out.lines() {
            assert!(line.starts_with("        c("));
            assert!(line.len() - 8 <= WRAP);
        }
        let joined: String = out.lines().map(str::trim).collect();
        assert!(joined.starts_with("c(1).c(10).c(11).c(12).c(2)."));
    }
}
