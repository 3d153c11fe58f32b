//! Acceptance suite. Prints one line per criterion and exits non-zero when
//! any criterion fails. Criterion 7 needs clingo on the PATH and is skipped
//! otherwise.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use asp_core::{parse_asp, solve_text, AnswerSet, GroundAtom, ModelCap, Program, Signature};
use asp_solver::{solve, SolverConfig, SolverResult, SolverType};
use aspdoc::{generate_docs, DocOptions, DocSite};
use aspunit::{
    check_postcondition, check_precondition, evaluate_condition, render_report, run_suite, solver_config, Outcome,
    ReportOptions, Verdict,
};
use lana::{
    lint, parse_source, parse_testsuite, AnnotatedProgram, AtomsMode, ConditionKind, ConditionMode, DiagnosticKind,
    TestCondition,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

enum Status {
    Pass,
    Fail(String),
    Skip(String),
}

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Check {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, limit {limit:?}");
    Ok(())
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn battleship_text() -> String {
    std::fs::read_to_string(fixtures().join("battleship.lp")).expect("fixture")
}

fn battleship() -> AnnotatedProgram {
    let (ap, diags) = parse_source("battleship.lp", &battleship_text()).expect("fixture parses");
    assert!(diags.is_empty(), "{diags:?}");
    ap
}

fn sigs(list: &[(&str, usize)]) -> Vec<Signature> {
    list.iter().map(|(p, a)| Signature::new(*p, *a)).collect()
}

// 1 ---------------------------------------------------------------------

fn fixture_parse() -> Check {
    let start = Instant::now();
    let (ap, diags) = parse_source("battleship.lp", &battleship_text()).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(1))?;
    ensure!(diags.is_empty(), "diagnostics: {diags:?}");
    let names = |bs: &[lana::Block]| bs.iter().map(|b| b.name.clone()).collect::<Vec<_>>();
    ensure!(names(&ap.root.children) == ["Battleship"], "root children {:?}", names(&ap.root.children));
    let bs = &ap.root.children[0];
    ensure!(names(&bs.children) == ["Guess"], "Battleship children {:?}", names(&bs.children));
    ensure!(bs.children[0].children.is_empty(), "Guess has children");
    ensure!(bs.input_sig == sigs(&[("water", 2), ("ship", 2), ("rowHint", 2), ("colHint", 2)]), "input {:?}", bs.input_sig);
    ensure!(bs.output_sig == sigs(&[("ship", 4)]), "output {:?}", bs.output_sig);
    let decls = ap.blocks().iter().map(|b| b.atom_decls.len()).sum::<usize>();
    ensure!(bs.atom_decls.len() == 5 && decls == 5, "{decls} atom declarations");
    let conds: Vec<_> = ap.blocks().into_iter().flat_map(|b| b.conditions.clone()).collect();
    ensure!(conds.len() == 2, "{} conditions", conds.len());
    let expect = [
        (ConditionKind::Precondition, "Excl", "clash", 1),
        (ConditionKind::Postcondition, "Overlength", "ov", 2),
    ];
    for (c, (kind, name, atom, rules)) in conds.iter().zip(expect) {
        ensure!(
            c.kind == kind
                && c.name == name
                && c.mode == ConditionMode::Never
                && c.atoms == [GroundAtom::prop(atom)]
                && c.rules.len() == rules,
            "condition {} differs",
            c.name
        );
    }
    let scopes: Vec<Vec<&str>> = ap.test_cases.iter().map(|t| t.scope.iter().map(String::as_str).collect()).collect();
    ensure!(scopes == [vec!["Guess"], vec!["Guess"], vec!["Guess", "Touch"]], "scopes {scopes:?}");
    Ok(())
}

// 2 ---------------------------------------------------------------------

fn scaled_report() -> Check {
    let start = Instant::now();
    let path = fixtures().join("suite/scaled.suite");
    let suite = parse_testsuite(&std::fs::read_to_string(&path).unwrap(), &path).map_err(|e| e.to_string())?;
    let report = run_suite(&suite, &SolverConfig::internal()).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(60))?;
    let outcomes: Vec<(&str, Outcome)> = report.results.iter().map(|r| (r.name.as_str(), r.outcome)).collect();
    ensure!(
        outcomes
            == [("ShipTopLeftCorner", Outcome::Pass), ("NoDiagonalShips", Outcome::Pass), ("TouchingShips", Outcome::Fail)],
        "outcomes {outcomes:?}"
    );
    let labels: Vec<&str> = report.results.iter().map(|r| r.outcome.label()).collect();
    ensure!(labels == ["Successful", "Successful", "Failed"], "labels {labels:?}");
    let failed = &report.results[2].condition_results[0].failed_checks[0];
    let ce = failed.counterexample.as_ref().ok_or("no counterexample")?;
    for a in ["ship(1,1,1,2)", "ship(1,2,1,4)"] {
        ensure!(ce.contains(&GroundAtom::parse(a).unwrap()), "counterexample {ce} lacks {a}");
    }
    let text = render_report(&report, ReportOptions { show_counterexample: true, show_description: true });
    ensure!(text.contains("Failed Test : @falseinall forbiddenShip"), "report:\n{text}");
    Ok(())
}

// 3 ---------------------------------------------------------------------

#[derive(Debug)]
struct Rule {
    head: Option<usize>,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

fn random_program(rng: &mut StdRng) -> Vec<Rule> {
    let n = rng.random_range(1..=10);
    let count = rng.random_range(1..=14);
    (0..count)
        .map(|_| {
            let head = if rng.random_bool(0.15) { None } else { Some(rng.random_range(0..n)) };
            let mut body = |p: f64| -> Vec<usize> {
                let len = if rng.random_bool(p) { 0 } else { rng.random_range(1..=2) };
                // body atoms may range a little past the heads
                (0..len).map(|_| rng.random_range(0..n + 2)).collect()
            };
            let pos = body(0.4);
            let neg = body(0.5);
            Rule { head, pos, neg }
        })
        // `:- .` is not a rule
        .filter(|r| r.head.is_some() || !r.pos.is_empty() || !r.neg.is_empty())
        .collect()
}

fn program_text(rules: &[Rule]) -> String {
    let mut out = String::new();
    for r in rules {
        let mut body: Vec<String> = r.pos.iter().map(|a| format!("a{a}")).collect();
        body.extend(r.neg.iter().map(|a| format!("not a{a}")));
        let head = r.head.map(|h| format!("a{h}")).unwrap_or_default();
        if body.is_empty() {
            out.push_str(&format!("{head}.\n"));
        } else {
            out.push_str(&format!("{head} :- {}.\n", body.join(", ")));
        }
    }
    out
}

/// Least model of the reduct of `rules` with respect to `s`.
fn reduct_least_model(rules: &[Rule], s: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut m = BTreeSet::new();
    loop {
        let mut changed = false;
        for r in rules {
            let Some(h) = r.head else { continue };
            if r.neg.iter().any(|a| s.contains(a)) || !r.pos.iter().all(|a| m.contains(a)) {
                continue;
            }
            changed |= m.insert(h);
        }
        if !changed {
            return m;
        }
    }
}

fn oracle(rules: &[Rule]) -> BTreeSet<BTreeSet<String>> {
    let heads: Vec<usize> = rules.iter().filter_map(|r| r.head).collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << heads.len()) {
        let s: BTreeSet<usize> = heads.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| *a).collect();
        let violated = rules.iter().any(|r| {
            r.head.is_none() && r.pos.iter().all(|a| s.contains(a)) && !r.neg.iter().any(|a| s.contains(a))
        });
        if !violated && reduct_least_model(rules, &s) == s {
            out.insert(s.iter().map(|a| format!("a{a}")).collect());
        }
    }
    out
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut nonempty = 0;
    for _ in 0..250 {
        let rules = random_program(&mut rng);
        let text = program_text(&rules);
        let e = solve_text(&text, ModelCap::Unbounded).map_err(|e| format!("{e} on\n{text}"))?;
        ensure!(e.exhausted, "not exhausted on\n{text}");
        let got: BTreeSet<BTreeSet<String>> =
            e.models.iter().map(|m| m.iter().map(|a| a.to_string()).collect()).collect();
        ensure!(got.len() == e.models.len(), "duplicate models on\n{text}");
        let want = oracle(&rules);
        ensure!(got == want, "solver {got:?}, oracle {want:?} on\n{text}");
        nonempty += usize::from(!want.is_empty());
    }
    ensure!(nonempty > 50, "only {nonempty} programs had answer sets");
    within(start, Duration::from_secs(10))
}

// 4 ---------------------------------------------------------------------

fn verdict(r: Result<aspunit::ConditionResult, asp_solver::SolverError>) -> Result<Verdict, String> {
    r.map(|c| c.verdict).map_err(|e| e.to_string())
}

fn facts(text: &str) -> Program {
    parse_asp(text).expect("facts")
}

fn exhausted(models: Vec<AnswerSet>) -> SolverResult {
    SolverResult { models, exhausted: true, raw_output: String::new(), elapsed: Duration::ZERO }
}

fn condition_semantics() -> Check {
    let ap = battleship();
    let bs = ap.find_block("Battleship").unwrap();
    let excl = bs.conditions.iter().find(|c| c.name == "Excl").unwrap();
    let ov = bs.conditions.iter().find(|c| c.name == "Overlength").unwrap();
    let cfg = SolverConfig::internal();
    let none = Program::default();
    let cases = [
        ("Excl on water(1,1). ship(1,1).", verdict(check_precondition(excl, &facts("water(1,1). ship(1,1)."), &cfg))?, Verdict::Fail),
        ("Excl on water(1,1).", verdict(check_precondition(excl, &facts("water(1,1)."), &cfg))?, Verdict::Pass),
        ("Overlength on ship(1,1,1,6).", verdict(check_postcondition(ov, &none, &facts("ship(1,1,1,6)."), &cfg))?, Verdict::Fail),
        ("Overlength on ship(1,1,1,4).", verdict(check_postcondition(ov, &none, &facts("ship(1,1,1,4)."), &cfg))?, Verdict::Pass),
    ];
    for (what, got, want) in cases {
        ensure!(got == want, "{what}: {got:?}, expected {want:?}");
    }

    let mut rng = StdRng::seed_from_u64(4);
    let atoms = ["a", "b", "c"];
    for _ in 0..100 {
        let count = rng.random_range(0..6);
        let mut sets: Vec<AnswerSet> = (0..count)
            .map(|_| AnswerSet::new(atoms.iter().filter(|_| rng.random_bool(0.5)).map(|a| GroundAtom::prop(*a))))
            .collect();
        sets.sort();
        sets.dedup();
        let r = exhausted(sets);
        for a in atoms {
            let v = |mode| {
                evaluate_condition(&TestCondition::TestAtoms { atoms: vec![GroundAtom::prop(a)], mode }, &r).verdict
            };
            ensure!(v(AtomsMode::TrueInAll) == v(AtomsMode::FalseInAtMost(0)), "trueinall duality on {:?}", r.models);
            ensure!(v(AtomsMode::FalseInAll) == v(AtomsMode::TrueInAtMost(0)), "falseinall duality on {:?}", r.models);
            // and against the definition
            let all = r.models.iter().all(|m| m.contains(&GroundAtom::prop(a)));
            ensure!((v(AtomsMode::TrueInAll) == Verdict::Pass) == all, "trueinall definition on {:?}", r.models);
        }
    }
    Ok(())
}

// 5 ---------------------------------------------------------------------

fn attribute_values<'a>(html: &'a str, attr: &str) -> Vec<&'a str> {
    let key = format!(" {attr}=\"");
    let mut out = Vec::new();
    let mut rest = html;
    while let Some(i) = rest.find(&key) {
        rest = &rest[i + key.len()..];
        let end = rest.find('"').unwrap_or(rest.len());
        out.push(&rest[..end]);
        rest = &rest[end..];
    }
    out
}

fn dangling(site: &DocSite) -> Vec<String> {
    let ids: HashMap<&str, BTreeSet<&str>> =
        site.pages.iter().map(|(p, h)| (p.as_str(), attribute_values(h, "id").into_iter().collect())).collect();
    let mut bad = Vec::new();
    for (page, html) in &site.pages {
        for href in attribute_values(html, "href") {
            let (target, frag) = href.split_once('#').unwrap_or((href, ""));
            let target = if target.is_empty() { page.as_str() } else { target };
            let ok = ids.get(target).is_some_and(|set| frag.is_empty() || set.contains(frag));
            if !ok {
                bad.push(format!("{page} -> {href}"));
            }
        }
    }
    bad
}

fn documentation_site() -> Check {
    let start = Instant::now();
    let ap = battleship();
    let site = generate_docs(&ap, &DocOptions::default());
    let index = site.pages.get("index.html").ok_or("no index.html")?;
    let bad = dangling(&site);
    ensure!(bad.is_empty(), "dangling links: {bad:?}");
    let nav_start = index.find("<nav id=\"summary\">").ok_or("no summary")?;
    let nav = &index[nav_start..nav_start + index[nav_start..].find("</nav>").ok_or("unclosed summary")?];
    for name in ["Battleship", "Guess"] {
        let n = nav.matches(&format!(">{name}</a>")).count();
        ensure!(n == 1, "{name} listed {n} times");
    }
    let b = nav.find(">Battleship</a>").unwrap();
    let g = nav.find(">Guess</a>").unwrap();
    ensure!(b < g && nav[b..g].contains("<ul>"), "Guess is not nested under Battleship");
    ensure!(site.pages.values().any(|h| h.contains("Hidden Atoms")), "no Hidden Atoms heading by default");
    let off = generate_docs(&ap, &DocOptions { show_hidden_atoms: false, ..DocOptions::default() });
    ensure!(off.pages.values().all(|h| !h.contains("Hidden Atoms")), "Hidden Atoms heading under -ha");
    let again = generate_docs(&battleship(), &DocOptions::default());
    ensure!(again.pages == site.pages, "two runs differ");
    within(start, Duration::from_secs(1))
}

// 6 ---------------------------------------------------------------------

/// The fixture with `extra` placed just before the end of the Battleship block.
fn mutated(extra: &str) -> String {
    let text = battleship_text();
    let close = "%** } *%\n\n%**\n @testcase";
    let i = text.find(close).expect("end of Battleship");
    format!("{}{extra}\n{}", &text[..i], &text[i..])
}

/// 1-based line and column of the first occurrence of `needle`.
fn position(text: &str, needle: &str) -> (u32, u32) {
    let i = text.find(needle).expect("needle");
    let line = text[..i].matches('\n').count() as u32 + 1;
    let col = (i - text[..i].rfind('\n').map_or(0, |n| n + 1)) as u32 + 1;
    (line, col)
}

fn lint_text(name: &str, text: &str) -> Result<Vec<(DiagnosticKind, u32, u32)>, String> {
    let (ap, diags) = parse_source(name, text).map_err(|e| e.to_string())?;
    let mut all = diags;
    all.extend(lint(&ap));
    Ok(all.into_iter().map(|d| (d.kind, d.pos.line, d.pos.col)).collect())
}

fn diagnostics() -> Check {
    let src = mutated("water(1,1,1).");
    let (l, c) = position(&src, "water(1,1,1).");
    let want = vec![(DiagnosticKind::ArityMismatch { predicate: "water".into(), found: 3, declared: vec![2] }, l, c)];
    let got = lint_text("battleship.lp", &src)?;
    ensure!(got == want, "water(1,1,1).: {got:?}");

    let src = mutated("rowHint(11,3).");
    let (l, c) = position(&src, "rowHint(11,3).");
    let want = vec![(DiagnosticKind::TypeViolation { predicate: "rowHint".into(), position: 1, value: "11".into() }, l, c)];
    let got = lint_text("battleship.lp", &src)?;
    ensure!(got == want, "rowHint(11,3).: {got:?}");

    let src = mutated("%**\n @term A\n @samerangeas B\n @term B\n @samerangeas A\n*%");
    let (l, c) = position(&src, "@term A");
    let got = lint_text("battleship.lp", &src)?;
    let codes: Vec<(&str, u32, u32)> = got.iter().map(|(k, l, c)| (k.code(), *l, *c)).collect();
    ensure!(codes == [("CircularSameRangeAs", l, c)], "circular pair: {got:?}");

    let plain = "r(1..10). c(1..10).\n{ship(X1,Y1,X2,Y2):r(X1):c(Y1):r(X2):c(Y2):X2>=X1:Y2>=Y1}.\n:- ship(X1,Y1,X2,Y2), X1!=X2, Y1!=Y2.\n";
    let got = lint_text("plain.lp", plain)?;
    ensure!(got.is_empty(), "unannotated program: {got:?}");
    Ok(())
}

// 7 ---------------------------------------------------------------------

fn clingo() -> Option<String> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path).map(|d| d.join("clingo")).find(|p| p.is_file()).map(|p| p.display().to_string())
}

const CORPUS: &[&str] = &[
    "a :- not b. b :- not a.",
    "p. :- p.",
    "{a; b; c}. :- a, b.",
    "q(1..3). {r(X)} :- q(X). :- r(1), r(2).",
    "p :- not q. q :- not r. r :- not p.",
    "a :- b. b :- a. c :- not a.",
    "r(1..1). c(1..4). {ship(X1,Y1,X2,Y2):r(X1):c(Y1):r(X2):c(Y2):X2>=X1:Y2>=Y1}. :- ship(X1,Y1,X2,Y2), X1!=X2, Y1!=Y2.",
];

fn external_agreement(cmd: &str) -> Check {
    let external = SolverConfig::external(SolverType::Clingo, Some(cmd.to_string()), None).map_err(|e| e.to_string())?;
    for src in CORPUS {
        let a = solve(src, &SolverConfig::internal()).map_err(|e| e.to_string())?;
        let b = solve(src, &external).map_err(|e| e.to_string())?;
        ensure!(a.models == b.models, "backends disagree on {src}");
    }
    let path = fixtures().join("suite/full.suite");
    let suite = parse_testsuite(&std::fs::read_to_string(&path).unwrap(), &path).map_err(|e| e.to_string())?;
    let cfg = solver_config(&suite).map_err(|e| e.to_string())?;
    let report = run_suite(&suite, &cfg).map_err(|e| e.to_string())?;
    let outcomes: Vec<Outcome> = report.results.iter().map(|r| r.outcome).collect();
    ensure!(outcomes == [Outcome::Pass, Outcome::Pass, Outcome::Fail], "full grid outcomes {outcomes:?}");
    Ok(())
}

fn run(f: impl FnOnce() -> Check) -> Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Status::Pass,
        Ok(Err(e)) => Status::Fail(e),
        Err(p) => Status::Fail(
            p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default(),
        ),
    }
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let mut results: BTreeMap<u32, (&str, Status)> = BTreeMap::new();
    results.insert(1, ("annotated Battleship parses into the expected model", run(fixture_parse)));
    results.insert(2, ("scaled Battleship suite reports pass/pass/fail", run(scaled_report)));
    results.insert(3, ("enumeration equals the reduct oracle on random programs", run(oracle_equivalence)));
    results.insert(4, ("pre/postcondition verdicts and mode duality", run(condition_semantics)));
    results.insert(5, ("documentation site is closed, nested and deterministic", run(documentation_site)));
    results.insert(6, ("diagnostics for fixture mutations", run(diagnostics)));
    let seven = match clingo() {
        Some(cmd) => run(|| external_agreement(&cmd)),
        None => Status::Skip("clingo not found on PATH".into()),
    };
    results.insert(7, ("internal and clingo backends agree", seven));

    let mut failed = 0;
    for (n, (what, status)) in &results {
        match status {
            Status::Pass => println!("criterion {n}: PASS  {what}"),
            Status::Skip(why) => println!("criterion {n}: SKIP  {what} ({why})"),
            Status::Fail(why) => {
                failed += 1;
                println!("criterion {n}: FAIL  {what}\n    {}", why.replace('\n', "\n    "));
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
