//! Entry points of the `lana` tool and its `aspdoc`/`aspunit` aliases.
//!
//! Every entry point takes the arguments after the program name, writes
//! results to `out` and messages to `err`, and returns the exit code.

mod args;

use std::io::Write;
use std::path::{Path, PathBuf};

use args::{parse, wants_help, Pair, UsageError, Valued};
use asp_core::parse_asp;
use asp_solver::{default_timeout, SolverConfig, SolverType};
use aspdoc::{generate_docs, Dialect, DocOptions};
use aspunit::{check_block, model_cap_from_env, render_condition_checks, render_report, run_suite, solver_config, ReportOptions};
use lana::{has_errors, lint, parse_sources, parse_testsuite, AnnotatedProgram, Diagnostic, Severity};


pub const USAGE: &str = "usage: lana <verb> [options] [files]

verbs:
  aspdoc   generate HTML documentation
  aspunit  run a test suite
  lint     check declarations and types
  check    check the pre- and postconditions of a block

Run `lana <verb> -h` for the options of a verb.
";

pub const ASPDOC_USAGE: &str = "usage: aspdoc [options] files

  -o=path          set output directory to path (default: current directory)
  -HA, -ha         show (default) / do not show hidden atoms
  -S, -s           include (default) / do not include source code
  -A, -a           include (default) / do not include annotations in source
                   code; no effect with -s
  -potassco, -p    source code uses gringo syntax (default)
  -dlv, -d         source code uses DLV syntax
  -help, -h        print usage information
";

pub const ASPUNIT_USAGE: &str = "usage: aspunit [options] testsuite

  -CE, -ce         show / do not show (default) a counterexample if a test
                   case fails
  -D, -d           show / do not show (default) the description of a
                   failing test case
  -help, -h        print usage information

LANA_MODEL_CAP limits the number of answer sets computed per test case.
LANA_SOLVER_TIMEOUT sets the solver timeout in seconds (default 60).
";

pub const LINT_USAGE: &str = "usage: lana lint [options] files

Prints diagnostics to standard output. Exits with 0 when there are no
errors, 1 when there are, and 2 when a file cannot be read or parsed.

  -help, -h        print usage information
";

pub const CHECK_USAGE: &str = "usage: lana check --input facts --block name [options] files

Checks the preconditions, postconditions and assertions of a block on the
given input facts.

  --input path       file with the input facts
  --block name       block whose conditions are checked
  --solver type      internal (default), clingo, clasp or dlv
  --solver-cmd cmd   solver command line
  --grounder cmd     grounder command line (clasp)
  -CE, -ce           show / do not show (default) counterexamples
  -D, -d             show / do not show (default) descriptions
  -help, -h          print usage information
";

const USAGE_EXIT: i32 = 2;

fn usage_error(err: &mut dyn Write, usage: &str, e: &UsageError) -> i32 {
    let _ = writeln!(err, "error: {e}\n\n{usage}");
    USAGE_EXIT
}

/// `lana <verb> ...`
pub fn lana_main(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some((verb, rest)) = args.split_first() else {
        let _ = write!(err, "{USAGE}");
        return USAGE_EXIT;
    };
    match verb.as_str() {
        "aspdoc" => aspdoc_main(rest, out, err),
        "aspunit" => aspunit_main(rest, out, err),
        "lint" => lint_main(rest, out, err),
        "check" => check_main(rest, out, err),
        "-h" | "-help" | "--help" | "help" => {
            let _ = write!(out, "{USAGE}");
            0
        }
        other => usage_error(err, USAGE, &UsageError(format!("unknown verb {other}"))),
    }
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Reads and parses program files; errors are reported to `err`.
fn load(files: &[String], err: &mut dyn Write) -> Option<(AnnotatedProgram, Vec<Diagnostic>)> {
    let mut sources = Vec::new();
    for f in files {
        match std::fs::read_to_string(f) {
            Ok(text) => sources.push((file_name(Path::new(f)), text)),
            Err(e) => {
                let _ = writeln!(err, "error: {f}: {e}");
                return None;
            }
        }
    }
    match parse_sources(&sources) {
        Ok(parsed) => Some(parsed),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            None
        }
    }
}

fn diagnostics(ap: &AnnotatedProgram, mut diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
    diags.extend(lint(ap));
    lana::diag::sort_diagnostics(&mut diags);
    diags
}

pub fn aspdoc_main(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if wants_help(args) {
        let _ = write!(out, "{ASPDOC_USAGE}");
        return 0;
    }
    const PAIRS: &[Pair] = &[
        Pair { key: "hidden", on: &["-HA"], off: &["-ha"] },
        Pair { key: "source", on: &["-S"], off: &["-s"] },
        Pair { key: "lana", on: &["-A"], off: &["-a"] },
        Pair { key: "dlv", on: &["-dlv", "-d"], off: &["-potassco", "-p"] },
    ];
    const VALUED: &[Valued] = &[Valued { key: "out", spellings: &["-o"] }];
    let parsed = match parse(args, PAIRS, VALUED) {
        Ok(p) if p.positional.is_empty() => return usage_error(err, ASPDOC_USAGE, &UsageError("no input files".into())),
        Ok(p) => p,
        Err(e) => return usage_error(err, ASPDOC_USAGE, &e),
    };
    let opts = DocOptions {
        output_dir: PathBuf::from(parsed.value("out").unwrap_or(".")),
        show_hidden_atoms: parsed.flag("hidden").unwrap_or(true),
        include_source: parsed.flag("source").unwrap_or(true),
        include_lana_in_source: parsed.flag("lana").unwrap_or(true),
        dialect: if parsed.flag("dlv") == Some(true) { Dialect::Dlv } else { Dialect::Gringo },
    };
    let Some((ap, diags)) = load(&parsed.positional, err) else { return 2 };
    for d in diagnostics(&ap, diags) {
        let _ = writeln!(err, "{d}");
    }
    let site = generate_docs(&ap, &opts);
    if let Err(e) = site.write_to(&opts.output_dir) {
        let _ = writeln!(err, "error: {}: {e}", opts.output_dir.display());
        return 2;
    }
    0
}

fn report_options(parsed: &args::Parsed) -> ReportOptions {
    ReportOptions {
        show_counterexample: parsed.flag("ce").unwrap_or(false),
        show_description: parsed.flag("desc").unwrap_or(false),
    }
}

const REPORT_PAIRS: &[Pair] = &[
    Pair { key: "ce", on: &["-CE"], off: &["-ce"] },
    Pair { key: "desc", on: &["-D"], off: &["-d"] },
];

pub fn aspunit_main(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if wants_help(args) {
        let _ = write!(out, "{ASPUNIT_USAGE}");
        return 0;
    }
    let parsed = match parse(args, REPORT_PAIRS, &[]) {
        Ok(p) => p,
        Err(e) => return usage_error(err, ASPUNIT_USAGE, &e),
    };
    let path = match parsed.positional.as_slice() {
        [one] => Path::new(one),
        [] => return usage_error(err, ASPUNIT_USAGE, &UsageError("no test suite given".into())),
        _ => return usage_error(err, ASPUNIT_USAGE, &UsageError("only one test suite can be run".into())),
    };
    let suite = match std::fs::read_to_string(path) {
        Ok(text) => parse_testsuite(&text, path),
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 2;
        }
    };
    let suite = match suite {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 2;
        }
    };
    let cfg = match solver_config(&suite) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match run_suite(&suite, &cfg) {
        Ok(report) => {
            let _ = write!(out, "{}", render_report(&report, report_options(&parsed)));
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn lint_main(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if wants_help(args) {
        let _ = write!(out, "{LINT_USAGE}");
        return 0;
    }
    let parsed = match parse(args, &[], &[]) {
        Ok(p) if p.positional.is_empty() => return usage_error(err, LINT_USAGE, &UsageError("no input files".into())),
        Ok(p) => p,
        Err(e) => return usage_error(err, LINT_USAGE, &e),
    };
    let Some((ap, diags)) = load(&parsed.positional, err) else { return 2 };
    let diags = diagnostics(&ap, diags);
    // hidden atoms are documentation material, not findings
    for d in diags.iter().filter(|d| d.severity() != Severity::Info) {
        let _ = writeln!(out, "{d}");
    }
    i32::from(has_errors(&diags))
}

pub fn check_main(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if wants_help(args) {
        let _ = write!(out, "{CHECK_USAGE}");
        return 0;
    }
    const VALUED: &[Valued] = &[
        Valued { key: "input", spellings: &["--input"] },
        Valued { key: "block", spellings: &["--block"] },
        Valued { key: "solver", spellings: &["--solver"] },
        Valued { key: "solver-cmd", spellings: &["--solver-cmd"] },
        Valued { key: "grounder", spellings: &["--grounder"] },
    ];
    let parsed = match parse(args, REPORT_PAIRS, VALUED) {
        Ok(p) => p,
        Err(e) => return usage_error(err, CHECK_USAGE, &e),
    };
    let (Some(input), Some(block)) = (parsed.value("input"), parsed.value("block")) else {
        return usage_error(err, CHECK_USAGE, &UsageError("--input and --block are required".into()));
    };
    if parsed.positional.is_empty() {
        return usage_error(err, CHECK_USAGE, &UsageError("no input files".into()));
    }
    let solver = match parsed.value("solver").unwrap_or("internal").parse::<SolverType>() {
        Ok(t) => t,
        Err(e) => return usage_error(err, CHECK_USAGE, &UsageError(e.to_string())),
    };
    let cfg = match solver {
        SolverType::Internal => Ok(SolverConfig::internal()),
        t => SolverConfig::external(t, parsed.value("solver-cmd").map(str::to_string), parsed.value("grounder").map(str::to_string)),
    };
    let cfg = match cfg {
        Ok(c) => c.with_model_cap(model_cap_from_env()).with_timeout(default_timeout()),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let facts = match std::fs::read_to_string(input).map_err(|e| e.to_string()).and_then(|t| parse_asp(&t).map_err(|e| e.to_string())) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {input}: {e}");
            return 2;
        }
    };
    let Some((ap, _)) = load(&parsed.positional, err) else { return 2 };
    let Some(results) = check_block(&ap, block, &facts, &cfg) else {
        let _ = writeln!(err, "error: unknown block `{block}`");
        return 2;
    };
    let _ = write!(out, "{}", render_condition_checks(&results, report_options(&parsed)));
    if results.iter().any(|(_, r)| r.is_err()) {
        2
    } else if results.iter().all(|(_, r)| r.as_ref().is_ok_and(|r| r.verdict == aspunit::Verdict::Pass)) {
        0
    } else {
        1
    }
}

/// Runs an entry point on the process arguments and exits.
pub fn run(entry: fn(&[String], &mut dyn Write, &mut dyn Write) -> i32) -> ! {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = entry(&args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code)
}
