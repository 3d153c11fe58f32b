//! One interface for computing answer sets, backed either by the built-in
//! solver of `asp-core` or by an external clingo, clasp or DLV process.
//!
//! ```
//! use asp_solver::{solve, SolverConfig};
//!
//! let result = solve("a :- not b. b :- not a.", &SolverConfig::internal()).unwrap();
//! assert_eq!(result.models.len(), 2);
//! assert!(result.exhausted);
//! ```

mod output;
mod process;

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use asp_core::{canonicalize, solve_text, AnswerSet, AspError, ModelCap};

pub use output::{parse_solver_output, render_models, Dialect};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);
/// Seconds; overrides [`DEFAULT_TIMEOUT`].
pub const TIMEOUT_ENV: &str = "LANA_SOLVER_TIMEOUT";

/// Longest stderr excerpt kept in a crash report.
const EXCERPT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverType {
    Dlv,
    Clasp,
    Clingo,
    Internal,
}

impl FromStr for SolverType {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dlv" => Ok(SolverType::Dlv),
            "clasp" => Ok(SolverType::Clasp),
            "clingo" => Ok(SolverType::Clingo),
            "internal" => Ok(SolverType::Internal),
            _ => Err(SolverError::SolverNotFound(s.to_string())),
        }
    }
}

impl fmt::Display for SolverType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverType::Dlv => "DLV",
            SolverType::Clasp => "clasp",
            SolverType::Clingo => "clingo",
            SolverType::Internal => "internal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("solver not found: {0}")]
    SolverNotFound(String),
    #[error("solver crashed (exit code {}): {stderr}", exit_code.map_or("none".to_string(), |c| c.to_string()))]
    SolverCrashed { exit_code: Option<i32>, stderr: String, raw_output: String },
    #[error("solver timed out after {after:?}")]
    Timeout { after: Duration, raw_output: String },
    #[error("cannot read solver output line `{line}`")]
    OutputParseError { line: String },
    #[error("clasp needs a grounder command")]
    GrounderRequired,
    #[error(transparent)]
    Program(#[from] AspError),
}

impl SolverError {
    /// Output of the failed run, kept verbatim.
    pub fn raw_output(&self) -> Option<&str> {
        match self {
            SolverError::SolverCrashed { raw_output, .. } | SolverError::Timeout { raw_output, .. } => Some(raw_output),
            _ => None,
        }
    }
}

/// The timeout from the environment, else [`DEFAULT_TIMEOUT`]. Unreadable
/// values are ignored.
pub fn default_timeout() -> Duration {
    std::env::var(TIMEOUT_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|s| s.is_finite() && *s > 0.0)
        .map(Duration::from_secs_f64)
        .unwrap_or(DEFAULT_TIMEOUT)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub solver_type: SolverType,
    /// Command line; defaults to the solver's usual binary name.
    pub solver_cmd: Option<String>,
    pub grounder_cmd: Option<String>,
    pub model_cap: ModelCap,
    pub timeout: Duration,
}

impl SolverConfig {
    pub fn internal() -> Self {
        SolverConfig {
            solver_type: SolverType::Internal,
            solver_cmd: None,
            grounder_cmd: None,
            model_cap: ModelCap::Unbounded,
            timeout: default_timeout(),
        }
    }

    pub fn external(solver_type: SolverType, solver_cmd: Option<String>, grounder_cmd: Option<String>) -> Result<Self, SolverError> {
        let cfg = SolverConfig { solver_type, solver_cmd, grounder_cmd, ..SolverConfig::internal() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_model_cap(mut self, cap: ModelCap) -> Self {
        self.model_cap = cap;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.solver_type == SolverType::Clasp && self.grounder_cmd.is_none() {
            return Err(SolverError::GrounderRequired);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverResult {
    /// In canonical order.
    pub models: Vec<AnswerSet>,
    /// `false` when the cap or the timeout cut enumeration short.
    pub exhausted: bool,
    pub raw_output: String,
    pub elapsed: Duration,
}

/// How each external solver is asked for models. All flag spellings live here.
struct Backend {
    dialect: Dialect,
    binary: &'static str,
    /// Arguments requesting `n` models; 0 asks for all of them.
    count_args: fn(usize) -> Vec<String>,
    /// Program passed as a file argument rather than on stdin.
    via_file: bool,
    ok_exit: fn(i32) -> bool,
}

fn clingo_count(n: usize) -> Vec<String> {
    vec![n.to_string()]
}

fn dlv_count(n: usize) -> Vec<String> {
    if n == 0 {
        Vec::new()
    } else {
        vec![format!("-n={n}")]
    }
}

/// clingo and clasp report satisfiability in the low bits; 32 and up are errors.
fn clasp_exit(code: i32) -> bool {
    (0..32).contains(&code)
}

fn dlv_exit(code: i32) -> bool {
    code == 0
}

fn backend(t: SolverType) -> Backend {
    match t {
        SolverType::Clingo | SolverType::Internal => {
            Backend { dialect: Dialect::Clingo, binary: "clingo", count_args: clingo_count, via_file: false, ok_exit: clasp_exit }
        }
        SolverType::Clasp => {
            Backend { dialect: Dialect::Clingo, binary: "clasp", count_args: clingo_count, via_file: false, ok_exit: clasp_exit }
        }
        SolverType::Dlv => Backend { dialect: Dialect::Dlv, binary: "dlv", count_args: dlv_count, via_file: true, ok_exit: dlv_exit },
    }
}

/// Keeps models up to the cap; `true` if nothing was dropped.
fn apply_cap(models: &mut Vec<AnswerSet>, cap: ModelCap) -> bool {
    match cap.limit() {
        Some(n) if models.len() > n => {
            models.truncate(n);
            false
        }
        _ => true,
    }
}

fn excerpt(text: &str) -> String {
    let text = text.trim();
    if text.len() <= EXCERPT {
        return text.to_string();
    }
    let mut start = text.len() - EXCERPT;
    while !text.is_char_boundary(start) {
        start += 1;
    }
    format!("...{}", &text[start..])
}

pub fn solve(program_text: &str, cfg: &SolverConfig) -> Result<SolverResult, SolverError> {
    cfg.validate()?;
    match cfg.solver_type {
        SolverType::Internal => solve_internal(program_text, cfg),
        _ => solve_external(program_text, cfg),
    }
}

fn solve_internal(program_text: &str, cfg: &SolverConfig) -> Result<SolverResult, SolverError> {
    let start = Instant::now();
    let (tx, rx) = mpsc::channel();
    let text = program_text.to_string();
    let cap = cfg.model_cap;
    // detached: a search past the deadline finishes on its own and is dropped
    thread::spawn(move || {
        let _ = tx.send(solve_text(&text, cap));
    });
    let e = match rx.recv_timeout(cfg.timeout) {
        Ok(r) => r?,
        Err(_) => return Err(SolverError::Timeout { after: cfg.timeout, raw_output: String::new() }),
    };
    let mut models = e.models;
    canonicalize(&mut models);
    let raw_output = render_models(&models, Dialect::Clingo);
    Ok(SolverResult { models, exhausted: e.exhausted, raw_output, elapsed: start.elapsed() })
}

fn solve_external(program_text: &str, cfg: &SolverConfig) -> Result<SolverResult, SolverError> {
    let start = Instant::now();
    let b = backend(cfg.solver_type);
    // one extra model tells a truncated enumeration from a complete one
    let request = cfg.model_cap.limit().map_or(0, |n| n + 1);
    let mut extra = (b.count_args)(request);

    let mut file = None;
    let input = if b.via_file {
        let mut f = tempfile::Builder::new().suffix(".lp").tempfile().map_err(|e| crash(None, e.to_string(), ""))?;
        f.write_all(program_text.as_bytes()).map_err(|e| crash(None, e.to_string(), ""))?;
        extra.push(f.path().to_string_lossy().into_owned());
        file = Some(f);
        None
    } else {
        Some(program_text.to_string())
    };

    let solver_line = cfg.solver_cmd.clone().unwrap_or_else(|| b.binary.to_string());
    let mut stages = Vec::new();
    if cfg.solver_type == SolverType::Clasp {
        stages.push(process::command(cfg.grounder_cmd.as_deref().unwrap_or_default(), &[])?);
    }
    stages.push(process::command(&solver_line, &extra)?);

    let outcome = process::run_pipeline(stages, input, cfg.timeout)?;
    drop(file);
    let raw = outcome.stdout;

    if outcome.timed_out {
        // models printed before the deadline still count, as a partial result
        return match parse_solver_output(&raw, b.dialect) {
            Ok(mut models) if !models.is_empty() => {
                apply_cap(&mut models, cfg.model_cap);
                canonicalize(&mut models);
                Ok(SolverResult { models, exhausted: false, raw_output: raw, elapsed: start.elapsed() })
            }
            _ => Err(SolverError::Timeout { after: cfg.timeout, raw_output: raw }),
        };
    }

    let last = outcome.stages.len() - 1;
    for (i, stage) in outcome.stages.iter().enumerate() {
        let code = stage.status.and_then(|s| s.code());
        let ok = match code {
            Some(c) if i == last => (b.ok_exit)(c),
            Some(c) => c == 0,
            None => false,
        };
        if !ok {
            return Err(crash(code, excerpt(&stage.stderr), &raw));
        }
    }

    let mut models = parse_solver_output(&raw, b.dialect)?;
    let exhausted = apply_cap(&mut models, cfg.model_cap);
    canonicalize(&mut models);
    Ok(SolverResult { models, exhausted, raw_output: raw, elapsed: start.elapsed() })
}

fn crash(exit_code: Option<i32>, stderr: String, raw: &str) -> SolverError {
    SolverError::SolverCrashed { exit_code, stderr, raw_output: raw.to_string() }
}
