//! Test-suite specification files.
//!
//! ```text
//! @testsuite name
//!  description
//! @program    a.lp b.lp
//! @programdir dir
//! @test       t1.lp
//! @testdir    dir
//! @solvertype clingo
//! @solver     /usr/bin/clingo --opt
//! @grounder   /usr/bin/gringo
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::LanaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverType {
    Dlv,
    Clasp,
    Clingo,
    Internal,
}

impl FromStr for SolverType {
    type Err = LanaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dlv" => Ok(SolverType::Dlv),
            "clasp" => Ok(SolverType::Clasp),
            "clingo" => Ok(SolverType::Clingo),
            "internal" => Ok(SolverType::Internal),
            _ => Err(LanaError::UnknownSolverType(s.to_string())),
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

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub name: String,
    pub description: String,
    pub program_files: Vec<PathBuf>,
    pub program_dir: PathBuf,
    pub test_files: Vec<PathBuf>,
    pub test_dir: PathBuf,
    pub solver_type: SolverType,
    pub solver_cmd: Option<String>,
    pub grounder_cmd: Option<String>,
}

impl SuiteConfig {
    pub fn program_paths(&self) -> Vec<PathBuf> {
        self.program_files.iter().map(|f| self.program_dir.join(f)).collect()
    }

    pub fn test_paths(&self) -> Vec<PathBuf> {
        self.test_files.iter().map(|f| self.test_dir.join(f)).collect()
    }
}

/// Parses a suite file. `path` is where the file lives: it supplies the
/// default name and the directory relative paths are resolved against.
pub fn parse_testsuite(text: &str, path: &Path) -> Result<SuiteConfig, LanaError> {
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("testsuite").to_string();

    let mut name = None;
    let mut description: Vec<&str> = Vec::new();
    let mut programs = Vec::new();
    let mut program_dir = None;
    let mut tests = Vec::new();
    let mut test_dir = None;
    let mut solver_type = None;
    let mut solver_cmd = None;
    let mut grounder_cmd = None;
    let mut last = "";

    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let Some(rest) = trimmed.strip_prefix('@') else {
            match last {
                "testsuite" => description.push(trimmed),
                "program" => programs.extend(trimmed.split_whitespace().map(PathBuf::from)),
                "test" => tests.extend(trimmed.split_whitespace().map(PathBuf::from)),
                _ => {}
            }
            continue;
        };
        let (kw, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let value = value.trim();
        last = kw;
        match kw {
            "testsuite" => name = Some(value).filter(|v| !v.is_empty()).map(str::to_string),
            "program" => programs.extend(value.split_whitespace().map(PathBuf::from)),
            "programdir" => program_dir = Some(PathBuf::from(value)),
            "test" => tests.extend(value.split_whitespace().map(PathBuf::from)),
            "testdir" => test_dir = Some(PathBuf::from(value)),
            "solvertype" => solver_type = Some(value.parse::<SolverType>()?),
            "solver" => solver_cmd = Some(value.to_string()).filter(|v| !v.is_empty()),
            "grounder" => grounder_cmd = Some(value.to_string()).filter(|v| !v.is_empty()),
            _ => last = "",
        }
    }

    if programs.is_empty() {
        return Err(LanaError::MissingField("@program"));
    }
    if tests.is_empty() {
        return Err(LanaError::MissingField("@test"));
    }
    let solver_type = solver_type.ok_or(LanaError::MissingField("@solvertype"))?;
    match solver_type {
        SolverType::Clasp if grounder_cmd.is_none() => return Err(LanaError::GrounderRequired),
        SolverType::Internal => {
            solver_cmd = None;
            grounder_cmd = None;
        }
        _ => {}
    }
    let resolve = |dir: Option<PathBuf>| match dir {
        Some(d) if d.is_absolute() => d,
        Some(d) => base.join(d),
        None => base.clone(),
    };
    Ok(SuiteConfig {
        name: name.unwrap_or(stem),
        description: description.join("\n"),
        program_files: programs,
        program_dir: resolve(program_dir),
        test_files: tests,
        test_dir: resolve(test_dir),
        solver_type,
        solver_cmd,
        grounder_cmd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SKELETON: &str = "@testsuite battleship
 unit tests for the guessing part
@program    battleship.lp
@programdir src
@test       top_left.test
@test       diagonal.test
@testdir    tests
@solvertype clingo
@solver     /usr/bin/clingo --verbose=0
";

    #[test]
    fn skeleton() {
        let s = parse_testsuite(SKELETON, Path::new("/suites/main")).unwrap();
        assert_eq!(s.name, "battleship");
        assert_eq!(s.description, "unit tests for the guessing part");
        assert_eq!(s.test_files.len(), 2);
        assert_eq!(s.program_paths(), vec![PathBuf::from("/suites/src/battleship.lp")]);
        assert_eq!(s.test_paths()[1], PathBuf::from("/suites/tests/diagonal.test"));
        assert_eq!(s.solver_type, SolverType::Clingo);
        assert_eq!(s.solver_cmd.as_deref(), Some("/usr/bin/clingo --verbose=0"));
    }

    #[test]
    fn clasp_needs_grounder() {
        let text = "@testsuite s\n@program p.lp\n@test t\n@solvertype clasp\n@solver /bin/clasp\n";
        assert_eq!(parse_testsuite(text, Path::new("s")), Err(LanaError::GrounderRequired));
        let ok = format!("{text}@grounder /bin/gringo\n");
        assert!(parse_testsuite(&ok, Path::new("s")).is_ok());
    }

    #[test]
    fn name_defaults_to_file_name() {
        let text = "@program p.lp\n@test t.lp\n@solvertype internal\n";
        let s = parse_testsuite(text, Path::new("dir/suite1")).unwrap();
        assert_eq!(s.name, "suite1");
        assert_eq!(s.program_dir, PathBuf::from("dir"));
    }

    #[test]
    fn missing_fields_and_unknown_solver() {
        assert_eq!(
            parse_testsuite("@program p\n@solvertype clingo", Path::new("s")),
            Err(LanaError::MissingField("@test"))
        );
        assert_eq!(parse_testsuite("@test t\n@solvertype dlv", Path::new("s")), Err(LanaError::MissingField("@program")));
        assert_eq!(parse_testsuite("@program p\n@test t", Path::new("s")), Err(LanaError::MissingField("@solvertype")));
        assert!(matches!(
            parse_testsuite("@program p\n@test t\n@solvertype smodels", Path::new("s")),
            Err(LanaError::UnknownSolverType(_))
        ));
    }

    #[test]
    fn solver_type_names_are_case_insensitive() {
        assert_eq!("DLV".parse::<SolverType>().unwrap(), SolverType::Dlv);
        assert_eq!("Clingo".parse::<SolverType>().unwrap(), SolverType::Clingo);
    }
}
