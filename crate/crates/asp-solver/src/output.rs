//! Reading answer sets from solver output, and writing them back in the
//! same formats.

use asp_core::{AnswerSet, GroundAtom};

use crate::SolverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// clingo and clasp: `Answer: k` followed by a line of atoms.
    Clingo,
    /// DLV: one `{a, b, c}` line per model.
    Dlv,
}

fn parse_atom(text: &str, line: &str) -> Result<GroundAtom, SolverError> {
    GroundAtom::parse(text).map_err(|_| SolverError::OutputParseError { line: line.to_string() })
}

/// Splits `text` at `sep` characters that are outside parentheses and quotes.
fn split_top_level(text: &str, sep: impl Fn(char) -> bool) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut quoted = false;
    let mut escaped = false;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if quoted {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => quoted = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => quoted = true,
            '(' => depth += 1,
            ')' => depth -= 1,
            c if depth == 0 && sep(c) => {
                out.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out.into_iter().map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn is_answer_header(line: &str) -> bool {
    line.strip_prefix("Answer:").is_some_and(|n| n.trim().parse::<u64>().is_ok())
}

pub fn parse_solver_output(text: &str, dialect: Dialect) -> Result<Vec<AnswerSet>, SolverError> {
    let mut models = Vec::new();
    match dialect {
        Dialect::Clingo => {
            let mut lines = text.lines();
            while let Some(line) = lines.next() {
                if !is_answer_header(line.trim()) {
                    continue;
                }
                let atoms = lines.next().ok_or_else(|| SolverError::OutputParseError { line: line.to_string() })?;
                let parsed = split_top_level(atoms, char::is_whitespace)
                    .into_iter()
                    .map(|a| parse_atom(a, atoms))
                    .collect::<Result<Vec<_>, _>>()?;
                models.push(AnswerSet::new(parsed));
            }
        }
        Dialect::Dlv => {
            for line in text.lines() {
                let trimmed = line.trim();
                let trimmed = trimmed.strip_prefix("Best model:").map(str::trim).unwrap_or(trimmed);
                if !trimmed.starts_with('{') {
                    continue;
                }
                let inner = trimmed
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| SolverError::OutputParseError { line: line.to_string() })?;
                let parsed = split_top_level(inner, |c| c == ',')
                    .into_iter()
                    .map(|a| parse_atom(a, line))
                    .collect::<Result<Vec<_>, _>>()?;
                models.push(AnswerSet::new(parsed));
            }
        }
    }
    Ok(models)
}

/// Writes models the way the given solver family prints them.
pub fn render_models(models: &[AnswerSet], dialect: Dialect) -> String {
    let mut out = String::new();
    match dialect {
        Dialect::Clingo => {
            for (i, m) in models.iter().enumerate() {
                let atoms: Vec<String> = m.iter().map(|a| a.to_string()).collect();
                out.push_str(&format!("Answer: {}\n{}\n", i + 1, atoms.join(" ")));
            }
            out.push_str(if models.is_empty() { "UNSATISFIABLE\n" } else { "SATISFIABLE\n" });
        }
        Dialect::Dlv => {
            for m in models {
                out.push_str(&format!("{m}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(atoms: &[&str]) -> AnswerSet {
        AnswerSet::new(atoms.iter().map(|a| GroundAtom::parse(a).unwrap()))
    }

    #[test]
    fn clingo_models() {
        let out = parse_solver_output("clingo version 5\nReading from stdin\nAnswer: 1\na b\nSATISFIABLE\n", Dialect::Clingo);
        assert_eq!(out.unwrap(), vec![set(&["a", "b"])]);
        assert_eq!(parse_solver_output("UNSATISFIABLE", Dialect::Clingo).unwrap(), vec![]);
    }

    #[test]
    fn clingo_empty_model() {
        let out = parse_solver_output("Answer: 1\n\nSATISFIABLE", Dialect::Clingo).unwrap();
        assert_eq!(out, vec![AnswerSet::default()]);
    }

    #[test]
    fn dlv_models() {
        let out = parse_solver_output("DLV [build BEN]\n\n{a, b}\n{a}\n{}", Dialect::Dlv).unwrap();
        assert_eq!(out, vec![set(&["a", "b"]), set(&["a"]), AnswerSet::default()]);
    }

    #[test]
    fn spacing_and_quotes_normalize() {
        let clingo = parse_solver_output("Answer: 1\nship(1,1,1,2) c(\"x\")", Dialect::Clingo).unwrap();
        let dlv = parse_solver_output("{ship(1, 1, 1, 2), c(x)}", Dialect::Dlv).unwrap();
        assert_eq!(clingo, dlv);
    }

    #[test]
    fn strings_with_separators() {
        let out = parse_solver_output("Answer: 1\nname(\"a b\") q", Dialect::Clingo).unwrap();
        assert_eq!(out[0].len(), 2);
        let out = parse_solver_output("{name(\"a, b\"), q}", Dialect::Dlv).unwrap();
        assert_eq!(out[0].len(), 2);
    }

    #[test]
    fn bad_lines() {
        assert_eq!(
            parse_solver_output("Answer: 1\np(", Dialect::Clingo),
            Err(SolverError::OutputParseError { line: "p(".into() })
        );
        assert!(matches!(parse_solver_output("{a, b", Dialect::Dlv), Err(SolverError::OutputParseError { .. })));
        assert!(matches!(parse_solver_output("Answer: 1", Dialect::Clingo), Err(SolverError::OutputParseError { .. })));
    }
}
