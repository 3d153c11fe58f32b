//! Flag parsing in the single-dash style of the original tools: `-CE`,
//! `-ha`, `-o=path`. Paired flags may each be given once; giving both
//! halves of a pair is an error.

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// An on/off pair. Each side lists its spellings.
#[derive(Debug, Clone, Copy)]
pub struct Pair {
    pub key: &'static str,
    pub on: &'static [&'static str],
    pub off: &'static [&'static str],
}

/// A flag taking a value, as `-o=path` or `--input path`.
#[derive(Debug, Clone, Copy)]
pub struct Valued {
    pub key: &'static str,
    pub spellings: &'static [&'static str],
}

#[derive(Debug, Default)]
pub struct Parsed {
    pairs: HashMap<&'static str, (bool, String)>,
    values: HashMap<&'static str, String>,
    pub positional: Vec<String>,
}

impl Parsed {
    pub fn flag(&self, key: &str) -> Option<bool> {
        self.pairs.get(key).map(|(v, _)| *v)
    }

    pub fn value(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

pub fn wants_help(args: &[String]) -> bool {
    args.iter().any(|a| matches!(a.as_str(), "-h" | "-help" | "--help"))
}

pub fn parse(args: &[String], pairs: &[Pair], valued: &[Valued]) -> Result<Parsed, UsageError> {
    let mut out = Parsed::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        if !arg.starts_with('-') || arg == "-" {
            out.positional.push(arg.clone());
            continue;
        }
        if let Some(p) = pairs.iter().find(|p| p.on.contains(&arg.as_str()) || p.off.contains(&arg.as_str())) {
            let on = p.on.contains(&arg.as_str());
            match out.pairs.get(p.key) {
                Some((prev, spelled)) if *prev != on => {
                    return Err(UsageError(format!("{spelled} and {arg} contradict each other")))
                }
                Some(_) => return Err(UsageError(format!("{arg} given twice"))),
                None => {}
            }
            out.pairs.insert(p.key, (on, arg.clone()));
            continue;
        }
        let mut matched = false;
        for v in valued {
            for s in v.spellings {
                let value = if arg == s {
                    Some(it.next().cloned().ok_or_else(|| UsageError(format!("{arg} needs a value")))?)
                } else {
                    arg.strip_prefix(s).and_then(|r| r.strip_prefix('=')).map(str::to_string)
                };
                if let Some(value) = value {
                    if out.values.insert(v.key, value).is_some() {
                        return Err(UsageError(format!("{s} given twice")));
                    }
                    matched = true;
                    break;
                }
            }
            if matched {
                break;
            }
        }
        if !matched {
            return Err(UsageError(format!("unknown option {arg}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAIRS: &[Pair] = &[Pair { key: "ce", on: &["-CE"], off: &["-ce"] }];
    const VALUED: &[Valued] = &[Valued { key: "out", spellings: &["-o"] }];

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn pairs_values_and_positionals() {
        let p = parse(&args("-CE a.lp -o=site b.lp"), PAIRS, VALUED).unwrap();
        assert_eq!(p.flag("ce"), Some(true));
        assert_eq!(p.value("out"), Some("site"));
        assert_eq!(p.positional, args("a.lp b.lp"));
        assert_eq!(parse(&args("x"), PAIRS, VALUED).unwrap().flag("ce"), None);
    }

    #[test]
    fn contradictions_and_unknowns() {
        assert!(parse(&args("-CE -ce"), PAIRS, VALUED).is_err());
        assert!(parse(&args("-CE -CE"), PAIRS, VALUED).is_err());
        assert!(parse(&args("-x"), PAIRS, VALUED).is_err());
        // the value needs `=`
        assert!(parse(&args("-opath"), PAIRS, VALUED).is_err());
        assert_eq!(parse(&args("-o out"), PAIRS, VALUED).unwrap().value("out"), Some("out"));
    }
}
