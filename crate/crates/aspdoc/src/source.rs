//! Source views: slicing a block out of its file and linking predicates.

use asp_core::Signature;
use lana::{extract_annotations, AnnotatedProgram, Block, SourceSegment};

use crate::html::{escape, link};

/// Input language of the documented program; only changes how source
/// views are tokenized.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Dialect {
    #[default]
    Gringo,
    Dlv,
}

fn offset_of(text: &str, line: u32, col: u32) -> usize {
    let mut off = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line as usize {
            let within: usize = l.chars().take(col.saturating_sub(1) as usize).map(char::len_utf8).sum();
            return off + within;
        }
        off += l.len();
    }
    text.len()
}

/// The block's text as written: whole lines from the annotation that opens
/// it to the one that closes it. A file's default block is the whole file.
pub(crate) fn block_text<'t>(ap: &'t AnnotatedProgram, b: &Block) -> &'t str {
    let Some(src) = ap.sources.get(b.span.start.file.0 as usize) else { return "" };
    let text = src.text.as_str();
    let start = offset_of(text, b.span.start.pos.line, b.span.start.pos.col);
    let end = offset_of(text, b.span.end.pos.line, b.span.end.pos.col);
    if start == 0 && end == text.len() {
        return text;
    }
    let start = text[..start].rfind("%**").unwrap_or(start);
    let end = text[end..].find("*%").map_or(end, |k| end + k + 2);
    let start = text[..start].rfind('\n').map_or(0, |k| k + 1);
    let end = text[end..].find('\n').map_or(text.len(), |k| end + k + 1);
    &text[start..end]
}

/// Rules only, without annotations or comments.
pub(crate) fn strip_annotations(text: &str) -> String {
    let Ok(segments) = extract_annotations(text) else { return text.to_string() };
    let mut out = String::new();
    let mut blank = false;
    let rules: String = segments.iter().filter(|s| !s.is_annotation()).map(|s| s.content()).collect::<Vec<_>>().join("\n");
    for line in rules.lines() {
        let line = line.trim_end();
        if line.trim().is_empty() {
            blank = !out.is_empty();
            continue;
        }
        if blank {
            out.push('\n');
            blank = false;
        }
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Number of arguments in the parenthesised list starting at `open`.
fn arity_at(text: &str, open: usize) -> usize {
    let mut depth = 0;
    let mut commas = 0;
    let mut quoted = false;
    let mut empty = true;
    for c in text[open..].chars() {
        if quoted {
            quoted = c != '"';
            continue;
        }
        match c {
            '"' => quoted = true,
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            ',' if depth == 1 => commas += 1,
            c if depth >= 1 && !c.is_whitespace() => empty = false,
            _ => {}
        }
    }
    if empty { 0 } else { commas + 1 }
}

/// HTML for rule text, with predicates linked where `href` knows them.
pub(crate) fn link_rules(text: &str, dialect: Dialect, href: &dyn Fn(&Signature) -> Option<String>) -> String {
    let mut out = String::new();
    let mut chars = text.char_indices().peekable();
    let mut prev = ' ';
    while let Some((i, c)) = chars.next() {
        if c == '"' {
            let mut end = text.len();
            let mut escaped = false;
            for (k, d) in text[i + 1..].char_indices() {
                match d {
                    _ if escaped => escaped = false,
                    '\\' => escaped = true,
                    '"' => {
                        end = i + 1 + k + 1;
                        break;
                    }
                    _ => {}
                }
            }
            out.push_str(&escape(&text[i..end]));
            while chars.peek().is_some_and(|&(k, _)| k < end) {
                chars.next();
            }
            prev = '"';
            continue;
        }
        if c.is_lowercase() && !is_word(prev) && prev != '#' {
            let len = text[i..].find(|d: char| !is_word(d)).unwrap_or(text.len() - i);
            let word = &text[i..i + len];
            while chars.peek().is_some_and(|&(k, _)| k < i + len) {
                chars.next();
            }
            prev = word.chars().last().unwrap_or(c);
            let after = text[i + len..].trim_start();
            let open = text.len() - after.len();
            let call = after.starts_with('(');
            let keyword = word == "not" || (dialect == Dialect::Dlv && word == "v" && !call);
            let target = (!keyword).then(|| Signature::new(word, if call { arity_at(text, open) } else { 0 })).and_then(|s| href(&s));
            match target {
                Some(h) => out.push_str(&link(&h, &escape(word))),
                None => out.push_str(&escape(word)),
            }
            continue;
        }
        out.push_str(&escape(&c.to_string()));
        prev = c;
    }
    out
}

/// HTML for a stretch of source that may hold annotations and comments.
pub(crate) fn link_source(text: &str, dialect: Dialect, href: &dyn Fn(&Signature) -> Option<String>) -> String {
    let Ok(segments) = extract_annotations(text) else { return escape(text) };
    let mut out = String::new();
    let mut at = 0;
    let gap = |out: &mut String, from: usize, to: usize| {
        let piece = &text[from..to];
        let body = piece.trim();
        if body.is_empty() {
            out.push_str(piece);
        } else {
            let lead = piece.len() - piece.trim_start().len();
            out.push_str(&piece[..lead]);
            out.push_str(&format!("<span class=\"comment\">{}</span>", escape(body)));
            out.push_str(&piece[lead + body.len()..]);
        }
    };
    for seg in &segments {
        let span = seg.span();
        let (start, end) = match seg {
            SourceSegment::Annotation { .. } => {
                let close = if text[span.end..].starts_with("*%") { span.end + 2 } else { span.end };
                (span.start - 3, close)
            }
            SourceSegment::Rules { .. } => (span.start, span.end),
        };
        gap(&mut out, at, start);
        match seg {
            SourceSegment::Annotation { .. } => {
                out.push_str(&format!("<span class=\"lana\">{}</span>", escape(&text[start..end])));
            }
            SourceSegment::Rules { content, .. } => out.push_str(&link_rules(content, dialect, href)),
        }
        at = end;
    }
    gap(&mut out, at, text.len());
    out
}
