//! Splitting source text into annotation and rule segments.
//!
//! `%**` opens an annotation. It runs to the next `*%`, unless another `%**`
//! comes first, in which case it is a line annotation ending at the end of
//! its line. `%*...*%` and `%...` are ordinary comments and are dropped.

use asp_core::SourcePos;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TextSpan {
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
    pub start_pos: SourcePos,
    pub end_pos: SourcePos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnotationStyle {
    Environment,
    Line,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceSegment {
    /// Text between the delimiters, untrimmed.
    Annotation { content: String, span: TextSpan, style: AnnotationStyle },
    Rules { content: String, span: TextSpan },
}

impl SourceSegment {
    pub fn content(&self) -> &str {
        match self {
            SourceSegment::Annotation { content, .. } | SourceSegment::Rules { content, .. } => content,
        }
    }

    pub fn span(&self) -> TextSpan {
        match self {
            SourceSegment::Annotation { span, .. } | SourceSegment::Rules { span, .. } => *span,
        }
    }

    pub fn is_annotation(&self) -> bool {
        matches!(self, SourceSegment::Annotation { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("{0}: unterminated annotation")]
    UnterminatedAnnotation(SourcePos),
    #[error("{0}: unterminated block comment")]
    UnterminatedComment(SourcePos),
}

struct Cursor<'a> {
    src: &'a str,
    offset: usize,
    pos: SourcePos,
}

impl Cursor<'_> {
    fn rest(&self) -> &str {
        &self.src[self.offset..]
    }

    fn advance_to(&mut self, target: usize) {
        for c in self.src[self.offset..target].chars() {
            if c == '\n' {
                self.pos.line += 1;
                self.pos.col = 1;
            } else {
                self.pos.col += 1;
            }
        }
        self.offset = target;
    }

    fn span_from(&self, start: usize, start_pos: SourcePos) -> TextSpan {
        TextSpan { start, end: self.offset, start_pos, end_pos: self.pos }
    }
}

pub fn extract_annotations(source: &str) -> Result<Vec<SourceSegment>, ExtractError> {
    let mut cur = Cursor { src: source, offset: 0, pos: SourcePos::new(1, 1) };
    let mut out = Vec::new();
    let mut rules_start = (0, cur.pos);

    let flush = |out: &mut Vec<SourceSegment>, start: (usize, SourcePos), cur: &Cursor| {
        let content = &source[start.0..cur.offset];
        if !content.trim().is_empty() {
            out.push(SourceSegment::Rules { content: content.to_string(), span: cur.span_from(start.0, start.1) });
        }
    };

    while cur.offset < source.len() {
        let rest = cur.rest();
        let c = rest.chars().next().expect("non-empty");
        if c == '"' {
            // skip string literal so `%` inside it is not a comment
            let mut end = cur.offset + 1;
            let bytes = source.as_bytes();
            while end < source.len() && bytes[end] != b'"' && bytes[end] != b'\n' {
                end += if bytes[end] == b'\\' { 2 } else { 1 };
            }
            cur.advance_to((end + 1).min(source.len()));
            continue;
        }
        if c != '%' {
            cur.advance_to(cur.offset + c.len_utf8());
            continue;
        }
        flush(&mut out, rules_start, &cur);
        let open_pos = cur.pos;
        if rest.starts_with("%**") {
            let content_start = cur.offset + 3;
            let after = &source[content_start..];
            let close = after.find("*%").ok_or(ExtractError::UnterminatedAnnotation(open_pos))?;
            let next_open = after.find("%**");
            cur.advance_to(content_start);
            let content_pos = cur.pos;
            if next_open.is_some_and(|n| n < close) {
                let eol = after.find('\n').unwrap_or(after.len());
                cur.advance_to(content_start + eol);
                out.push(SourceSegment::Annotation {
                    content: source[content_start..cur.offset].to_string(),
                    span: cur.span_from(content_start, content_pos),
                    style: AnnotationStyle::Line,
                });
            } else {
                cur.advance_to(content_start + close);
                out.push(SourceSegment::Annotation {
                    content: source[content_start..cur.offset].to_string(),
                    span: cur.span_from(content_start, content_pos),
                    style: AnnotationStyle::Environment,
                });
                cur.advance_to(cur.offset + 2);
            }
        } else if let Some(body) = rest.strip_prefix("%*") {
            let close = body.find("*%").ok_or(ExtractError::UnterminatedComment(open_pos))?;
            cur.advance_to(cur.offset + 2 + close + 2);
        } else {
            let eol = rest.find('\n').unwrap_or(rest.len());
            cur.advance_to(cur.offset + eol);
        }
        rules_start = (cur.offset, cur.pos);
    }
    flush(&mut out, rules_start, &cur);
    Ok(out)
}

/// Rebuilds source text from segments, keeping every segment at its
/// original line and column. Dropped comments become whitespace.
pub fn render_segments(segments: &[SourceSegment]) -> String {
    let mut out = String::new();
    let mut at = SourcePos::new(1, 1);
    let pad_to = |out: &mut String, at: &mut SourcePos, target: SourcePos| {
        while at.line < target.line {
            out.push('\n');
            at.line += 1;
            at.col = 1;
        }
        while at.col < target.col {
            out.push(' ');
            at.col += 1;
        }
    };
    for seg in segments {
        let span = seg.span();
        match seg {
            SourceSegment::Annotation { style, .. } => {
                let open = SourcePos::new(span.start_pos.line, span.start_pos.col - 3);
                pad_to(&mut out, &mut at, open);
                out.push_str("%**");
                out.push_str(seg.content());
                if *style == AnnotationStyle::Environment {
                    out.push_str("*%");
                }
            }
            SourceSegment::Rules { content, .. } => {
                pad_to(&mut out, &mut at, span.start_pos);
                out.push_str(content);
            }
        }
        at = match seg {
            SourceSegment::Annotation { style: AnnotationStyle::Environment, .. } => {
                SourcePos::new(span.end_pos.line, span.end_pos.col + 2)
            }
            _ => span.end_pos,
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shapes(src: &str) -> Vec<(bool, String)> {
        extract_annotations(src)
            .unwrap()
            .iter()
            .map(|s| (s.is_annotation(), s.content().trim().to_string()))
            .collect()
    }

    #[test]
    fn block_environment() {
        assert_eq!(
            shapes("%** @block B { *%\np.\n%** } *%"),
            vec![(true, "@block B {".into()), (false, "p.".into()), (true, "}".into())]
        );
    }

    #[test]
    fn ordinary_comments_are_dropped() {
        assert_eq!(shapes("% plain comment\np."), vec![(false, "p.".into())]);
        assert_eq!(shapes("a. %* block\n comment *% b."), vec![(false, "a.".into()), (false, "b.".into())]);
    }

    #[test]
    fn unterminated() {
        assert_eq!(
            extract_annotations("p.\n%** @atom w(X) there is water"),
            Err(ExtractError::UnterminatedAnnotation(SourcePos::new(2, 1)))
        );
        assert!(matches!(extract_annotations("%* open"), Err(ExtractError::UnterminatedComment(_))));
    }

    #[test]
    fn line_annotation_before_environment() {
        let segs = extract_annotations("%** @block A {\n%** @block B {\nq.\n*%").unwrap();
        assert_eq!(segs.len(), 2);
        assert!(matches!(segs[0], SourceSegment::Annotation { style: AnnotationStyle::Line, .. }));
        assert_eq!(segs[0].content(), " @block A {");
        assert!(matches!(segs[1], SourceSegment::Annotation { style: AnnotationStyle::Environment, .. }));
    }

    #[test]
    fn percent_in_string_is_not_a_comment() {
        assert_eq!(shapes("p(\"50%\")."), vec![(false, "p(\"50%\").".into())]);
    }

    #[test]
    fn positions() {
        let segs = extract_annotations("a.\n  %** @atom p *%\n b.").unwrap();
        assert_eq!(segs[1].span().start_pos, SourcePos::new(2, 6));
        assert_eq!(segs[2].span().start_pos, SourcePos::new(2, 17));
    }

    #[test]
    fn render_keeps_positions() {
        let src = "a. % c\n  %** @atom p\n more *%  b :- %* x *% c.\n%** line\n%** @block X { *%";
        let segs = extract_annotations(src).unwrap();
        let again = extract_annotations(&render_segments(&segs)).unwrap();
        // dropped comments turn into whitespace, which may merge rule segments
        let notes = |v: &[SourceSegment]| -> Vec<(String, SourcePos)> {
            v.iter().filter(|s| s.is_annotation()).map(|s| (s.content().to_string(), s.span().start_pos)).collect()
        };
        let rules = |v: &[SourceSegment]| -> String {
            v.iter().filter(|s| !s.is_annotation()).flat_map(|s| s.content().split_whitespace()).collect()
        };
        assert_eq!(notes(&segs), notes(&again));
        assert_eq!(rules(&segs), rules(&again));
    }
}
