//! Escaping and the page frame.

use std::fmt::Write;

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// Description text with line breaks kept.
pub(crate) fn paragraph(text: &str) -> String {
    let lines: Vec<String> = text.lines().map(escape).collect();
    format!("<p class=\"description\">{}</p>\n", lines.join("<br/>\n"))
}

pub(crate) fn link(href: &str, text: &str) -> String {
    format!("<a href=\"{}\">{text}</a>", escape(href))
}

const STYLE: &str = "body { font-family: sans-serif; margin: 2em; max-width: 60em; }
section.block { margin-left: 1.5em; padding-left: 1em; border-left: 2px solid #ccd; }
nav ul ul { margin-left: 1.5em; }
pre { background: #f4f4f8; padding: 0.5em; overflow-x: auto; }
.lana { color: #36a; }
.comment { color: #777; }
dt { font-family: monospace; margin-top: 0.5em; }
";

pub(crate) fn page(title: &str, body: &str) -> String {
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n");
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = write!(out, "<style>\n{STYLE}</style>\n</head>\n<body>\n");
    out.push_str(body);
    out.push_str("</body>\n</html>\n");
    out
}
