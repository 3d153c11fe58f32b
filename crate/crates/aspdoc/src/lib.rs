//! HTML documentation for annotated answer-set programs.
//!
//! `index.html` summarizes the block tree. Each top-level block gets a page
//! on which nested blocks appear as indented sections, and each block can
//! have a source view. Predicates and terms link to their declarations.

mod html;
mod names;
mod source;

use std::collections::BTreeMap;
use std::fmt::Write;
use std::io;
use std::path::{Path, PathBuf};

use asp_core::{Program, Signature};
use lana::{AnnotatedProgram, Block, ConditionKind, InputKeyword, OutputKeyword, TypeSpec};

use html::{escape, link, page, paragraph};
use names::{block_anchor, block_page, condition_anchor, source_page, term_anchor, SiteIndex};
pub use lana::hidden_atoms;
pub use source::Dialect;

pub const ENTRY: &str = "index.html";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocOptions {
    pub output_dir: PathBuf,
    pub show_hidden_atoms: bool,
    pub include_source: bool,
    /// Keep annotations in source views.
    pub include_lana_in_source: bool,
    pub dialect: Dialect,
}

impl Default for DocOptions {
    fn default() -> Self {
        DocOptions {
            output_dir: PathBuf::from("."),
            show_hidden_atoms: true,
            include_source: true,
            include_lana_in_source: true,
            dialect: Dialect::Gringo,
        }
    }
}

/// Generated pages by relative path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocSite {
    pub pages: BTreeMap<String, String>,
}

impl DocSite {
    pub fn entry(&self) -> &str {
        ENTRY
    }

    /// Writes every page below `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, html) in &self.pages {
            std::fs::write(dir.join(name), html)?;
        }
        Ok(())
    }
}

struct Gen<'a> {
    ap: &'a AnnotatedProgram,
    idx: SiteIndex<'a>,
    opts: &'a DocOptions,
}

pub fn generate_docs(ap: &AnnotatedProgram, opts: &DocOptions) -> DocSite {
    let g = Gen { ap, idx: SiteIndex::new(ap), opts };
    let mut pages = BTreeMap::new();
    pages.insert(ENTRY.to_string(), g.index());
    let mut tops = vec![&ap.root];
    tops.extend(&ap.root.children);
    for (i, b) in tops.iter().enumerate() {
        // the root page holds only the root's own content
        let body = if i == 0 { g.section(b, false) } else { g.section(b, true) };
        let body = format!("<p>{}</p>\n{body}", link(ENTRY, "Program overview"));
        pages.insert(block_page(&b.name), page(&format!("Block {}", b.name), &body));
    }
    if opts.include_source {
        for b in ap.blocks() {
            pages.insert(source_page(&b.name), g.source_view(b));
        }
    }
    DocSite { pages }
}

fn input_label(k: InputKeyword) -> &'static str {
    match k {
        InputKeyword::Input => "Input",
        InputKeyword::Requires => "Requires",
    }
}

fn output_label(k: OutputKeyword) -> &'static str {
    match k {
        OutputKeyword::Output => "Output",
        OutputKeyword::Defines => "Defines",
    }
}

impl Gen<'_> {
    fn index(&self) -> String {
        let mut body = String::new();
        let _ = writeln!(body, "<h1>Documentation of {}</h1>", escape(&self.ap.root.name));
        body.push_str("<nav id=\"summary\">\n<h2>Block Structure</h2>\n");
        self.summary(&mut body, &self.ap.root);
        body.push_str("</nav>\n");
        body.push_str("<h2>Source Files</h2>\n<ul>\n");
        for s in &self.ap.sources {
            let _ = writeln!(body, "<li>{}</li>", escape(&s.name));
        }
        body.push_str("</ul>\n");
        if !self.ap.test_cases.is_empty() {
            body.push_str("<h2>Test Cases</h2>\n<dl>\n");
            for t in &self.ap.test_cases {
                let scope: Vec<String> = t
                    .scope
                    .iter()
                    .map(|s| match self.idx.block_href(s) {
                        Some(h) => link(&h, &escape(s)),
                        None => escape(s),
                    })
                    .collect();
                let _ = writeln!(body, "<dt>{}</dt>\n<dd>", escape(&t.name));
                if !t.description.is_empty() {
                    body.push_str(&paragraph(&t.description));
                }
                let _ = writeln!(body, "<p>Scope: {}</p>", scope.join(", "));
                for c in &t.conditions {
                    let _ = writeln!(body, "<p><code>{}</code></p>", escape(&c.to_string()));
                }
                body.push_str("</dd>\n");
            }
            body.push_str("</dl>\n");
        }
        page(&format!("Documentation of {}", self.ap.root.name), &body)
    }

    fn summary(&self, out: &mut String, b: &Block) {
        out.push_str("<ul>\n<li>");
        self.summary_item(out, b);
        out.push_str("</li>\n</ul>\n");
    }

    fn summary_item(&self, out: &mut String, b: &Block) {
        let href = self.idx.block_href(&b.name).expect("every block has a page");
        out.push_str(&link(&href, &escape(&b.name)));
        if !b.children.is_empty() {
            out.push_str("\n<ul>\n");
            for c in &b.children {
                out.push_str("<li>");
                self.summary_item(out, c);
                out.push_str("</li>\n");
            }
            out.push_str("</ul>\n");
        }
    }

    fn signature_list(&self, b: &Block, sigs: &[Signature]) -> String {
        let items: Vec<String> = sigs
            .iter()
            .map(|s| {
                let text = escape(&s.to_string());
                match self.idx.atom_href(&b.name, s) {
                    Some(h) => format!("<li>{}</li>", link(&h, &text)),
                    None => format!("<li>{text}</li>"),
                }
            })
            .collect();
        format!("<ul class=\"signatures\">\n{}\n</ul>\n", items.join("\n"))
    }

    fn term_link(&self, b: &Block, name: &str) -> String {
        match self.idx.term_href(&b.name, name) {
            Some(h) => link(&h, &escape(name)),
            None => escape(name),
        }
    }

    fn rules_html(&self, b: &Block, text: &str) -> String {
        let href = |s: &Signature| self.idx.atom_href(&b.name, s);
        source::link_rules(text, self.opts.dialect, &href)
    }

    /// A block and, when `nested`, its sub blocks.
    fn section(&self, b: &Block, nested: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "<section class=\"block\" id=\"{}\">", block_anchor(&b.name));
        let _ = writeln!(out, "<h2>Block {}</h2>", escape(&b.name));
        if let Some(p) = self.idx.parent.get(b.name.as_str()) {
            let href = self.idx.block_href(p).expect("parent has a page");
            let _ = writeln!(out, "<p>Sub block of {}</p>", link(&href, &escape(p)));
        }
        if !b.description.is_empty() {
            out.push_str(&paragraph(&b.description));
        }
        if !b.input_sig.is_empty() {
            let _ = writeln!(out, "<h3>{}</h3>", input_label(b.input_keyword));
            out.push_str(&self.signature_list(b, &b.input_sig));
        }
        if !b.output_sig.is_empty() {
            let _ = writeln!(out, "<h3>{}</h3>", output_label(b.output_keyword));
            out.push_str(&self.signature_list(b, &b.output_sig));
        }
        if !b.atom_decls.is_empty() {
            out.push_str("<h3>Predicates</h3>\n<dl>\n");
            for d in &b.atom_decls {
                let args: Vec<String> = d.term_names.iter().map(|t| self.term_link(b, t)).collect();
                let args = if args.is_empty() { String::new() } else { format!("({})", args.join(", ")) };
                let _ = writeln!(out, "<dt id=\"{}\">{}{args}</dt>", self.idx.atom_id(d), escape(&d.predicate));
                let _ = writeln!(out, "<dd>{}</dd>", paragraph(&d.description).trim_end());
            }
            out.push_str("</dl>\n");
        }
        if !b.term_decls.is_empty() {
            out.push_str("<h3>Terms</h3>\n<dl>\n");
            for d in &b.term_decls {
                let names: Vec<String> = d
                    .names
                    .iter()
                    .map(|n| format!("<span id=\"{}\">{}</span>", term_anchor(&b.name, n), escape(n)))
                    .collect();
                let _ = writeln!(out, "<dt>{}</dt>\n<dd>", names.join(", "));
                if !d.description.is_empty() {
                    out.push_str(&paragraph(&d.description));
                }
                match &d.type_spec {
                    None => {}
                    Some(TypeSpec::FromList(terms)) => {
                        let list: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
                        let _ = writeln!(out, "<p>Range: {}</p>", escape(&list.join(", ")));
                    }
                    Some(TypeSpec::WithBody { body, code }) => {
                        let body: Vec<String> = body.iter().map(|e| e.to_string()).collect();
                        let _ = writeln!(out, "<p>Range: values V with <code>{}</code></p>", escape(&body.join(", ")));
                        if !code.is_empty() {
                            let _ = writeln!(out, "<pre>{}</pre>", self.rules_html(b, &code.to_string()));
                        }
                    }
                    Some(TypeSpec::SameRangeAs(other)) => {
                        let _ = writeln!(out, "<p>Range: same as {}</p>", self.term_link(b, other));
                    }
                }
                out.push_str("</dd>\n");
            }
            out.push_str("</dl>\n");
        }
        for (kind, title) in [
            (ConditionKind::Precondition, "Preconditions"),
            (ConditionKind::Postcondition, "Postconditions"),
            (ConditionKind::Assert, "Assertions"),
        ] {
            let conds: Vec<_> = b.conditions.iter().filter(|c| c.kind == kind).collect();
            if conds.is_empty() {
                continue;
            }
            let _ = writeln!(out, "<h3>{title}</h3>\n<ul>");
            for c in &conds {
                let atoms: Vec<String> = c.atoms.iter().map(|a| a.to_string()).collect();
                let _ = write!(
                    out,
                    "<li>{} <code>{} {}</code>",
                    link(&format!("#{}", condition_anchor(&b.name, &c.name)), &escape(&c.name)),
                    c.mode.keyword(),
                    escape(&atoms.join(", "))
                );
                if !c.description.is_empty() {
                    out.push_str(&paragraph(&c.description));
                }
                out.push_str("</li>\n");
            }
            out.push_str("</ul>\n");
        }
        if self.opts.show_hidden_atoms {
            out.push_str("<h3>Hidden Atoms</h3>\n");
            let hidden = hidden_atoms(b);
            if hidden.is_empty() {
                out.push_str("<p>None.</p>\n");
            } else {
                out.push_str(&self.signature_list(b, &hidden));
            }
        }
        let count = b.rules.len();
        let _ = write!(out, "<h3>Rules</h3>\n<p>{count} rule{}", if count == 1 { "" } else { "s" });
        if self.opts.include_source {
            let _ = write!(out, ", {}", link(&source_page(&b.name), "view source"));
        }
        out.push_str("</p>\n");
        for c in &b.conditions {
            let _ = writeln!(out, "<div class=\"listing\" id=\"{}\">", condition_anchor(&b.name, &c.name));
            let kind = match c.kind {
                ConditionKind::Precondition => "Precondition",
                ConditionKind::Postcondition => "Postcondition",
                ConditionKind::Assert => "Assertion",
            };
            let _ = writeln!(out, "<h4>{kind} {}</h4>", escape(&c.name));
            let _ = writeln!(out, "<pre>{}</pre>\n</div>", self.rules_html(b, &program_text(&c.rules)));
        }
        if nested {
            for c in &b.children {
                out.push_str(&self.section(c, true));
            }
        }
        out.push_str("</section>\n");
        out
    }

    fn source_view(&self, b: &Block) -> String {
        let text = source::block_text(self.ap, b);
        let href = |s: &Signature| self.idx.atom_href(&b.name, s);
        let html = if self.opts.include_lana_in_source {
            source::link_source(text, self.opts.dialect, &href)
        } else {
            source::link_rules(&source::strip_annotations(text), self.opts.dialect, &href)
        };
        let back = self.idx.block_href(&b.name).expect("every block has a page");
        let body = format!(
            "<p>{}</p>\n<h1>Source of block {}</h1>\n<pre class=\"source\">{html}</pre>\n",
            link(&back, &format!("Back to {}", escape(&b.name))),
            escape(&b.name)
        );
        page(&format!("Source of {}", b.name), &body)
    }
}

fn program_text(p: &Program) -> String {
    p.to_string()
}
