//! Page names, anchors and the index that resolves declarations to them.

use std::collections::{HashMap, HashSet};

use asp_core::Signature;
use lana::{effective_declarations, lookup_term, AnnotatedProgram, AtomDecl, Block, Location};

/// Name usable in file names and fragment identifiers. Letters, digits,
/// `_` and `-` are kept; anything else becomes `~` and its hex code, so
/// distinct names stay distinct.
pub(crate) fn slug(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
            out.push(c);
        } else {
            out.push_str(&format!("~{:x}", c as u32));
        }
    }
    out
}

pub(crate) fn block_page(name: &str) -> String {
    format!("block-{}.html", slug(name))
}

pub(crate) fn source_page(name: &str) -> String {
    format!("source-{}.html", slug(name))
}

pub(crate) fn block_anchor(name: &str) -> String {
    format!("blk-{}", slug(name))
}

pub(crate) fn term_anchor(block: &str, term: &str) -> String {
    format!("term-{}-{}", slug(block), slug(term))
}

pub(crate) fn condition_anchor(block: &str, cond: &str) -> String {
    format!("cond-{}-{}", slug(block), slug(cond))
}

/// Where every block, atom declaration and term lives in the site.
pub(crate) struct SiteIndex<'a> {
    /// Block name to the page it is rendered on.
    pub owner: HashMap<&'a str, String>,
    pub parent: HashMap<&'a str, &'a str>,
    /// Atom declaration location to its anchor id and declaring block.
    atoms: HashMap<Location, (String, &'a str)>,
    /// Effective declarations seen from each block.
    scope: HashMap<&'a str, (Vec<AtomDecl>, Vec<lana::TermDecl>)>,
    /// Term declaration location to the block declaring it.
    term_block: HashMap<Location, &'a str>,
}

impl<'a> SiteIndex<'a> {
    pub fn new(ap: &'a AnnotatedProgram) -> Self {
        let mut idx = SiteIndex {
            owner: HashMap::new(),
            parent: HashMap::new(),
            atoms: HashMap::new(),
            scope: HashMap::new(),
            term_block: HashMap::new(),
        };
        let root = &ap.root;
        idx.owner.insert(&root.name, block_page(&root.name));
        for top in &root.children {
            let page = block_page(&top.name);
            for b in top.walk() {
                idx.owner.insert(&b.name, page.clone());
            }
        }
        let mut used: HashMap<String, HashSet<String>> = HashMap::new();
        let mut path = Vec::new();
        idx.visit(root, &mut path, &mut used);
        idx
    }

    fn visit(&mut self, b: &'a Block, path: &mut Vec<&'a Block>, used: &mut HashMap<String, HashSet<String>>) {
        path.push(b);
        if let Some(p) = path.len().checked_sub(2).map(|i| path[i]) {
            self.parent.insert(&b.name, &p.name);
        }
        let page = self.owner[b.name.as_str()].clone();
        let ids = used.entry(page).or_default();
        for d in &b.atom_decls {
            let plain = format!("atom-{}-{}", slug(&d.predicate), d.term_names.len());
            // a nested block may declare the same predicate on the same page
            let id = if ids.contains(&plain) { format!("{plain}-{}", slug(&b.name)) } else { plain };
            ids.insert(id.clone());
            self.atoms.insert(d.location, (id, &b.name));
        }
        for d in &b.term_decls {
            self.term_block.insert(d.location, &b.name);
        }
        self.scope.insert(&b.name, effective_declarations(path));
        for c in &b.children {
            self.visit(c, path, used);
        }
        path.pop();
    }

    fn page_of(&self, block: &str) -> &str {
        &self.owner[block]
    }

    pub fn block_href(&self, name: &str) -> Option<String> {
        self.owner.get(name).map(|p| format!("{p}#{}", block_anchor(name)))
    }

    /// Anchor id of an atom declaration.
    pub fn atom_id(&self, decl: &AtomDecl) -> &str {
        &self.atoms[&decl.location].0
    }

    /// The declaration of `sig` effective in `block`.
    pub fn atom_decl(&self, block: &str, sig: &Signature) -> Option<&AtomDecl> {
        self.scope.get(block)?.0.iter().find(|d| d.signature() == *sig)
    }

    pub fn atom_href(&self, block: &str, sig: &Signature) -> Option<String> {
        let decl = self.atom_decl(block, sig)?;
        let (id, declaring) = &self.atoms[&decl.location];
        Some(format!("{}#{id}", self.page_of(declaring)))
    }

    pub fn term_href(&self, block: &str, term: &str) -> Option<String> {
        let decl = lookup_term(&self.scope.get(block)?.1, term)?;
        let declaring = self.term_block.get(&decl.location)?;
        Some(format!("{}#{}", self.page_of(declaring), term_anchor(declaring, term)))
    }
}
