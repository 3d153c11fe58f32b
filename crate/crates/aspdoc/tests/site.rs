mod common;

use std::collections::BTreeSet;
use std::path::Path;

use aspdoc::{generate_docs, hidden_atoms, Dialect, DocOptions, DocSite};
use common::{dangling_links, summary, well_formed};

fn fixture() -> lana::AnnotatedProgram {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/battleship.lp");
    let text = std::fs::read_to_string(path).unwrap();
    lana::parse_source("battleship.lp", &text).unwrap().0
}

#[test]
fn links_resolve() {
    let ap = fixture();
    for show in [true, false] {
        for src in [true, false] {
            for lana in [true, false] {
                let opts = DocOptions {
                    show_hidden_atoms: show,
                    include_source: src,
                    include_lana_in_source: lana,
                    ..DocOptions::default()
                };
                let site = generate_docs(&ap, &opts);
                assert!(site.pages.contains_key(site.entry()));
                assert_eq!(dangling_links(&site), Vec::<String>::new());
            }
        }
    }
}

#[test]
fn pages_are_well_formed() {
    let site = generate_docs(&fixture(), &DocOptions::default());
    for (name, html) in &site.pages {
        if let Err(e) = well_formed(html) {
            panic!("{name}: {e}");
        }
    }
}

#[test]
fn checker_rejects_broken_html() {
    let wrap = |b: &str| format!("<!DOCTYPE html>\n<html><body>{b}</body></html>");
    assert!(well_formed(&wrap("<p>ok &amp; fine<br/></p>")).is_ok());
    assert!(well_formed(&wrap("<p><b>x</p></b>")).is_err());
    assert!(well_formed(&wrap("a & b")).is_err());
    assert!(well_formed(&wrap("<p>")).is_err());
    assert!(well_formed(&wrap("<a href=x>y</a>")).is_err());
    assert!(well_formed(&wrap("<i id=\"a\"></i><i id=\"a\"></i>")).is_err());
}

#[test]
fn deterministic() {
    let ap = fixture();
    let a = generate_docs(&ap, &DocOptions::default());
    let b = generate_docs(&fixture(), &DocOptions::default());
    assert_eq!(a, b);
}

#[test]
fn summary_lists_each_block_once() {
    let ap = fixture();
    let site = generate_docs(&ap, &DocOptions::default());
    let nav = summary(&site.pages["index.html"]);
    for b in ap.blocks() {
        let text = format!(">{}</a>", b.name);
        assert_eq!(nav.matches(&text).count(), 1, "{}", b.name);
    }
    // Guess is nested under Battleship
    let battleship = nav.find(">Battleship</a>").unwrap();
    let guess = nav.find(">Guess</a>").unwrap();
    assert!(battleship < guess);
    assert!(nav[battleship..guess].contains("<ul>"));
}

#[test]
fn hidden_atoms_heading_follows_option() {
    let ap = fixture();
    let on = generate_docs(&ap, &DocOptions::default());
    assert!(on.pages.values().any(|h| h.contains("Hidden Atoms")));
    let off = generate_docs(&ap, &DocOptions { show_hidden_atoms: false, ..DocOptions::default() });
    assert!(off.pages.values().all(|h| !h.contains("Hidden Atoms")));
}

#[test]
fn source_pages_are_optional() {
    let ap = fixture();
    let with: BTreeSet<_> = generate_docs(&ap, &DocOptions::default()).pages.into_keys().collect();
    let without: BTreeSet<_> =
        generate_docs(&ap, &DocOptions { include_source: false, ..DocOptions::default() }).pages.into_keys().collect();
    assert!(without.is_subset(&with));
    assert!(with.iter().any(|p| p.starts_with("source-")));
    assert!(without.iter().all(|p| !p.starts_with("source-")));
}

#[test]
fn annotations_in_source_view_follow_option() {
    let ap = fixture();
    let site = generate_docs(&ap, &DocOptions::default());
    let page = &site.pages["source-Guess.html"];
    assert!(page.contains("@block Guess"));
    assert!(page.contains("r(1..10)"));
    let plain = generate_docs(&ap, &DocOptions { include_lana_in_source: false, ..DocOptions::default() });
    let page = &plain.pages["source-Guess.html"];
    assert!(!page.contains("@block"));
    assert!(page.contains("r(1..10)"));
}

#[test]
fn ship4_links_to_its_description() {
    let site = generate_docs(&fixture(), &DocOptions::default());
    let page = &site.pages["block-Battleship.html"];
    assert!(page.contains("<a href=\"block-Battleship.html#atom-ship-4\">ship/4</a>"));
    assert!(page.contains("id=\"atom-ship-4\""));
    assert!(page.contains("a ship is occupying the squares from (X1,Y1) to (X2,Y2)"));
    // the source of Guess links ship/4 as well
    assert!(site.pages["source-Guess.html"].contains("<a href=\"block-Battleship.html#atom-ship-4\">ship</a>"));
    // and the term X1 of ship/4 links to its @term description
    assert!(page.contains("<a href=\"block-Battleship.html#term-Battleship-X1\">X1</a>"));
}

#[test]
fn signature_labels_follow_keywords() {
    let site = generate_docs(&fixture(), &DocOptions::default());
    let page = &site.pages["block-Battleship.html"];
    assert!(page.contains("<h3>Input</h3>") && page.contains("<h3>Output</h3>"));
    let src = "%** @block B {\n @atom p(X) p\n @atom q(X) q\n @requires p/1\n @defines q/1 *%\nq(X) :- p(X).\n%** } *%\n";
    let ap = lana::parse_source("b.lp", src).unwrap().0;
    let page = &generate_docs(&ap, &DocOptions::default()).pages["block-B.html"];
    assert!(page.contains("<h3>Requires</h3>") && page.contains("<h3>Defines</h3>"));
}

#[test]
fn conditions_link_to_listings() {
    let site = generate_docs(&fixture(), &DocOptions::default());
    let page = &site.pages["block-Battleship.html"];
    assert!(page.contains("<h3>Preconditions</h3>") && page.contains("<h3>Postconditions</h3>"));
    assert!(page.contains("href=\"#cond-Battleship-Excl\""));
    let listing = &page[page.find("id=\"cond-Battleship-Overlength\"").unwrap()..];
    assert!(listing.contains("ov :- "));
}

#[test]
fn unannotated_program_has_a_default_block() {
    let ap = lana::parse_source("plain.lp", "a. b :- a, not c.\nc :- not b.\n").unwrap().0;
    let site = generate_docs(&ap, &DocOptions::default());
    let page = &site.pages["block-plain~2elp.html"];
    assert!(page.contains("3 rules"));
    let src = &site.pages["source-plain~2elp.html"];
    assert!(src.contains("b :- a, not c."));
    assert_eq!(dangling_links(&site), Vec::<String>::new());
    assert!(summary(&site.pages["index.html"]).contains(">plain.lp</a>"));
}

#[test]
fn hidden_atoms_of_a_block() {
    let mut src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/battleship.lp")).unwrap();
    src = src.replacen("%**\n @block Guess", "occupied(X,Y) :- ship(X,Y).\n%**\n @block Guess", 1);
    let ap = lana::parse_source("battleship.lp", &src).unwrap().0;
    let names = |b: &str| -> Vec<String> { hidden_atoms(ap.find_block(b).unwrap()).iter().map(|s| s.to_string()).collect() };
    assert_eq!(names("Battleship"), vec!["occupied/2"]);
    assert_eq!(names("Guess"), Vec::<String>::new());
    let page = &generate_docs(&ap, &DocOptions::default()).pages["block-Battleship.html"];
    assert!(page.contains("occupied/2"));
}

#[test]
fn dlv_dialect_only_changes_tokenizing() {
    let src = "%** @block B {\n @atom v a v\n @atom p(X) a p *%\np(1) :- v.\nv.\n%** } *%\n";
    let ap = lana::parse_source("b.lp", src).unwrap().0;
    let g = generate_docs(&ap, &DocOptions::default());
    let d = generate_docs(&ap, &DocOptions { dialect: Dialect::Dlv, ..DocOptions::default() });
    let keys = |s: &DocSite| s.pages.keys().cloned().collect::<Vec<_>>();
    assert_eq!(keys(&g), keys(&d));
    assert_eq!(g.pages["block-B.html"], d.pages["block-B.html"]);
    assert_eq!(dangling_links(&d), Vec::<String>::new());
    // a bare `v` is the disjunction keyword for DLV
    let link = "<a href=\"block-B.html#atom-v-0\">v</a>";
    assert!(g.pages["source-B.html"].contains(link));
    assert!(!d.pages["source-B.html"].contains(link));
}

#[test]
fn write_to_creates_files() {
    let dir = std::env::temp_dir().join(format!("aspdoc-site-{}", std::process::id()));
    let site = generate_docs(&fixture(), &DocOptions::default());
    site.write_to(&dir).unwrap();
    for name in site.pages.keys() {
        assert_eq!(std::fs::read_to_string(dir.join(name)).unwrap(), site.pages[name]);
    }
    std::fs::remove_dir_all(dir).unwrap();
}
