//! Site checks shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use aspdoc::DocSite;
use regex::Regex;

pub fn ids(html: &str) -> BTreeSet<String> {
    let re = Regex::new(r#"\bid="([^"]*)""#).unwrap();
    re.captures_iter(html).map(|c| c[1].to_string()).collect()
}

pub fn hrefs(html: &str) -> Vec<String> {
    let re = Regex::new(r#"\bhref="([^"]*)""#).unwrap();
    re.captures_iter(html).map(|c| c[1].replace("&amp;", "&")).collect()
}

/// Every link names a page of the site and, if it has a fragment, an id on that page.
pub fn dangling_links(site: &DocSite) -> Vec<String> {
    let anchors: HashMap<&str, BTreeSet<String>> = site.pages.iter().map(|(p, h)| (p.as_str(), ids(h))).collect();
    let mut bad = Vec::new();
    for (page, html) in &site.pages {
        for href in hrefs(html) {
            let (target, frag) = href.split_once('#').unwrap_or((&href, ""));
            let target = if target.is_empty() { page.as_str() } else { target };
            match anchors.get(target) {
                Some(set) if frag.is_empty() || set.contains(frag) => {}
                _ => bad.push(format!("{page}: {href}")),
            }
        }
    }
    bad
}

pub const VOID: &[&str] = &["br", "meta", "hr", "img", "link"];

/// A small strict checker: balanced tags, quoted attributes, no stray `<`,
/// `>` or `&`, unique ids.
pub fn well_formed(html: &str) -> Result<(), String> {
    let tag = Regex::new(r#"^<(/?)([a-z][a-z0-9]*)((?:\s+[a-z-]+="[^"<>]*")*)\s*(/?)>"#).unwrap();
    let entity = Regex::new(r"^&(amp|lt|gt|quot|#[0-9]+);").unwrap();
    let rest = html.strip_prefix("<!DOCTYPE html>\n").ok_or("missing doctype")?;
    let mut stack: Vec<String> = Vec::new();
    let mut i = 0;
    while i < rest.len() {
        let s = &rest[i..];
        if s.starts_with('<') {
            let c = tag.captures(s).ok_or_else(|| format!("bad tag at {}", &s[..s.len().min(40)]))?;
            let name = c[2].to_string();
            let closing = !c[1].is_empty();
            let self_closing = !c[4].is_empty();
            if closing {
                let open = stack.pop().ok_or(format!("unopened </{name}>"))?;
                if open != name {
                    return Err(format!("</{name}> closes <{open}>"));
                }
            } else if !self_closing && !VOID.contains(&name.as_str()) {
                stack.push(name);
            }
            i += c[0].len();
        } else if s.starts_with('&') {
            let m = entity.find(s).ok_or_else(|| format!("bare & at {}", &s[..s.len().min(40)]))?;
            i += m.end();
        } else if s.starts_with('>') {
            return Err("stray >".into());
        } else {
            i += s.chars().next().unwrap().len_utf8();
        }
    }
    if !stack.is_empty() {
        return Err(format!("unclosed {stack:?}"));
    }
    let all = Regex::new(r#"\bid="([^"]*)""#).unwrap();
    let mut seen = BTreeSet::new();
    for c in all.captures_iter(html) {
        if !seen.insert(c[1].to_string()) {
            return Err(format!("duplicate id {}", &c[1]));
        }
    }
    Ok(())
}

pub fn summary(index: &str) -> &str {
    let start = index.find("<nav id=\"summary\">").unwrap();
    let end = index[start..].find("</nav>").unwrap();
    &index[start..start + end]
}

