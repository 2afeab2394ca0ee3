//! Sentence alignments between documents of a parallel corpus.
//!
//! A group lists its documents in `corresp` and holds links, each relating
//! sentences of one or more documents. Targets are `document#id`
//! references, so the document part says which slot a sentence belongs to.
//! Links with an empty slot (null-links, `0:1` and the like) cannot be
//! written as `link` elements and are kept as commented-out links.

mod compose;

use std::cmp::Ordering;
use std::fmt::Write;

use crate::corpus::AnnotatedCorpus;
use crate::ids::compare_dotted;
use crate::report::Report;
use crate::xml::{escape, position};

pub use compose::{compose, compose_around, compose_multiway, find_hub, ComposeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentLink {
    /// Sentence identifiers per slot, in document order.
    pub targets: Vec<Vec<String>>,
}

impl AlignmentLink {
    pub fn new(targets: Vec<Vec<String>>) -> Self {
        AlignmentLink { targets }
    }

    pub fn arity(&self) -> Vec<usize> {
        self.targets.iter().map(Vec::len).collect()
    }

    /// The `n` attribute, e.g. `2:1`.
    pub fn arity_string(&self) -> String {
        let sizes: Vec<String> = self.arity().iter().map(usize::to_string).collect();
        sizes.join(":")
    }

    pub fn is_null(&self) -> bool {
        self.targets.iter().any(Vec::is_empty)
    }

    /// Slot and identifier the link is ordered by.
    fn sort_key(&self) -> Option<(&str, usize)> {
        self.targets
            .iter()
            .enumerate()
            .find_map(|(slot, ids)| ids.first().map(|id| (id.as_str(), slot)))
    }

    fn target_list(&self, documents: &[String]) -> String {
        let mut refs = Vec::new();
        for (doc, ids) in documents.iter().zip(&self.targets) {
            for id in ids {
                refs.push(format!("{doc}#{id}"));
            }
        }
        refs.join(" ")
    }
}

/// Document order of links: by the first identifier of the first non-empty
/// slot.
pub fn compare_links(a: &AlignmentLink, b: &AlignmentLink) -> Ordering {
    match (a.sort_key(), b.sort_key()) {
        (Some((ia, sa)), Some((ib, sb))) => compare_dotted(ia, ib).then(sa.cmp(&sb)),
        (a, b) => a.is_some().cmp(&b.is_some()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentGroup {
    /// Value of `@type`.
    pub link_type: String,
    /// Documents of the slots, as listed in `@corresp`.
    pub documents: Vec<String>,
    pub links: Vec<AlignmentLink>,
}

impl AlignmentGroup {
    pub fn new(documents: Vec<String>) -> Self {
        AlignmentGroup {
            link_type: "alignment".to_string(),
            documents,
            links: Vec::new(),
        }
    }

    pub fn slot_of(&self, document: &str) -> Option<usize> {
        self.documents.iter().position(|d| d == document)
    }

    /// Language labels of the slots, guessed from the document names.
    pub fn languages(&self) -> Vec<String> {
        self.documents.iter().map(|d| language_of(d)).collect()
    }

    pub fn sort_links(&mut self) {
        self.links.sort_by(compare_links);
    }

    pub fn null_links(&self) -> impl Iterator<Item = &AlignmentLink> {
        self.links.iter().filter(|l| l.is_null())
    }

    /// Canonical XML: one link per line, null-links as commented links.
    pub fn to_xml(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<linkGrp type=\"{}\" corresp=\"{}\">",
            escape(&self.link_type),
            escape(&self.documents.join(" "))
        );
        for link in &self.links {
            let body = format!(
                "link n=\"{}\" targets=\"{}\"/",
                link.arity_string(),
                escape(&link.target_list(&self.documents))
            );
            if link.is_null() {
                let _ = writeln!(out, "  <!--{body}-->");
            } else {
                let _ = writeln!(out, "  <{body}>");
            }
        }
        out.push_str("</linkGrp>\n");
        out
    }

    /// One `NULL_LINK<TAB>n<TAB>targets` line per null-link.
    pub fn null_link_report(&self) -> String {
        let mut out = String::new();
        for link in self.null_links() {
            let _ = writeln!(
                out,
                "NULL_LINK\t{}\t{}",
                link.arity_string(),
                link.target_list(&self.documents)
            );
        }
        out
    }
}

/// `oana-sl.xml` -> `sl`; names without a language suffix are returned
/// without their extension.
pub fn language_of(document: &str) -> String {
    let stem = document.rsplit('/').next().unwrap_or(document);
    let stem = stem.split_once('.').map_or(stem, |(s, _)| s);
    match stem.rsplit_once(['-', '_']) {
        Some((_, lang))
            if (2..=3).contains(&lang.len()) && lang.bytes().all(|b| b.is_ascii_alphabetic()) =>
        {
            lang.to_ascii_lowercase()
        }
        _ => stem.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct AlignError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn fail(node: roxmltree::Node<'_, '_>, message: impl Into<String>) -> AlignError {
    let (line, column) = position(node);
    AlignError {
        line,
        column,
        message: message.into(),
    }
}

fn parse_link(
    node: roxmltree::Node<'_, '_>,
    documents: &[String],
) -> Result<AlignmentLink, AlignError> {
    let targets = node
        .attribute("targets")
        .ok_or_else(|| fail(node, "link without @targets"))?;
    let mut slots = vec![Vec::new(); documents.len()];
    for target in targets.split_whitespace() {
        let (doc, id) = target
            .split_once('#')
            .filter(|(d, i)| !d.is_empty() && !i.is_empty())
            .ok_or_else(|| fail(node, format!("target `{target}` is not a document#id reference")))?;
        let slot = documents
            .iter()
            .position(|d| d == doc)
            .ok_or_else(|| fail(node, format!("target `{target}` is in no declared document")))?;
        if slots[slot].iter().any(|s| s == id) {
            return Err(fail(node, format!("sentence `{id}` appears twice in link")));
        }
        slots[slot].push(id.to_string());
    }
    for ids in &mut slots {
        ids.sort_by(|a, b| compare_dotted(a, b));
    }
    let link = AlignmentLink::new(slots);
    if link.targets.iter().all(Vec::is_empty) {
        return Err(fail(node, "link without targets"));
    }
    if let Some(n) = node.attribute("n") {
        if n != link.arity_string() {
            return Err(fail(
                node,
                format!("arity `{n}` does not match targets ({})", link.arity_string()),
            ));
        }
    }
    Ok(link)
}

/// Parses a `linkGrp` element (the root or the only one in the document).
///
/// Commented-out links are read back: null-links become links of the group
/// and are reported as `null-link` info findings; other commented links are
/// skipped with a `commented-link` info finding.
pub fn load_alignment(source: &str) -> Result<(AlignmentGroup, Report), AlignError> {
    let doc = roxmltree::Document::parse(source).map_err(|e| {
        let pos = e.pos();
        AlignError {
            line: pos.row as usize,
            column: pos.col as usize,
            message: e.to_string(),
        }
    })?;
    let groups: Vec<_> = doc
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "linkGrp")
        .collect();
    let grp = match groups.as_slice() {
        [g] => *g,
        [] => return Err(fail(doc.root_element(), "no linkGrp element")),
        [_, second, ..] => return Err(fail(*second, "more than one linkGrp element")),
    };
    let documents: Vec<String> = grp
        .attribute("corresp")
        .ok_or_else(|| fail(grp, "linkGrp without @corresp"))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    if documents.is_empty() {
        return Err(fail(grp, "empty @corresp"));
    }
    let mut group = AlignmentGroup::new(documents);
    if let Some(t) = grp.attribute("type") {
        group.link_type = t.to_string();
    }
    let mut report = Report::new();
    for child in grp.children() {
        if child.is_element() {
            if child.tag_name().name() != "link" {
                return Err(fail(child, format!("unexpected element `{}`", child.tag_name().name())));
            }
            let link = parse_link(child, &group.documents)?;
            if link.is_null() {
                report.info(
                    "null-link",
                    link.target_list(&group.documents),
                    "link with an empty slot written as a link element",
                );
            }
            group.links.push(link);
        } else if child.is_comment() {
            let text = child.text().unwrap_or("").trim();
            if !text.starts_with("link") {
                continue;
            }
            let element = format!("<{text}>");
            let Ok(inner) = roxmltree::Document::parse(&element) else {
                report.info("comment", format!("line {}", position(child).0), "unparsable commented link skipped");
                continue;
            };
            let link = parse_link(inner.root_element(), &group.documents).map_err(|e| AlignError {
                line: position(child).0,
                ..e
            })?;
            let path = link.target_list(&group.documents);
            if link.is_null() {
                report.info("null-link", path, format!("{} link read from a comment", link.arity_string()));
                group.links.push(link);
            } else {
                report.info("commented-link", path, "commented-out link skipped");
            }
        } else if child.is_text() && !child.text().unwrap_or("").trim().is_empty() {
            report.warning(
                "stray-text",
                format!("line {}", position(child).0),
                format!("text `{}` ignored", child.text().unwrap_or("").trim()),
            );
        }
    }
    for (slot, doc) in group.documents.iter().enumerate() {
        let mut seen = std::collections::HashSet::new();
        for link in &group.links {
            for id in &link.targets[slot] {
                if !seen.insert(id.as_str()) {
                    return Err(fail(grp, format!("sentence `{doc}#{id}` is in more than one link")));
                }
            }
        }
    }
    group.sort_links();
    Ok((group, report))
}

/// Checks targets against the corpora of the slots (given as
/// `(document, corpus)` pairs; slots without a corpus are not resolved),
/// lists sentences not covered by any full link as unaligned, and warns
/// about links whose order differs between slots.
pub fn validate_alignment(group: &AlignmentGroup, corpora: &[(&str, &AnnotatedCorpus)]) -> Report {
    let mut report = Report::new();
    for (doc, corpus) in corpora {
        let Some(slot) = group.slot_of(doc) else {
            report.warning("unknown-document", *doc, "corpus for a document the group does not list");
            continue;
        };
        let sentences: Vec<&str> = corpus.sentences().iter().map(|s| s.id.as_str()).collect();
        let known: std::collections::HashSet<&str> = sentences.iter().copied().collect();
        let mut aligned = std::collections::HashSet::new();
        for link in &group.links {
            for id in &link.targets[slot] {
                if !known.contains(id.as_str()) {
                    report.error("dangling-target", format!("{doc}#{id}"), "no such sentence in the corpus");
                }
                if !link.is_null() {
                    aligned.insert(id.as_str());
                }
            }
        }
        for id in sentences.iter().filter(|id| !aligned.contains(*id)) {
            report.info("unaligned", format!("{doc}#{id}"), "sentence is in no full link");
        }
    }
    for slot in 1..group.documents.len() {
        let mut pairs: Vec<(&str, &str)> = group
            .links
            .iter()
            .filter_map(|l| Some((l.targets[0].first()?.as_str(), l.targets[slot].first()?.as_str())))
            .collect();
        pairs.sort_by(|a, b| compare_dotted(a.0, b.0));
        for w in pairs.windows(2) {
            if compare_dotted(w[0].1, w[1].1) == Ordering::Greater {
                report.warning(
                    "non-monotonic",
                    format!("{}#{}", group.documents[0], w[1].0),
                    format!(
                        "precedes in {} but follows in {} ({} after {})",
                        group.documents[0], group.documents[slot], w[1].1, w[0].1
                    ),
                );
            }
        }
    }
    report
}
