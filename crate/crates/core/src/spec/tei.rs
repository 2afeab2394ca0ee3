//! TEI table-row encoding of specifications (import/export).
//!
//! Common category tables are `table[@n="msd.cat"]` without `@select`;
//! language-particular tables carry `@select`. Every `row` and `cell` has a
//! `@role`; localised cells are marked with `@xml:lang`. MSD indexes are
//! `table[@n="msd.index"]`, constraints `table[@n="msd.constraints"]` and the
//! declared language list `table[@n="msd.langs"]`.

use std::collections::BTreeMap;

use roxmltree::{Document, Node};

use super::builder::{Loc, SpecBuilder};
use super::tabular::{format_examples, parse_examples};
use super::{LanguageSection, MsdIndexEntry, SpecError, Specification, CATEGORY_ATTRIBUTE};
use crate::codec::index_renderings;
use crate::xml::{position, text_of, xml_attr, XmlWriter};

fn loc_of(node: Node<'_, '_>) -> Loc {
    let (line, column) = position(node);
    Loc { line, column }
}

fn fail(node: Node<'_, '_>, message: impl Into<String>) -> SpecError {
    let loc = loc_of(node);
    SpecError::at(loc.line, loc.column, message)
}

fn elements<'a, 'i>(node: Node<'a, 'i>, name: &'a str) -> impl Iterator<Item = Node<'a, 'i>> + 'a {
    node.children()
        .filter(move |n| n.is_element() && n.tag_name().name() == name)
}

/// A cell of a row, with its role and language label.
struct Cell<'a, 'i> {
    node: Node<'a, 'i>,
    role: Option<&'a str>,
    lang: Option<&'a str>,
}

impl Cell<'_, '_> {
    fn text(&self) -> String {
        text_of(self.node).trim().to_string()
    }
}

const CELL_ROLES: &[&str] = &[
    "position", "name", "code", "lang", "value", "msd", "verbose", "type",
];

fn cells<'a, 'i>(row: Node<'a, 'i>) -> Result<Vec<Cell<'a, 'i>>, SpecError> {
    elements(row, "cell")
        .map(|node| {
            let role = node.attribute("role");
            if let Some(r) = role {
                if !CELL_ROLES.contains(&r) {
                    return Err(fail(node, format!("malformed cell role `{r}`")));
                }
            }
            Ok(Cell {
                node,
                role,
                lang: xml_attr(node, "lang"),
            })
        })
        .collect()
}

/// First cell with `role`, restricted to English (unlabelled or `en`) or to
/// a given language.
fn pick<'c, 'a, 'i>(
    cells: &'c [Cell<'a, 'i>],
    role: &str,
    lang: Option<&str>,
) -> Option<&'c Cell<'a, 'i>> {
    cells.iter().find(|c| {
        c.role == Some(role)
            && match lang {
                None => c.lang.is_none() || c.lang == Some("en"),
                Some(l) => c.lang == Some(l),
            }
    })
}

fn require<'c, 'a, 'i>(
    row: Node<'a, 'i>,
    cells: &'c [Cell<'a, 'i>],
    role: &str,
) -> Result<&'c Cell<'a, 'i>, SpecError> {
    pick(cells, role, None).ok_or_else(|| fail(row, format!("row lacks a `{role}` cell")))
}

fn localised_pair(cells: &[Cell<'_, '_>], lang: &str) -> Option<(String, String)> {
    if lang == "en" {
        return None;
    }
    let name = pick(cells, "name", Some(lang))?.text();
    let code = pick(cells, "code", Some(lang))?.text();
    Some((name, code))
}

/// The nested value table of an attribute row.
fn value_rows<'a, 'i>(row: Node<'a, 'i>) -> Vec<Node<'a, 'i>> {
    elements(row, "cell")
        .flat_map(|cell| elements(cell, "table"))
        .flat_map(|table| elements(table, "row"))
        .collect()
}

fn rows<'a, 'i>(table: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> + 'a {
    elements(table, "row")
}

fn feed_common_table(builder: &mut SpecBuilder, table: Node<'_, '_>) -> Result<(), SpecError> {
    let mut opened = false;
    for row in rows(table) {
        let cs = cells(row)?;
        match row.attribute("role") {
            Some("type") => {
                let code = require(row, &cs, "code")?.text();
                let name = require(row, &cs, "value")?.text();
                builder.category(&code, &name, &loc_of(row))?;
                opened = true;
            }
            Some("attribute") => {
                if !opened {
                    return Err(fail(row, "attribute row before the category row"));
                }
                let pos = require(row, &cs, "position")?.text();
                let name = require(row, &cs, "name")?.text();
                builder.attribute(&pos, &name, &loc_of(row))?;
                for vrow in value_rows(row) {
                    if vrow.attribute("role") != Some("value") {
                        return Err(fail(vrow, "expected a row with role `value`"));
                    }
                    let vcs = cells(vrow)?;
                    let code = require(vrow, &vcs, "code")?.text();
                    let vname = require(vrow, &vcs, "name")?.text();
                    let langs: Vec<String> = vcs
                        .iter()
                        .filter(|c| c.role == Some("lang"))
                        .map(Cell::text)
                        .collect();
                    builder.value(&code, &vname, langs.iter().map(String::as_str), &loc_of(vrow))?;
                }
            }
            other => {
                return Err(fail(
                    row,
                    format!("malformed row role `{}`", other.unwrap_or("")),
                ))
            }
        }
    }
    Ok(())
}

fn feed_particular_table(
    builder: &mut SpecBuilder,
    table: Node<'_, '_>,
    lang: &str,
) -> Result<(), SpecError> {
    let mut opened = false;
    for row in rows(table) {
        let cs = cells(row)?;
        match row.attribute("role") {
            Some("type") => {
                let code = require(row, &cs, "code")?.text();
                let localised = if lang == "en" {
                    None
                } else {
                    match (pick(&cs, "value", Some(lang)), pick(&cs, "code", Some(lang))) {
                        (Some(n), Some(c)) => Some((n.text(), c.text())),
                        _ => None,
                    }
                };
                builder.section_category(
                    &code,
                    localised.as_ref().map(|(n, c)| (n.as_str(), c.as_str())),
                    &loc_of(row),
                )?;
                opened = true;
            }
            Some("attribute") => {
                if !opened {
                    return Err(fail(row, "attribute row before the category row"));
                }
                let pos = require(row, &cs, "position")?.text();
                let name = require(row, &cs, "name")?.text();
                let lname = (lang != "en")
                    .then(|| pick(&cs, "name", Some(lang)).map(Cell::text))
                    .flatten();
                builder.section_attribute(&pos, &name, lname.as_deref(), &loc_of(row))?;
                for vrow in value_rows(row) {
                    if vrow.attribute("role") != Some("value") {
                        return Err(fail(vrow, "expected a row with role `value`"));
                    }
                    let vcs = cells(vrow)?;
                    let code = require(vrow, &vcs, "code")?.text();
                    let vname = require(vrow, &vcs, "name")?.text();
                    let localised = localised_pair(&vcs, lang);
                    builder.section_value(
                        &code,
                        &vname,
                        localised.as_ref().map(|(n, c)| (n.as_str(), c.as_str())),
                        &loc_of(vrow),
                    )?;
                }
            }
            other => {
                return Err(fail(
                    row,
                    format!("malformed row role `{}`", other.unwrap_or("")),
                ))
            }
        }
    }
    Ok(())
}

fn parse_count(cell: Option<&Cell<'_, '_>>) -> Result<Option<u64>, SpecError> {
    match cell {
        None => Ok(None),
        Some(c) => {
            let t = c.text();
            if t.is_empty() || t == "-" {
                return Ok(None);
            }
            t.parse()
                .map(Some)
                .map_err(|_| fail(c.node, format!("count `{t}` is not a number")))
        }
    }
}

fn feed_index_table(builder: &mut SpecBuilder, table: Node<'_, '_>) -> Result<(), SpecError> {
    for row in rows(table) {
        if row.attribute("role") != Some("msd") {
            return Err(fail(row, "MSD index rows must have role `msd`"));
        }
        let cs = cells(row)?;
        let msd = require(row, &cs, "msd")?.text();
        let plain: Vec<&Cell> = cs.iter().filter(|c| c.role.is_none()).collect();
        let examples = match plain.get(2) {
            Some(c) => parse_examples(&c.text(), &loc_of(c.node))?,
            None => Vec::new(),
        };
        let entry = MsdIndexEntry {
            msd,
            token_count: parse_count(plain.first().copied())?,
            type_count: parse_count(plain.get(1).copied())?,
            examples,
        };
        builder.msd_row(entry, &loc_of(row))?;
    }
    Ok(())
}

fn feed_constraints(builder: &mut SpecBuilder, table: Node<'_, '_>) -> Result<(), SpecError> {
    for row in rows(table) {
        let text = elements(row, "cell").map(text_of).collect::<Vec<_>>().join(" ");
        builder.constraint(&text, &loc_of(row))?;
    }
    Ok(())
}

type Sections<'a, 'i> = BTreeMap<String, (Node<'a, 'i>, Vec<Node<'a, 'i>>)>;

fn feed(builder: &mut SpecBuilder, doc: &Document<'_>) -> Result<(), SpecError> {
    let mut sections: Sections = BTreeMap::new();
    for table in doc
        .root()
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "table" && n.has_attribute("n"))
    {
        let n = table.attribute("n").unwrap_or_default();
        match (n, table.attribute("select")) {
            ("msd.langs", _) => {
                let langs: Vec<String> = table
                    .descendants()
                    .filter(|c| c.is_element() && c.attribute("role") == Some("lang"))
                    .map(|c| text_of(c).trim().to_string())
                    .collect();
                builder.declare_languages(langs.iter().map(String::as_str), &loc_of(table))?;
            }
            ("msd.cat", None) => feed_common_table(builder, table)?,
            ("msd.cat" | "msd.index" | "msd.constraints", Some(lang)) => {
                let key = lang.trim().to_ascii_lowercase();
                sections.entry(key).or_insert((table, Vec::new())).1.push(table);
            }
            ("msd.index" | "msd.constraints", None) => {
                return Err(fail(table, format!("table `{n}` needs a @select language")))
            }
            _ => {}
        }
    }
    for (lang, (first, tables)) in sections {
        builder.section(&lang, &loc_of(first))?;
        for table in tables {
            match table.attribute("n") {
                Some("msd.cat") => feed_particular_table(builder, table, &lang)?,
                Some("msd.index") => feed_index_table(builder, table)?,
                _ => feed_constraints(builder, table)?,
            }
        }
    }
    Ok(())
}

pub fn parse_tei(source: &str) -> Result<Specification, SpecError> {
    let doc = Document::parse(source)?;
    let mut builder = SpecBuilder::new();
    feed(&mut builder, &doc)?;
    builder.finish()
}

pub fn parse_tei_section(source: &str) -> Result<LanguageSection, SpecError> {
    let doc = Document::parse(source)?;
    let mut builder = SpecBuilder::new();
    feed(&mut builder, &doc)?;
    builder.finish_section(&loc_of(doc.root_element()))
}

fn emit_section(w: &mut XmlWriter, spec: Option<&Specification>, section: &LanguageSection) {
    let lang = section.language.as_str();
    let div_id = format!("msd-{lang}");
    w.open(
        "div",
        &[("type", "section"), ("select", lang), ("xml:id", &div_id)],
    );
    for table in &section.tables {
        let id = format!("msd.cat.{}-{lang}", table.code);
        w.open(
            "table",
            &[("n", "msd.cat"), ("select", lang), ("xml:id", &id)],
        );
        w.open("row", &[("role", "type")]);
        w.leaf("cell", &[("role", "position")], "0");
        if let Some(l) = &table.localised {
            w.leaf("cell", &[("role", "value"), ("xml:lang", lang)], &l.name);
            w.leaf("cell", &[("role", "code"), ("xml:lang", lang)], &l.code.to_string());
        }
        w.leaf("cell", &[("role", "name"), ("xml:lang", "en")], CATEGORY_ATTRIBUTE);
        if let Some(cat) = spec.and_then(|s| s.category(table.code)) {
            w.leaf("cell", &[("role", "value"), ("xml:lang", "en")], &cat.name);
        }
        w.leaf("cell", &[("role", "code"), ("xml:lang", "en")], &table.code.to_string());
        w.close("row");
        for attr in &table.attributes {
            w.open("row", &[("role", "attribute")]);
            w.leaf("cell", &[("role", "position")], &attr.position.to_string());
            if let Some(l) = &attr.localised_name {
                w.leaf("cell", &[("role", "name"), ("xml:lang", lang)], l);
            }
            w.leaf("cell", &[("role", "name"), ("xml:lang", "en")], &attr.name);
            w.open("cell", &[]);
            w.open("table", &[]);
            for value in &attr.values {
                w.open("row", &[("role", "value")]);
                if let Some(l) = &value.localised {
                    w.leaf("cell", &[("role", "name"), ("xml:lang", lang)], &l.name);
                    w.leaf("cell", &[("role", "code"), ("xml:lang", lang)], &l.code.to_string());
                }
                w.leaf("cell", &[("role", "name"), ("xml:lang", "en")], &value.name);
                w.leaf("cell", &[("role", "code"), ("xml:lang", "en")], &value.code.to_string());
                w.close("row");
            }
            w.close("table");
            w.close("cell");
            w.close("row");
        }
        w.close("table");
    }
    if !section.msd_index.is_empty() {
        w.open("table", &[("n", "msd.index"), ("select", lang)]);
        for entry in &section.msd_index {
            emit_index_row(w, spec, lang, entry);
        }
        w.close("table");
    }
    if !section.constraints.is_empty() {
        w.open("table", &[("n", "msd.constraints"), ("select", lang)]);
        for c in &section.constraints {
            w.open("row", &[("role", "constraint")]);
            w.leaf("cell", &[], c);
            w.close("row");
        }
        w.close("table");
    }
    w.close("div");
}

/// Writes one MSD index row: MSD and its expansion in English, the localised
/// MSD and expansion when available, counts, and examples.
pub(crate) fn emit_index_row(
    w: &mut XmlWriter,
    spec: Option<&Specification>,
    lang: &str,
    entry: &MsdIndexEntry,
) {
    let renderings = spec.and_then(|s| index_renderings(s, lang, &entry.msd));
    w.open("row", &[("role", "msd")]);
    w.leaf("cell", &[("role", "msd"), ("xml:lang", "en")], &entry.msd);
    if let Some(r) = &renderings {
        w.leaf("cell", &[("role", "verbose"), ("xml:lang", "en")], &r.verbose);
        if let Some((lmsd, lverbose)) = &r.localised {
            w.leaf("cell", &[("role", "msd"), ("xml:lang", lang)], lmsd);
            w.leaf("cell", &[("role", "verbose"), ("xml:lang", lang)], lverbose);
        }
    }
    let count = |c: Option<u64>| c.map(|n| n.to_string()).unwrap_or_default();
    w.leaf("cell", &[], &count(entry.token_count));
    w.leaf("cell", &[], &count(entry.type_count));
    w.leaf("cell", &[], &format_examples(&entry.examples, ", "));
    w.close("row");
}

pub fn emit_tei(spec: &Specification) -> String {
    let mut w = XmlWriter::new();
    w.open("div", &[("type", "msd-spec")]);
    w.open("table", &[("n", "msd.langs")]);
    w.open("row", &[]);
    for lang in &spec.languages {
        w.leaf("cell", &[("role", "lang")], lang);
    }
    w.close("row");
    w.close("table");
    for cat in &spec.categories {
        let div_id = format!("msd.{}", cat.code);
        let table_id = format!("msd.cat.{}", cat.code);
        w.open("div", &[("type", "section"), ("xml:id", &div_id)]);
        w.open("table", &[("n", "msd.cat"), ("xml:id", &table_id)]);
        w.open("row", &[("role", "type")]);
        w.leaf("cell", &[("role", "position")], "0");
        w.leaf("cell", &[("role", "name")], CATEGORY_ATTRIBUTE);
        w.leaf("cell", &[("role", "value")], &cat.name);
        w.leaf("cell", &[("role", "code")], &cat.code.to_string());
        w.close("row");
        for attr in &cat.attributes {
            w.open("row", &[("role", "attribute")]);
            w.leaf("cell", &[("role", "position")], &attr.common_position.to_string());
            w.leaf("cell", &[("role", "name")], &attr.name);
            w.open("cell", &[]);
            w.open("table", &[]);
            for value in &attr.values {
                w.open("row", &[("role", "value")]);
                w.leaf("cell", &[("role", "name")], &value.name);
                w.leaf("cell", &[("role", "code")], &value.code.to_string());
                for lang in &value.languages {
                    w.leaf("cell", &[("role", "lang")], lang);
                }
                w.close("row");
            }
            w.close("table");
            w.close("cell");
            w.close("row");
        }
        w.close("table");
        w.close("div");
    }
    for section in spec.sections.values() {
        emit_section(&mut w, Some(spec), section);
    }
    w.close("div");
    w.finish()
}

/// Writes a stand-alone language section.
pub fn emit_tei_section(section: &LanguageSection) -> String {
    let mut w = XmlWriter::new();
    emit_section(&mut w, None, section);
    w.finish()
}
