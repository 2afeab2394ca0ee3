use std::collections::BTreeMap;
use std::fmt::Write;

use crate::codec::index_renderings;
use crate::spec::{format_examples, spec_stats, Specification};

fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Markdown document describing the specification, or one language of it:
/// category summary, attribute tables, attribute and value indexes, the
/// language's MSD index, and any consistency warnings.
pub fn render_report(spec: &Specification, language: Option<&str>) -> String {
    let mut out = String::new();
    match language {
        Some(lang) => {
            let _ = writeln!(out, "# Morphosyntactic specification: {lang}\n");
        }
        None => {
            let _ = writeln!(out, "# Morphosyntactic specification\n");
        }
    }
    let langs: Vec<&str> = spec.languages.iter().map(String::as_str).collect();
    let _ = writeln!(out, "Languages: {}\n", langs.join(", "));

    out.push_str("## Categories\n\n");
    out.push_str("| Code | Category | Attributes | Values | Languages |\n");
    out.push_str("|---|---|---|---|---|\n");
    for s in spec_stats(spec) {
        if language.is_some_and(|l| !spec.language_uses_category(l, s.code)) {
            continue;
        }
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            s.code, s.name, s.attributes, s.values, s.languages
        );
    }
    out.push('\n');

    match language {
        None => common_tables(&mut out, spec),
        Some(lang) => language_tables(&mut out, spec, lang),
    }
    indexes(&mut out, spec, language);

    if let Some(section) = language.and_then(|l| spec.section(l)) {
        if !section.msd_index.is_empty() {
            out.push_str("## MSD index\n\n");
            out.push_str("| MSD | Features | Localised MSD | Localised features | Tokens | Types | Examples |\n");
            out.push_str("|---|---|---|---|---|---|---|\n");
            for entry in &section.msd_index {
                let r = index_renderings(spec, &section.language, &entry.msd);
                let verbose = r.as_ref().map_or("?", |r| r.verbose.as_str()).to_string();
                let (lmsd, lverbose) = r
                    .and_then(|r| r.localised)
                    .unwrap_or_else(|| (String::new(), String::new()));
                let count = |c: Option<u64>| c.map_or_else(String::new, |n| n.to_string());
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} |",
                    cell(&entry.msd),
                    cell(&verbose),
                    cell(&lmsd),
                    cell(&lverbose),
                    count(entry.token_count),
                    count(entry.type_count),
                    cell(&format_examples(&entry.examples, ", "))
                );
            }
            out.push('\n');
        }
    }

    let report = spec.check();
    let prefix = language.map(|l| format!("{l}/"));
    let findings: Vec<_> = report
        .findings
        .iter()
        .filter(|f| prefix.as_ref().is_none_or(|p| f.path.starts_with(p.as_str())))
        .collect();
    if !findings.is_empty() {
        out.push_str("## Warnings\n\n");
        for f in findings {
            let _ = writeln!(out, "- {} `{}` {}: {}", f.severity, f.kind, f.path, f.detail);
        }
        out.push('\n');
    }
    out
}

fn common_tables(out: &mut String, spec: &Specification) {
    for cat in &spec.categories {
        let _ = writeln!(out, "## {} {}\n", cat.code, cat.name);
        if cat.attributes.is_empty() {
            out.push_str("No attributes.\n\n");
            continue;
        }
        out.push_str("| Position | Attribute | Value | Code | Languages |\n");
        out.push_str("|---|---|---|---|---|\n");
        for attr in &cat.attributes {
            for v in &attr.values {
                let langs: Vec<&str> = v.languages.iter().map(String::as_str).collect();
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    attr.common_position,
                    attr.name,
                    v.name,
                    v.code,
                    langs.join(" ")
                );
            }
        }
        out.push('\n');
    }
}

fn language_tables(out: &mut String, spec: &Specification, lang: &str) {
    let Some(section) = spec.section(lang) else {
        // no particular tables: show the common tables restricted to the language
        for cat in &spec.categories {
            if !spec.language_uses_category(lang, cat.code) {
                continue;
            }
            let _ = writeln!(out, "## {} {}\n", cat.code, cat.name);
            out.push_str("| Position | Attribute | Value | Code |\n|---|---|---|---|\n");
            for attr in &cat.attributes {
                for v in attr.values.iter().filter(|v| v.languages.contains(lang)) {
                    let _ = writeln!(out, "| {} | {} | {} | {} |", attr.common_position, attr.name, v.name, v.code);
                }
            }
            out.push('\n');
        }
        return;
    };
    for table in &section.tables {
        let Some(cat) = spec.category(table.code) else {
            continue;
        };
        match &table.localised {
            Some(l) => {
                let _ = writeln!(out, "## {} {} ({} {})\n", cat.code, cat.name, l.code, l.name);
            }
            None => {
                let _ = writeln!(out, "## {} {}\n", cat.code, cat.name);
            }
        }
        if table.attributes.is_empty() {
            out.push_str("No attributes.\n\n");
            continue;
        }
        out.push_str("| Position | Attribute | Value | Code | Localised |\n");
        out.push_str("|---|---|---|---|---|\n");
        for attr in &table.attributes {
            let attr_label = match &attr.localised_name {
                Some(l) => format!("{} ({l})", attr.name),
                None => attr.name.clone(),
            };
            for v in &attr.values {
                let local = v
                    .localised
                    .as_ref()
                    .map_or_else(String::new, |l| format!("{} {}", l.code, l.name));
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    attr.position, attr_label, v.name, v.code, local
                );
            }
        }
        out.push('\n');
    }
}

fn indexes(out: &mut String, spec: &Specification, language: Option<&str>) {
    let mut attributes: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut values: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for cat in &spec.categories {
        for attr in &cat.attributes {
            let used: Vec<_> = attr
                .values
                .iter()
                .filter(|v| language.is_none_or(|l| v.languages.contains(l)))
                .collect();
            if used.is_empty() && language.is_some() {
                continue;
            }
            attributes
                .entry(&attr.name)
                .or_default()
                .push(cat.code.to_string());
            for v in used {
                values
                    .entry(&v.name)
                    .or_default()
                    .push(format!("{}/{}={}", cat.code, attr.name, v.code));
            }
        }
    }
    out.push_str("## Attribute index\n\n");
    for (name, cats) in &attributes {
        let _ = writeln!(out, "- {name}: {}", cats.join(" "));
    }
    out.push_str("\n## Value index\n\n");
    for (name, places) in &values {
        let _ = writeln!(out, "- {name}: {}", places.join(" "));
    }
    out.push('\n');
}
