use super::ChangeRecord;
use crate::spec::{LanguageSection, Localised, Specification};

fn joined<'a>(langs: impl IntoIterator<Item = &'a String>) -> String {
    langs.into_iter().cloned().collect::<Vec<_>>().join(",")
}

fn localised_label(l: &Option<Localised>) -> String {
    l.as_ref()
        .map_or_else(|| "-".to_string(), |l| format!("{}/{}", l.name, l.code))
}

/// Structural differences between two specifications, in the order of
/// `a` followed by items only present in `b`.
///
/// A new category is reported without its contents and a new value without
/// its language flags; a new attribute is followed by its values.
pub fn diff(a: &Specification, b: &Specification) -> Vec<ChangeRecord> {
    let mut out = Vec::new();
    for lang in a.languages.difference(&b.languages) {
        out.push(ChangeRecord::new("LANGUAGE_REMOVED", lang, ""));
    }
    for lang in b.languages.difference(&a.languages) {
        out.push(ChangeRecord::new("LANGUAGE_ADDED", lang, ""));
    }

    for ca in &a.categories {
        let code = ca.code.to_string();
        let Some(cb) = b.category(ca.code) else {
            out.push(ChangeRecord::new("CATEGORY_REMOVED", code, &ca.name));
            continue;
        };
        if ca.name != cb.name {
            out.push(ChangeRecord::new("CATEGORY_RENAMED", code, format!("{} -> {}", ca.name, cb.name)));
        }
        for aa in &ca.attributes {
            let apath = format!("{}/{}", ca.code, aa.name);
            let Some(ab) = cb.attribute(&aa.name) else {
                out.push(ChangeRecord::new("ATTRIBUTE_REMOVED", apath, aa.common_position.to_string()));
                continue;
            };
            if aa.common_position != ab.common_position {
                out.push(ChangeRecord::new(
                    "POSITION_CHANGED",
                    apath.clone(),
                    format!("{} -> {}", aa.common_position, ab.common_position),
                ));
            }
            for va in &aa.values {
                let vpath = format!("{apath}/{}", va.name);
                let Some(vb) = ab.value_by_name(&va.name) else {
                    out.push(ChangeRecord::new("VALUE_REMOVED", vpath, va.code.to_string()));
                    continue;
                };
                if va.code != vb.code {
                    out.push(ChangeRecord::new("CODE_CHANGED", vpath.clone(), format!("{} -> {}", va.code, vb.code)));
                }
                for lang in va.languages.difference(&vb.languages) {
                    out.push(ChangeRecord::new("FLAG_REMOVED", vpath.clone(), lang));
                }
                for lang in vb.languages.difference(&va.languages) {
                    out.push(ChangeRecord::new("FLAG_ADDED", vpath.clone(), lang));
                }
            }
            for vb in ab.values.iter().filter(|v| aa.value_by_name(&v.name).is_none()) {
                out.push(ChangeRecord::new(
                    "VALUE_ADDED",
                    format!("{apath}/{}", vb.name),
                    format!("{} {}", vb.code, joined(&vb.languages)),
                ));
            }
        }
        for ab in cb.attributes.iter().filter(|x| ca.attribute(&x.name).is_none()) {
            out.push(ChangeRecord::new(
                "ATTRIBUTE_ADDED",
                format!("{}/{}", ca.code, ab.name),
                ab.common_position.to_string(),
            ));
            for vb in &ab.values {
                out.push(ChangeRecord::new(
                    "VALUE_ADDED",
                    format!("{}/{}/{}", ca.code, ab.name, vb.name),
                    format!("{} {}", vb.code, joined(&vb.languages)),
                ));
            }
        }
    }
    for cb in b.categories.iter().filter(|c| a.category(c.code).is_none()) {
        out.push(ChangeRecord::new("CATEGORY_ADDED", cb.code.to_string(), &cb.name));
    }

    for (lang, sa) in &a.sections {
        match b.sections.get(lang) {
            Some(sb) => diff_sections(&mut out, lang, sa, sb),
            None => out.push(ChangeRecord::new("SECTION_REMOVED", format!("{lang}:"), "")),
        }
    }
    for (lang, sb) in b.sections.iter().filter(|(l, _)| !a.sections.contains_key(*l)) {
        out.push(ChangeRecord::new(
            "SECTION_ADDED",
            format!("{lang}:"),
            format!("{} tables", sb.tables.len()),
        ));
    }
    out
}

fn diff_sections(out: &mut Vec<ChangeRecord>, lang: &str, sa: &LanguageSection, sb: &LanguageSection) {
    for ta in &sa.tables {
        let tpath = format!("{lang}:{}", ta.code);
        let Some(tb) = sb.table(ta.code) else {
            out.push(ChangeRecord::new("TABLE_REMOVED", tpath, ""));
            continue;
        };
        if ta.localised != tb.localised {
            out.push(ChangeRecord::new(
                "LOCALISATION_CHANGED",
                tpath.clone(),
                format!("{} -> {}", localised_label(&ta.localised), localised_label(&tb.localised)),
            ));
        }
        for pa in &ta.attributes {
            let apath = format!("{tpath}/{}", pa.name);
            let Some(pb) = tb.attribute(&pa.name) else {
                out.push(ChangeRecord::new("PARTICULAR_ATTRIBUTE_REMOVED", apath, pa.position.to_string()));
                continue;
            };
            if pa.position != pb.position {
                out.push(ChangeRecord::new(
                    "PARTICULAR_POSITION_CHANGED",
                    apath.clone(),
                    format!("{} -> {}", pa.position, pb.position),
                ));
            }
            if pa.localised_name != pb.localised_name {
                out.push(ChangeRecord::new(
                    "LOCALISATION_CHANGED",
                    apath.clone(),
                    format!(
                        "{} -> {}",
                        pa.localised_name.as_deref().unwrap_or("-"),
                        pb.localised_name.as_deref().unwrap_or("-")
                    ),
                ));
            }
            for va in &pa.values {
                let vpath = format!("{apath}/{}", va.name);
                match pb.value_by_name(&va.name) {
                    None => out.push(ChangeRecord::new("PARTICULAR_VALUE_REMOVED", vpath, va.code.to_string())),
                    Some(vb) if vb.localised != va.localised => out.push(ChangeRecord::new(
                        "LOCALISATION_CHANGED",
                        vpath,
                        format!("{} -> {}", localised_label(&va.localised), localised_label(&vb.localised)),
                    )),
                    Some(_) => {}
                }
            }
            for vb in pb.values.iter().filter(|v| pa.value_by_name(&v.name).is_none()) {
                out.push(ChangeRecord::new(
                    "PARTICULAR_VALUE_ADDED",
                    format!("{apath}/{}", vb.name),
                    vb.code.to_string(),
                ));
            }
        }
        for pb in tb.attributes.iter().filter(|x| ta.attribute(&x.name).is_none()) {
            out.push(ChangeRecord::new(
                "PARTICULAR_ATTRIBUTE_ADDED",
                format!("{tpath}/{}", pb.name),
                pb.position.to_string(),
            ));
        }
    }
    for tb in sb.tables.iter().filter(|t| sa.table(t.code).is_none()) {
        out.push(ChangeRecord::new("TABLE_ADDED", format!("{lang}:{}", tb.code), ""));
    }

    for ea in &sa.msd_index {
        let path = format!("{lang}:{}", ea.msd);
        match sb.index_entry(&ea.msd) {
            None => out.push(ChangeRecord::new("MSD_REMOVED", path, "")),
            Some(eb) if eb != ea => out.push(ChangeRecord::new("INDEX_ROW_CHANGED", path, "")),
            Some(_) => {}
        }
    }
    for eb in sb.msd_index.iter().filter(|e| sa.index_entry(&e.msd).is_none()) {
        out.push(ChangeRecord::new("MSD_ADDED", format!("{lang}:{}", eb.msd), ""));
    }
    if sa.constraints != sb.constraints {
        out.push(ChangeRecord::new(
            "CONSTRAINTS_CHANGED",
            format!("{lang}:"),
            format!("{} -> {} constraints", sa.constraints.len(), sb.constraints.len()),
        ));
    }
}
