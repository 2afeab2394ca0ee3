use std::collections::BTreeSet;
use std::fmt;

use super::ChangeRecord;
use crate::spec::{
    normalise_language, AttrValue, Attribute, CategoryTable, LanguageSection, ParticularAttribute,
    Specification,
};

/// Conflicts that prevent a section from being merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeError {
    pub conflicts: Vec<ChangeRecord>,
}

impl fmt::Display for MergeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.conflicts.iter().map(|c| c.to_string()).collect();
        write!(f, "merge failed: {}", lines.join("; "))
    }
}

impl std::error::Error for MergeError {}

/// Adds or updates a language in the common tables.
///
/// Every value listed in the section gains the language's flag. Attributes
/// and values unknown to the common tables are appended (`ATTRIBUTE_ADDED`,
/// `VALUE_ADDED`). Names that differ from an existing one only in letter
/// case are not merged (`CASE_MISMATCH`). When the language was already
/// present, flags for items its section no longer lists are removed
/// (`FLAG_REMOVED`), and values left without any language are dropped
/// (`VALUE_REMOVED`).
///
/// A value code already bound to a differently named value, or a known value
/// listed with another code, is a conflict and nothing is merged.
pub fn merge(
    spec: &Specification,
    section: &LanguageSection,
) -> Result<(Specification, Vec<ChangeRecord>), MergeError> {
    let mut warnings = Vec::new();
    let mut conflicts = Vec::new();
    let Some(lang) = normalise_language(&section.language) else {
        return Err(MergeError {
            conflicts: vec![ChangeRecord::new(
                "BAD_LANGUAGE",
                &section.language,
                "not a valid language code",
            )],
        });
    };

    let mut out = spec.clone();
    let mut listed: BTreeSet<(char, String, char)> = BTreeSet::new();
    let mut tables = Vec::new();

    for table in &section.tables {
        let Some(cat) = out.categories.iter_mut().find(|c| c.code == table.code) else {
            conflicts.push(ChangeRecord::new(
                "UNKNOWN_CATEGORY",
                table.code.to_string(),
                "category is not in the common tables",
            ));
            continue;
        };
        let mut kept_attrs = Vec::new();
        for pattr in &table.attributes {
            let apath = format!("{}/{}", cat.code, pattr.name);
            let idx = match cat.attributes.iter().position(|a| a.name == pattr.name) {
                Some(i) => i,
                None => {
                    if let Some(other) = cat
                        .attributes
                        .iter()
                        .find(|a| a.name.eq_ignore_ascii_case(&pattr.name))
                    {
                        warnings.push(ChangeRecord::new(
                            "CASE_MISMATCH",
                            apath,
                            format!("differs only in case from `{}`; not merged", other.name),
                        ));
                        continue;
                    }
                    let position = cat.max_position() + 1;
                    cat.attributes.push(Attribute {
                        name: pattr.name.clone(),
                        common_position: position,
                        values: Vec::new(),
                    });
                    warnings.push(ChangeRecord::new(
                        "ATTRIBUTE_ADDED",
                        apath.clone(),
                        format!("new attribute added to common tables at position {position}"),
                    ));
                    cat.attributes.len() - 1
                }
            };
            let attr = &mut cat.attributes[idx];
            let mut kept_values = Vec::new();
            for pval in &pattr.values {
                let vpath = format!("{apath}/{}", pval.name);
                if let Some(v) = attr.values.iter_mut().find(|v| v.name == pval.name) {
                    if v.code != pval.code {
                        conflicts.push(ChangeRecord::new(
                            "CODE_CONFLICT",
                            vpath,
                            format!("code `{}` here but `{}` in the common tables", pval.code, v.code),
                        ));
                        continue;
                    }
                    v.languages.insert(lang.clone());
                } else if let Some(v) = attr
                    .values
                    .iter()
                    .find(|v| v.name.eq_ignore_ascii_case(&pval.name))
                {
                    warnings.push(ChangeRecord::new(
                        "CASE_MISMATCH",
                        vpath,
                        format!("differs only in case from `{}`; not merged", v.name),
                    ));
                    continue;
                } else if let Some(v) = attr.values.iter().find(|v| v.code == pval.code) {
                    conflicts.push(ChangeRecord::new(
                        "CODE_CONFLICT",
                        vpath,
                        format!("code `{}` is already bound to `{}`", pval.code, v.name),
                    ));
                    continue;
                } else {
                    attr.values.push(AttrValue {
                        name: pval.name.clone(),
                        code: pval.code,
                        languages: BTreeSet::from([lang.clone()]),
                    });
                    warnings.push(ChangeRecord::new(
                        "VALUE_ADDED",
                        vpath,
                        "new value added to common tables",
                    ));
                }
                listed.insert((cat.code, attr.name.clone(), pval.code));
                kept_values.push(pval.clone());
            }
            kept_attrs.push(ParticularAttribute {
                values: kept_values,
                ..pattr.clone()
            });
        }
        tables.push(CategoryTable {
            attributes: kept_attrs,
            ..table.clone()
        });
    }
    if !conflicts.is_empty() {
        return Err(MergeError { conflicts });
    }

    for cat in &mut out.categories {
        for attr in &mut cat.attributes {
            let path = format!("{}/{}", cat.code, attr.name);
            attr.values.retain_mut(|v| {
                if !v.languages.contains(&lang) || listed.contains(&(cat.code, attr.name.clone(), v.code)) {
                    return true;
                }
                v.languages.remove(&lang);
                warnings.push(ChangeRecord::new(
                    "FLAG_REMOVED",
                    format!("{path}/{}", v.name),
                    format!("{lang} no longer lists this value"),
                ));
                if v.languages.is_empty() {
                    warnings.push(ChangeRecord::new(
                        "VALUE_REMOVED",
                        format!("{path}/{}", v.name),
                        "no language uses this value any more",
                    ));
                    return false;
                }
                true
            });
        }
    }

    out.languages.insert(lang.clone());
    let mut merged = section.clone();
    merged.language = lang.clone();
    merged.tables = tables;
    out.sections.insert(lang, merged);
    Ok((out, warnings))
}
