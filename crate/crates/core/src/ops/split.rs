use std::collections::BTreeSet;

use crate::spec::{
    normalise_language, CategoryTable, LanguageSection, ParticularAttribute, ParticularValue,
    Specification,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("no seed languages given")]
    NoSeeds,
    #[error("unknown seed language `{0}`")]
    UnknownSeed(String),
    #[error("`{0}` is not a valid language code")]
    BadLanguage(String),
    #[error("language `{0}` already exists")]
    LanguageExists(String),
}

/// Derives a section for `new_language` holding every category, attribute
/// and value used by at least one of the seed languages.
///
/// Attributes keep their common order and are numbered 1, 2, 3, ... The
/// result carries no localisation and no MSD index.
pub fn split<S: AsRef<str>>(
    spec: &Specification,
    seeds: &[S],
    new_language: &str,
) -> Result<LanguageSection, SplitError> {
    if seeds.is_empty() {
        return Err(SplitError::NoSeeds);
    }
    let seeds: BTreeSet<&str> = seeds.iter().map(AsRef::as_ref).collect();
    if let Some(unknown) = seeds.iter().find(|s| !spec.languages.contains(**s)) {
        return Err(SplitError::UnknownSeed(unknown.to_string()));
    }
    let lang = normalise_language(new_language)
        .ok_or_else(|| SplitError::BadLanguage(new_language.to_string()))?;
    if spec.languages.contains(&lang) {
        return Err(SplitError::LanguageExists(lang));
    }

    let mut section = LanguageSection::new(lang);
    for cat in &spec.categories {
        let seed_tables: Vec<&CategoryTable> =
            seeds.iter().filter_map(|s| spec.table(s, cat.code)).collect();
        let mut attributes = Vec::new();
        for attr in &cat.attributes {
            let values: Vec<ParticularValue> = attr
                .values
                .iter()
                .filter(|v| {
                    seeds.iter().any(|s| v.languages.contains(*s))
                        || seed_tables.iter().any(|t| {
                            t.attribute(&attr.name)
                                .is_some_and(|p| p.value_by_code(v.code).is_some())
                        })
                })
                .map(|v| ParticularValue {
                    code: v.code,
                    name: v.name.clone(),
                    localised: None,
                })
                .collect();
            if !values.is_empty() {
                attributes.push(ParticularAttribute {
                    position: attributes.len() + 1,
                    name: attr.name.clone(),
                    localised_name: None,
                    values,
                });
            }
        }
        if !attributes.is_empty() || !seed_tables.is_empty() {
            section.tables.push(CategoryTable {
                code: cat.code,
                localised: None,
                attributes,
            });
        }
    }
    Ok(section)
}
