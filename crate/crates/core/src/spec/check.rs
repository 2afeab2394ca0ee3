use super::{Attribute, Category, Ordering, Specification};
use crate::codec::{Codec, Msd};
use crate::report::Report;

/// What occupies an MSD position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot<'a> {
    /// Position 0.
    Category(&'a Category),
    Attribute(&'a Attribute),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LookupError {
    #[error("unknown category `{0}`")]
    UnknownCategory(char),
    #[error("language `{language}` has no particular table for category `{category}`")]
    NoParticularTable { language: String, category: char },
    #[error("no attribute at position {position} of category `{category}`")]
    NoAttributeAt { category: char, position: usize },
    #[error("attribute `{attribute}` is not defined for category `{category}` under this ordering")]
    UnknownAttribute { category: char, attribute: String },
}

/// Returns what occupies `position` of `category` MSDs under `ordering`.
pub fn lookup<'a>(
    spec: &'a Specification,
    language: &str,
    category: char,
    position: usize,
    ordering: Ordering,
) -> Result<Slot<'a>, LookupError> {
    let cat = spec
        .category(category)
        .ok_or(LookupError::UnknownCategory(category))?;
    let missing = || LookupError::NoAttributeAt { category, position };
    match ordering {
        Ordering::Common => {
            if position == 0 {
                return Ok(Slot::Category(cat));
            }
            cat.attribute_at(position).map(Slot::Attribute).ok_or_else(missing)
        }
        Ordering::Particular => {
            let table = spec.table(language, category).ok_or_else(|| {
                LookupError::NoParticularTable {
                    language: language.to_string(),
                    category,
                }
            })?;
            if position == 0 {
                return Ok(Slot::Category(cat));
            }
            let pattr = table.attribute_at(position).ok_or_else(missing)?;
            cat.attribute(&pattr.name).map(Slot::Attribute).ok_or_else(missing)
        }
    }
}

/// Inverse of [`lookup`] for attributes.
pub fn position_of(
    spec: &Specification,
    language: &str,
    category: char,
    attribute: &str,
    ordering: Ordering,
) -> Result<usize, LookupError> {
    let cat = spec
        .category(category)
        .ok_or(LookupError::UnknownCategory(category))?;
    let unknown = || LookupError::UnknownAttribute {
        category,
        attribute: attribute.to_string(),
    };
    match ordering {
        Ordering::Common => cat
            .attribute(attribute)
            .map(|a| a.common_position)
            .ok_or_else(unknown),
        Ordering::Particular => spec
            .table(language, category)
            .ok_or_else(|| LookupError::NoParticularTable {
                language: language.to_string(),
                category,
            })?
            .attribute(attribute)
            .map(|a| a.position)
            .ok_or_else(unknown),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryStats {
    pub code: char,
    pub name: String,
    pub attributes: usize,
    /// Attribute-value pairs.
    pub values: usize,
    /// Languages using the category.
    pub languages: usize,
}

pub fn spec_stats(spec: &Specification) -> Vec<CategoryStats> {
    spec.categories
        .iter()
        .map(|cat| CategoryStats {
            code: cat.code,
            name: cat.name.clone(),
            attributes: cat.attributes.len(),
            values: cat.attributes.iter().map(|a| a.values.len()).sum(),
            languages: spec.category_languages(cat.code).len(),
        })
        .collect()
}

impl Specification {
    /// Consistency findings that do not prevent loading: position gaps,
    /// language-flag mismatches between common and particular tables,
    /// incomplete localisation, and MSD index rows that do not decode.
    pub fn check(&self) -> Report {
        let mut report = Report::new();
        for (lang, section) in &self.sections {
            let localised = section.is_localised();
            for table in &section.tables {
                let Some(cat) = self.category(table.code) else {
                    continue;
                };
                let base = format!("{lang}/{}", cat.code);
                for (expected, attr) in (1..).zip(&table.attributes) {
                    if attr.position != expected {
                        report.warning(
                            "position-gap",
                            format!("{base}/{}", attr.name),
                            format!("particular position {} where {expected} was expected", attr.position),
                        );
                        break;
                    }
                }
                if localised && table.localised.is_none() {
                    report.warning("unlocalised", base.clone(), "category has no localised name/code");
                }
                for pattr in &table.attributes {
                    let path = format!("{base}/{}", pattr.name);
                    if localised && pattr.localised_name.is_none() {
                        report.warning("unlocalised", path.clone(), "attribute has no localised name");
                    }
                    let Some(attr) = cat.attribute(&pattr.name) else {
                        continue;
                    };
                    for pval in &pattr.values {
                        if localised && pval.localised.is_none() {
                            report.warning(
                                "unlocalised",
                                format!("{path}/{}", pval.name),
                                "value has no localised name/code",
                            );
                        }
                        if let Some(v) = attr.value_by_code(pval.code) {
                            if !v.languages.contains(lang) {
                                report.warning(
                                    "value-not-flagged",
                                    format!("{path}/{}", v.name),
                                    format!("listed for {lang} but not flagged for it in the common tables"),
                                );
                            }
                        }
                    }
                }
                for attr in &cat.attributes {
                    let pattr = table.attribute(&attr.name);
                    for v in attr.values.iter().filter(|v| v.languages.contains(lang)) {
                        if pattr.and_then(|p| p.value_by_code(v.code)).is_none() {
                            report.warning(
                                "value-omitted",
                                format!("{base}/{}/{}", attr.name, v.name),
                                format!("flagged for {lang} but missing from its particular table"),
                            );
                        }
                    }
                }
            }
            for cat in &self.categories {
                let flagged = cat
                    .attributes
                    .iter()
                    .flat_map(|a| &a.values)
                    .any(|v| v.languages.contains(lang));
                if flagged && section.table(cat.code).is_none() {
                    report.warning(
                        "table-missing",
                        format!("{lang}/{}", cat.code),
                        format!("category has values flagged for {lang} but no particular table"),
                    );
                }
            }
            let codec = Codec::new(self);
            for entry in &section.msd_index {
                let msd = Msd::new(&entry.msd, lang.as_str(), Ordering::Particular);
                if let Err(e) = codec.decode(&msd) {
                    report.error("invalid-index-msd", format!("{lang}/{}", entry.msd), e.to_string());
                }
            }
        }
        report
    }
}
