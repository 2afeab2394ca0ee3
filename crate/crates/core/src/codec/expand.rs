use std::fmt;
use std::str::FromStr;

use super::{Codec, CodecError, FeatureStructure, Msd};
use crate::spec::{Ordering, Specification};

/// Placeholder shown for attributes a canonical expansion lists but the MSD
/// does not instantiate.
pub const UNSET: &str = "0";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionForm {
    /// Instantiated features only, English names.
    Minimal,
    /// Instantiated features only, localised names where available.
    MinimalLocalised,
    /// Every attribute name the language uses, in any category.
    CanonicalLanguage,
    /// Every attribute name of the common tables, in any category.
    CanonicalUniversal,
    /// Space-separated `Attr=value` string, as shown in MSD indexes.
    VerboseString,
}

impl FromStr for ExpansionForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "minimal" => ExpansionForm::Minimal,
            "minimal-localised" => ExpansionForm::MinimalLocalised,
            "canonical-language" => ExpansionForm::CanonicalLanguage,
            "canonical-universal" => ExpansionForm::CanonicalUniversal,
            "verbose-string" | "verbose" => ExpansionForm::VerboseString,
            other => return Err(format!("unknown expansion form `{other}`")),
        })
    }
}

/// A category name followed by `(attribute, value)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub category: String,
    pub features: Vec<(String, String)>,
}

impl Expansion {
    /// Features with a real value, skipping [`UNSET`] placeholders.
    pub fn instantiated(&self) -> impl Iterator<Item = &(String, String)> {
        self.features.iter().filter(|(_, v)| v != UNSET)
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.category)?;
        for (attr, value) in &self.features {
            write!(f, " {attr}={value}")?;
        }
        Ok(())
    }
}

fn push_unique(names: &mut Vec<String>, name: &str) {
    if !names.iter().any(|n| n == name) {
        names.push(name.to_string());
    }
}

/// Attribute names used by `language` across all categories, in category
/// order and then position order (particular when the language has its own
/// tables).
pub fn language_attribute_names(spec: &Specification, language: &str) -> Vec<String> {
    let mut names = Vec::new();
    match spec.section(language) {
        Some(section) => {
            for table in &section.tables {
                for attr in &table.attributes {
                    push_unique(&mut names, &attr.name);
                }
            }
        }
        None => {
            for cat in &spec.categories {
                for attr in &cat.attributes {
                    if attr.values.iter().any(|v| v.languages.contains(language)) {
                        push_unique(&mut names, &attr.name);
                    }
                }
            }
        }
    }
    names
}

/// All attribute names of the common tables in first-appearance order.
pub fn universal_attribute_names(spec: &Specification) -> Vec<String> {
    let mut names = Vec::new();
    for cat in &spec.categories {
        for attr in &cat.attributes {
            push_unique(&mut names, &attr.name);
        }
    }
    names
}

impl Codec<'_> {
    /// Attributes of a category in display order: the language's particular
    /// order when it has a table for the category, common order otherwise.
    fn display_order(&self, fs: &FeatureStructure) -> Result<Vec<String>, CodecError> {
        let ordering = match self.spec.table(&fs.language, fs.category) {
            Some(_) => Ordering::Particular,
            None => Ordering::Common,
        };
        let layout = self.layout(&fs.language, fs.category, ordering)?;
        Ok(layout
            .slots
            .iter()
            .flatten()
            .map(|s| s.attr.name.clone())
            .collect())
    }

    /// Renders a feature structure in one of the expansion forms.
    pub fn expand_features(
        &self,
        fs: &FeatureStructure,
        form: ExpansionForm,
    ) -> Result<Expansion, CodecError> {
        let cat = self
            .spec
            .category(fs.category)
            .ok_or(CodecError::UnknownCategory(fs.category))?;
        let value_of = |name: &str| fs.get(name).unwrap_or(UNSET).to_string();
        let expansion = match form {
            ExpansionForm::Minimal | ExpansionForm::VerboseString => Expansion {
                category: cat.name.clone(),
                features: self
                    .display_order(fs)?
                    .into_iter()
                    .filter_map(|a| fs.get(&a).map(|v| (a.clone(), v.to_string())))
                    .collect(),
            },
            ExpansionForm::MinimalLocalised => {
                // unlocalised items fall back to their English names
                let table = self.spec.table(&fs.language, fs.category);
                let category = table
                    .and_then(|t| t.localised.as_ref())
                    .map_or_else(|| cat.name.clone(), |l| l.name.clone());
                let features = self
                    .display_order(fs)?
                    .into_iter()
                    .filter_map(|a| {
                        let value = fs.get(&a)?;
                        let pattr = table.and_then(|t| t.attribute(&a));
                        let attr_name = pattr
                            .and_then(|p| p.localised_name.clone())
                            .unwrap_or_else(|| a.clone());
                        let value_name = pattr
                            .and_then(|p| p.value_by_name(value))
                            .and_then(|v| v.localised.as_ref())
                            .map_or_else(|| value.to_string(), |l| l.name.clone());
                        Some((attr_name, value_name))
                    })
                    .collect();
                Expansion { category, features }
            }
            ExpansionForm::CanonicalLanguage => Expansion {
                category: cat.name.clone(),
                features: language_attribute_names(self.spec, &fs.language)
                    .into_iter()
                    .map(|a| {
                        let v = value_of(&a);
                        (a, v)
                    })
                    .collect(),
            },
            ExpansionForm::CanonicalUniversal => Expansion {
                category: cat.name.clone(),
                features: universal_attribute_names(self.spec)
                    .into_iter()
                    .map(|a| {
                        let v = value_of(&a);
                        (a, v)
                    })
                    .collect(),
            },
        };
        Ok(expansion)
    }

    /// Decodes an MSD and renders it in one of the expansion forms.
    pub fn expand(&self, msd: &Msd, form: ExpansionForm) -> Result<Expansion, CodecError> {
        let fs = self.decode(msd)?;
        self.expand_features(&fs, form)
    }
}
