//! In-memory model of a morphosyntactic specification.
//!
//! A [`Specification`] holds the common tables (categories, their attributes
//! and values, each value flagged with the languages it applies to) and one
//! [`LanguageSection`] per described language. A section re-states the subset
//! of attributes a language uses, optionally re-numbers their MSD positions,
//! carries localised names and codes, and lists the valid MSDs of the
//! language.
//!
//! Specifications are built once by [`load_spec`] and are immutable after
//! that.

mod builder;
mod check;
mod tabular;
mod tei;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

pub use check::{lookup, position_of, spec_stats, CategoryStats, LookupError, Slot};
pub use tabular::{emit_tabular, emit_tabular_section, parse_tabular, parse_tabular_section};
pub(crate) use tabular::format_examples;
pub(crate) use tei::emit_index_row;
pub use tei::{emit_tei, emit_tei_section, parse_tei, parse_tei_section};

/// Name of the pseudo-attribute occupying position 0.
pub const CATEGORY_ATTRIBUTE: &str = "CATEGORY";

/// Serialisations a specification can be read from and written to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecFormat {
    Tabular,
    Tei,
}

impl FromStr for SpecFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tabular" => Ok(SpecFormat::Tabular),
            "tei" | "tei-tables" => Ok(SpecFormat::Tei),
            other => Err(format!("unknown specification format `{other}`")),
        }
    }
}

/// Which attribute numbering an MSD string follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ordering {
    /// Positions from the common tables, shared by all languages.
    Common,
    /// Positions re-specified in a language section.
    Particular,
}

impl FromStr for Ordering {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "common" => Ok(Ordering::Common),
            "particular" => Ok(Ordering::Particular),
            other => Err(format!("unknown ordering `{other}`")),
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Common => "common",
            Ordering::Particular => "particular",
        })
    }
}

/// A localised name together with its localised code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Localised {
    pub name: String,
    pub code: char,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Specification {
    pub categories: Vec<Category>,
    pub languages: BTreeSet<String>,
    pub sections: BTreeMap<String, LanguageSection>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    pub code: char,
    pub name: String,
    /// Sorted by ascending `common_position`.
    pub attributes: Vec<Attribute>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub common_position: usize,
    pub values: Vec<AttrValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrValue {
    pub name: String,
    pub code: char,
    pub languages: BTreeSet<String>,
}

/// The language-particular part of a specification.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LanguageSection {
    pub language: String,
    /// In common category order.
    pub tables: Vec<CategoryTable>,
    pub msd_index: Vec<MsdIndexEntry>,
    /// Combination constraints, kept verbatim and never evaluated.
    pub constraints: Vec<String>,
}

/// One category as described for a single language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryTable {
    pub code: char,
    pub localised: Option<Localised>,
    /// Sorted by ascending particular `position`.
    pub attributes: Vec<ParticularAttribute>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticularAttribute {
    pub position: usize,
    pub name: String,
    pub localised_name: Option<String>,
    pub values: Vec<ParticularValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticularValue {
    /// English code, as in the common tables.
    pub code: char,
    pub name: String,
    pub localised: Option<Localised>,
}

/// A row of a language's MSD index.
///
/// The verbose expansions and the localised MSD shown next to the MSD in
/// rendered indexes are derived from the specification on output and are
/// therefore not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsdIndexEntry {
    pub msd: String,
    pub token_count: Option<u64>,
    pub type_count: Option<u64>,
    /// `(word-form, lemma)` pairs.
    pub examples: Vec<(String, String)>,
}

impl MsdIndexEntry {
    pub fn bare(msd: impl Into<String>) -> Self {
        MsdIndexEntry {
            msd: msd.into(),
            token_count: None,
            type_count: None,
            examples: Vec::new(),
        }
    }
}

/// Location of a problem inside a specification source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{location}: {message}")]
    Syntax {
        location: SourceLocation,
        message: String,
    },
    #[error("xml: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl SpecError {
    pub(crate) fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        SpecError::Syntax {
            location: SourceLocation { line, column },
            message: message.into(),
        }
    }
}

/// Reads a complete specification from `source`.
pub fn load_spec(source: &str, format: SpecFormat) -> Result<Specification, SpecError> {
    match format {
        SpecFormat::Tabular => parse_tabular(source),
        SpecFormat::Tei => parse_tei(source),
    }
}

/// Reads a stand-alone language section (no common tables).
///
/// The section is not checked against any common tables; that is the job of
/// [`crate::ops::merge`].
pub fn load_section(source: &str, format: SpecFormat) -> Result<LanguageSection, SpecError> {
    match format {
        SpecFormat::Tabular => parse_tabular_section(source),
        SpecFormat::Tei => parse_tei_section(source),
    }
}

/// Writes a specification in the given format.
pub fn emit_spec(spec: &Specification, format: SpecFormat) -> String {
    match format {
        SpecFormat::Tabular => emit_tabular(spec),
        SpecFormat::Tei => emit_tei(spec),
    }
}

/// Writes a stand-alone language section in the given format.
pub fn emit_language_section(section: &LanguageSection, format: SpecFormat) -> String {
    match format {
        SpecFormat::Tabular => emit_tabular_section(section),
        SpecFormat::Tei => emit_tei_section(section),
    }
}

/// Lowercases a language code and checks its shape (2 or 3 ASCII letters).
pub fn normalise_language(code: &str) -> Option<String> {
    let lower = code.trim().to_ascii_lowercase();
    let ok = (2..=3).contains(&lower.len()) && lower.bytes().all(|b| b.is_ascii_lowercase());
    ok.then_some(lower)
}

impl Specification {
    pub fn category(&self, code: char) -> Option<&Category> {
        self.categories.iter().find(|c| c.code == code)
    }

    /// Rank of a category in the specification's category order.
    pub fn category_rank(&self, code: char) -> Option<usize> {
        self.categories.iter().position(|c| c.code == code)
    }

    pub fn section(&self, language: &str) -> Option<&LanguageSection> {
        self.sections.get(language)
    }

    pub fn table(&self, language: &str, category: char) -> Option<&CategoryTable> {
        self.section(language)?.table(category)
    }

    /// The ordering MSDs of `language` are written in by default: particular
    /// when the language has its own section, common otherwise.
    pub fn native_ordering(&self, language: &str) -> Ordering {
        if self.sections.contains_key(language) {
            Ordering::Particular
        } else {
            Ordering::Common
        }
    }

    /// Languages that use a category: those flagged on any of its values plus
    /// those whose section declares a table for it.
    pub fn category_languages(&self, code: char) -> BTreeSet<String> {
        let mut langs = BTreeSet::new();
        if let Some(cat) = self.category(code) {
            for attr in &cat.attributes {
                for value in &attr.values {
                    langs.extend(value.languages.iter().cloned());
                }
            }
        }
        for (lang, section) in &self.sections {
            if section.table(code).is_some() {
                langs.insert(lang.clone());
            }
        }
        langs
    }

    /// Whether `language` uses `category` at all.
    pub fn language_uses_category(&self, language: &str, category: char) -> bool {
        if let Some(section) = self.section(language) {
            return section.table(category).is_some();
        }
        self.category(category).is_some_and(|cat| {
            cat.attributes
                .iter()
                .flat_map(|a| &a.values)
                .any(|v| v.languages.contains(language))
        })
    }
}

impl Category {
    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn attribute_at(&self, position: usize) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.common_position == position)
    }

    pub fn max_position(&self) -> usize {
        self.attributes
            .iter()
            .map(|a| a.common_position)
            .max()
            .unwrap_or(0)
    }
}

impl Attribute {
    pub fn value_by_code(&self, code: char) -> Option<&AttrValue> {
        self.values.iter().find(|v| v.code == code)
    }

    pub fn value_by_name(&self, name: &str) -> Option<&AttrValue> {
        self.values.iter().find(|v| v.name == name)
    }

    /// Rank of a value in the listed value order.
    pub fn value_rank(&self, name: &str) -> Option<usize> {
        self.values.iter().position(|v| v.name == name)
    }
}

impl LanguageSection {
    pub fn new(language: impl Into<String>) -> Self {
        LanguageSection {
            language: language.into(),
            ..Default::default()
        }
    }

    pub fn table(&self, category: char) -> Option<&CategoryTable> {
        self.tables.iter().find(|t| t.code == category)
    }

    /// Finds a table by its localised category code.
    pub fn table_by_localised_code(&self, code: char) -> Option<&CategoryTable> {
        self.tables
            .iter()
            .find(|t| t.localised.as_ref().is_some_and(|l| l.code == code))
    }

    pub fn index_entry(&self, msd: &str) -> Option<&MsdIndexEntry> {
        self.msd_index.iter().find(|e| e.msd == msd)
    }

    /// Whether any item of the section carries localisation data.
    pub fn is_localised(&self) -> bool {
        self.tables.iter().any(|t| {
            t.localised.is_some()
                || t.attributes.iter().any(|a| {
                    a.localised_name.is_some() || a.values.iter().any(|v| v.localised.is_some())
                })
        })
    }
}

impl CategoryTable {
    pub fn attribute(&self, name: &str) -> Option<&ParticularAttribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn attribute_at(&self, position: usize) -> Option<&ParticularAttribute> {
        self.attributes.iter().find(|a| a.position == position)
    }

    pub fn max_position(&self) -> usize {
        self.attributes.iter().map(|a| a.position).max().unwrap_or(0)
    }
}

impl ParticularAttribute {
    pub fn value_by_code(&self, code: char) -> Option<&ParticularValue> {
        self.values.iter().find(|v| v.code == code)
    }

    pub fn value_by_localised_code(&self, code: char) -> Option<&ParticularValue> {
        self.values
            .iter()
            .find(|v| v.localised.as_ref().is_some_and(|l| l.code == code))
    }

    pub fn value_by_name(&self, name: &str) -> Option<&ParticularValue> {
        self.values.iter().find(|v| v.name == name)
    }
}
