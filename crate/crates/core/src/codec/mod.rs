//! Conversion between MSD strings and feature structures.
//!
//! An MSD is read position by position: position 0 holds the category code,
//! position `p` the code of the value of whichever attribute sits at `p`
//! under the MSD's ordering. `-` marks a non-applicable attribute, and
//! canonical MSDs never end in `-`.
//!
//! The same feature structure has several surface forms. With the common
//! ordering the positions come from the common tables; with the particular
//! ordering from the language's own table. Either may use English or
//! localised codes:
//!
//! ```
//! # use mtekit::fixtures::sample_spec;
//! use mtekit::codec::{Codec, Msd};
//! use mtekit::spec::Ordering;
//!
//! let spec = sample_spec();
//! let codec = Codec::new(&spec);
//! let fs = codec.decode(&Msd::new("Vmn-----------e", "sl", Ordering::Common)).unwrap();
//! assert_eq!(codec.encode(&fs, Ordering::Particular, false).unwrap().text, "Vmen");
//! assert_eq!(codec.encode(&fs, Ordering::Particular, true).unwrap().text, "Ggdn");
//! ```

mod expand;

use std::collections::BTreeMap;
use std::fmt;

use crate::spec::{Attribute, CategoryTable, Ordering, ParticularAttribute, Specification};

pub use expand::{Expansion, ExpansionForm};

/// An MSD string together with the context needed to read it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Msd {
    pub text: String,
    pub language: String,
    pub ordering: Ordering,
    /// Codes are the language's localised ones rather than English.
    pub localised: bool,
}

impl Msd {
    pub fn new(text: impl Into<String>, language: impl Into<String>, ordering: Ordering) -> Self {
        Msd {
            text: text.into(),
            language: language.into(),
            ordering,
            localised: false,
        }
    }

    pub fn localised(mut self, localised: bool) -> Self {
        self.localised = localised;
        self
    }

    /// Reads `lang:MSD` (a language-prefixed MSD as used in mixed-language
    /// files) or a bare MSD in `default_language`.
    pub fn from_prefixed(line: &str, default_language: &str, ordering: Ordering) -> Self {
        if let Some((lang, msd)) = line.split_once(':') {
            if let Some(lang) = crate::spec::normalise_language(lang) {
                return Msd::new(msd, lang, ordering);
            }
        }
        Msd::new(line, default_language, ordering)
    }
}

impl fmt::Display for Msd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// The logical form of an analysis: a category and the instantiated
/// attributes. Non-applicable attributes are absent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureStructure {
    pub language: String,
    /// English category code.
    pub category: char,
    /// Attribute name to value name, English.
    pub assignments: BTreeMap<String, String>,
}

impl FeatureStructure {
    pub fn new(language: impl Into<String>, category: char) -> Self {
        FeatureStructure {
            language: language.into(),
            category,
            assignments: BTreeMap::new(),
        }
    }

    pub fn with(mut self, attribute: &str, value: &str) -> Self {
        self.assignments
            .insert(attribute.to_string(), value.to_string());
        self
    }

    pub fn get(&self, attribute: &str) -> Option<&str> {
        self.assignments.get(attribute).map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodeMode {
    /// Rejects trailing hyphens and over-long strings.
    #[default]
    Canonical,
    /// Accepts legacy MSDs written with trailing hyphens up to (or beyond)
    /// the declared positions.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("empty MSD")]
    Empty,
    #[error("unknown language `{0}`")]
    UnknownLanguage(String),
    #[error("unknown category `{0}`")]
    UnknownCategory(char),
    #[error("unknown category name `{0}`")]
    UnknownCategoryName(String),
    #[error("category `{category}` is not used by language `{language}`")]
    CategoryNotForLanguage { category: char, language: String },
    #[error("language `{language}` has no particular table for category `{category}`")]
    NoParticularTable { language: String, category: char },
    #[error("non-canonical trailing hyphens")]
    TrailingHyphens,
    #[error("MSD has {len} positions but at most {max} are declared")]
    TooLong { len: usize, max: usize },
    #[error("no attribute is declared at position {position}")]
    NoAttributeAt { position: usize },
    #[error("invalid value code `{code}` at position {position} ({attribute})")]
    InvalidValueCode {
        position: usize,
        code: char,
        attribute: String,
    },
    #[error("value code `{code}` at position {position} ({attribute}) is not valid for `{language}`")]
    ValueNotForLanguage {
        position: usize,
        code: char,
        attribute: String,
        language: String,
    },
    #[error("attribute `{attribute}` is not defined for `{category}` under the {ordering} ordering")]
    AttributeNotInOrdering {
        attribute: String,
        category: char,
        ordering: Ordering,
    },
    #[error("`{value}` is not a value of `{attribute}` for `{language}`")]
    UnknownValue {
        attribute: String,
        value: String,
        language: String,
    },
    #[error("no localised code for {0}")]
    MissingLocalisation(String),
    #[error("malformed feature `{0}`, expected Attribute=value")]
    MalformedFeature(String),
}

/// What sits at one MSD position.
#[derive(Clone, Copy)]
pub(crate) struct SlotRef<'a> {
    pub attr: &'a Attribute,
    pub particular: Option<&'a ParticularAttribute>,
}

/// Positions of one category under one ordering, for one language.
pub(crate) struct Layout<'a> {
    pub table: Option<&'a CategoryTable>,
    /// Index `p - 1` holds position `p`.
    pub slots: Vec<Option<SlotRef<'a>>>,
}

impl<'a> Layout<'a> {
    pub fn position_of(&self, attribute: &str) -> Option<usize> {
        self.slots
            .iter()
            .position(|s| s.is_some_and(|s| s.attr.name == attribute))
            .map(|i| i + 1)
    }

    pub fn slot(&self, position: usize) -> Option<SlotRef<'a>> {
        self.slots.get(position.checked_sub(1)?).copied().flatten()
    }
}

/// MSD conversions over one specification.
#[derive(Clone, Copy)]
pub struct Codec<'a> {
    spec: &'a Specification,
    mode: DecodeMode,
}

impl<'a> Codec<'a> {
    pub fn new(spec: &'a Specification) -> Self {
        Codec {
            spec,
            mode: DecodeMode::Canonical,
        }
    }

    pub fn with_mode(spec: &'a Specification, mode: DecodeMode) -> Self {
        Codec { spec, mode }
    }

    pub fn spec(&self) -> &'a Specification {
        self.spec
    }

    pub fn mode(&self) -> DecodeMode {
        self.mode
    }

    pub(crate) fn layout(
        &self,
        language: &str,
        category: char,
        ordering: Ordering,
    ) -> Result<Layout<'a>, CodecError> {
        if !self.spec.languages.contains(language) {
            return Err(CodecError::UnknownLanguage(language.to_string()));
        }
        let cat = self
            .spec
            .category(category)
            .ok_or(CodecError::UnknownCategory(category))?;
        if !self.spec.language_uses_category(language, category) {
            return Err(CodecError::CategoryNotForLanguage {
                category,
                language: language.to_string(),
            });
        }
        let table = self.spec.table(language, category);
        let slots = match ordering {
            Ordering::Common => {
                let mut slots = vec![None; cat.max_position()];
                for attr in &cat.attributes {
                    slots[attr.common_position - 1] = Some(SlotRef {
                        attr,
                        particular: table.and_then(|t| t.attribute(&attr.name)),
                    });
                }
                slots
            }
            Ordering::Particular => {
                let table = table.ok_or_else(|| CodecError::NoParticularTable {
                    language: language.to_string(),
                    category,
                })?;
                let mut slots = vec![None; table.max_position()];
                for pattr in &table.attributes {
                    // the loader guarantees the common attribute exists
                    if let Some(attr) = cat.attribute(&pattr.name) {
                        slots[pattr.position - 1] = Some(SlotRef {
                            attr,
                            particular: Some(pattr),
                        });
                    }
                }
                slots
            }
        };
        Ok(Layout {
            table,
            slots,
        })
    }

    fn resolve_category(&self, msd: &Msd, first: char) -> Result<char, CodecError> {
        if !msd.localised {
            return Ok(first);
        }
        let section = self
            .spec
            .section(&msd.language)
            .ok_or_else(|| CodecError::MissingLocalisation(format!("language `{}`", msd.language)))?;
        section
            .table_by_localised_code(first)
            .map(|t| t.code)
            .ok_or(CodecError::UnknownCategory(first))
    }

    /// Reads an MSD into its feature structure.
    pub fn decode(&self, msd: &Msd) -> Result<FeatureStructure, CodecError> {
        let mut chars = msd.text.chars();
        let first = chars.next().ok_or(CodecError::Empty)?;
        let rest: Vec<char> = chars.collect();
        let category = self.resolve_category(msd, first)?;
        let layout = self.layout(&msd.language, category, msd.ordering)?;
        let max = layout.slots.len();

        if self.mode == DecodeMode::Canonical {
            if rest.last() == Some(&'-') {
                return Err(CodecError::TrailingHyphens);
            }
            if rest.len() > max {
                return Err(CodecError::TooLong {
                    len: rest.len(),
                    max,
                });
            }
        }

        let mut fs = FeatureStructure::new(msd.language.clone(), category);
        for (i, &code) in rest.iter().enumerate() {
            let position = i + 1;
            if code == '-' {
                continue;
            }
            if position > max {
                return Err(CodecError::TooLong {
                    len: rest.len(),
                    max,
                });
            }
            let slot = layout
                .slot(position)
                .ok_or(CodecError::NoAttributeAt { position })?;
            let value = self.read_value(msd, slot, position, code)?;
            fs.assignments.insert(slot.attr.name.clone(), value);
        }
        Ok(fs)
    }

    fn read_value(
        &self,
        msd: &Msd,
        slot: SlotRef<'_>,
        position: usize,
        code: char,
    ) -> Result<String, CodecError> {
        let attribute = slot.attr.name.clone();
        let not_for_language = || CodecError::ValueNotForLanguage {
            position,
            code,
            attribute: attribute.clone(),
            language: msd.language.clone(),
        };
        let english = if msd.localised {
            let pattr = slot.particular.ok_or_else(|| {
                CodecError::MissingLocalisation(format!("attribute `{}`", slot.attr.name))
            })?;
            pattr
                .value_by_localised_code(code)
                .map(|v| v.code)
                .ok_or_else(|| CodecError::InvalidValueCode {
                    position,
                    code,
                    attribute: attribute.clone(),
                })?
        } else {
            code
        };
        let value = slot
            .attr
            .value_by_code(english)
            .ok_or_else(|| CodecError::InvalidValueCode {
                position,
                code,
                attribute: attribute.clone(),
            })?;
        let allowed = match (msd.ordering, slot.particular) {
            (Ordering::Particular, Some(p)) => p.value_by_code(english).is_some(),
            _ => value.languages.contains(&msd.language),
        };
        if !allowed {
            return Err(not_for_language());
        }
        Ok(value.name.clone())
    }

    /// Writes a feature structure as a canonical MSD.
    pub fn encode(
        &self,
        fs: &FeatureStructure,
        ordering: Ordering,
        localise: bool,
    ) -> Result<Msd, CodecError> {
        let layout = self.layout(&fs.language, fs.category, ordering)?;
        let mut codes: Vec<char> = Vec::new();
        for (attribute, value_name) in &fs.assignments {
            let position =
                layout
                    .position_of(attribute)
                    .ok_or_else(|| CodecError::AttributeNotInOrdering {
                        attribute: attribute.clone(),
                        category: fs.category,
                        ordering,
                    })?;
            let slot = layout.slot(position).expect("position from layout");
            let unknown = || CodecError::UnknownValue {
                attribute: attribute.clone(),
                value: value_name.clone(),
                language: fs.language.clone(),
            };
            let value = slot.attr.value_by_name(value_name).ok_or_else(unknown)?;
            let listed = match (ordering, slot.particular) {
                (Ordering::Particular, Some(p)) => p.value_by_code(value.code).is_some(),
                _ => value.languages.contains(&fs.language),
            };
            if !listed {
                return Err(unknown());
            }
            let code = if localise {
                slot.particular
                    .and_then(|p| p.value_by_code(value.code))
                    .and_then(|v| v.localised.as_ref())
                    .map(|l| l.code)
                    .ok_or_else(|| {
                        CodecError::MissingLocalisation(format!(
                            "{}/{}={}",
                            fs.category, attribute, value_name
                        ))
                    })?
            } else {
                value.code
            };
            if codes.len() < position {
                codes.resize(position, '-');
            }
            codes[position - 1] = code;
        }
        let head = if localise {
            layout
                .table
                .and_then(|t| t.localised.as_ref())
                .map(|l| l.code)
                .ok_or_else(|| CodecError::MissingLocalisation(format!("category `{}`", fs.category)))?
        } else {
            fs.category
        };
        let mut text = String::with_capacity(codes.len() + 1);
        text.push(head);
        text.extend(codes);
        Ok(Msd {
            text,
            language: fs.language.clone(),
            ordering,
            localised: localise,
        })
    }

    /// Re-writes an MSD with English or native codes, keeping its ordering.
    pub fn relocalise(&self, msd: &Msd, native: bool) -> Result<Msd, CodecError> {
        let fs = self.decode(msd)?;
        self.encode(&fs, msd.ordering, native)
    }

    /// Canonical form of an MSD: decoded and re-encoded in its own context.
    pub fn normalise(&self, msd: &Msd) -> Result<Msd, CodecError> {
        let fs = self.decode(msd)?;
        self.encode(&fs, msd.ordering, msd.localised)
    }

    /// Sort key following the order of categories, positions and values in
    /// the specification. Non-applicable positions sort before any value.
    pub fn collation_key(&self, msd: &Msd) -> Result<CollationKey, CodecError> {
        let fs = self.decode(msd)?;
        let layout = self.layout(&fs.language, fs.category, msd.ordering)?;
        let rank = self
            .spec
            .category_rank(fs.category)
            .expect("decoded category exists") as u32;
        let mut key = vec![rank];
        for slot in &layout.slots {
            let r = slot
                .and_then(|s| {
                    let value = fs.get(&s.attr.name)?;
                    s.attr.value_rank(value)
                })
                .map_or(0, |r| r as u32 + 1);
            key.push(r);
        }
        while key.len() > 1 && key.last() == Some(&0) {
            key.pop();
        }
        Ok(CollationKey(key))
    }

    /// Sorts MSDs by their collation keys; undecodable MSDs follow, in
    /// string order.
    pub fn sort(&self, msds: &[Msd]) -> Vec<Msd> {
        let mut keyed: Vec<(Option<CollationKey>, &Msd)> = msds
            .iter()
            .map(|m| (self.collation_key(m).ok(), m))
            .collect();
        keyed.sort_by(|(ka, a), (kb, b)| match (ka, kb) {
            (Some(x), Some(y)) => x.cmp(y).then_with(|| a.text.cmp(&b.text)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.text.cmp(&b.text),
        });
        keyed.into_iter().map(|(_, m)| m.clone()).collect()
    }

    /// Classifies every string of an MSD list.
    pub fn validate_list<S: AsRef<str>>(
        &self,
        msds: &[S],
        language: &str,
        ordering: Ordering,
        localised: bool,
    ) -> Vec<MsdVerdict> {
        msds.iter()
            .map(|raw| {
                let msd = Msd::new(raw.as_ref(), language, ordering).localised(localised);
                MsdVerdict {
                    input: raw.as_ref().to_string(),
                    outcome: self.normalise(&msd).map(|m| m.text),
                }
            })
            .collect()
    }

    /// Parses a listing such as `Verb Type=main Aspect=perfective` (English
    /// names) into a feature structure.
    pub fn parse_listing(&self, language: &str, text: &str) -> Result<FeatureStructure, CodecError> {
        let mut parts = text.split_whitespace();
        let head = parts.next().ok_or(CodecError::Empty)?;
        let category = self
            .spec
            .categories
            .iter()
            .find(|c| c.name == head)
            .ok_or_else(|| CodecError::UnknownCategoryName(head.to_string()))?;
        let mut fs = FeatureStructure::new(language, category.code);
        for part in parts {
            let part = part.trim_end_matches(',');
            let (attr, value) = part
                .split_once('=')
                .filter(|(a, v)| !a.is_empty() && !v.is_empty())
                .ok_or_else(|| CodecError::MalformedFeature(part.to_string()))?;
            fs.assignments.insert(attr.to_string(), value.to_string());
        }
        Ok(fs)
    }
}

/// Ordering key for MSDs: category rank followed by one rank per position,
/// 0 for non-applicable and `1 + value rank` otherwise, trailing zeros
/// trimmed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CollationKey(pub Vec<u32>);

impl fmt::Display for CollationKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| format!("{n:03}")).collect();
        f.write_str(&parts.join("."))
    }
}

/// Outcome of validating one MSD string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsdVerdict {
    pub input: String,
    /// The canonical form, or why the string is not a valid MSD.
    pub outcome: Result<String, CodecError>,
}

impl fmt::Display for MsdVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Ok(canonical) => write!(f, "valid\t{}\t{}", self.input, canonical),
            Err(e) => write!(f, "invalid\t{}\t{}", self.input, e),
        }
    }
}

/// Derived text shown next to an MSD in an index row.
pub(crate) struct IndexRenderings {
    pub verbose: String,
    /// Localised MSD and localised expansion.
    pub localised: Option<(String, String)>,
}

pub(crate) fn index_renderings(
    spec: &Specification,
    language: &str,
    msd: &str,
) -> Option<IndexRenderings> {
    let codec = Codec::new(spec);
    let msd = Msd::new(msd, language, spec.native_ordering(language));
    let verbose = codec.expand(&msd, ExpansionForm::Minimal).ok()?.to_string();
    let localised = spec
        .section(language)
        .filter(|s| s.is_localised())
        .and_then(|_| {
            let local = codec.relocalise(&msd, true).ok()?;
            let expansion = codec.expand(&msd, ExpansionForm::MinimalLocalised).ok()?;
            Some((local.text, expansion.to_string()))
        });
    Some(IndexRenderings { verbose, localised })
}
