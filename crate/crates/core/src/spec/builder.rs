//! Incremental construction of a [`Specification`] shared by both parsers.
//!
//! Parsers feed items in source order together with their source location;
//! the builder enforces the structural invariants and reports violations at
//! the offending location.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    normalise_language, AttrValue, Attribute, Category, CategoryTable, LanguageSection, Localised,
    MsdIndexEntry, ParticularAttribute, ParticularValue, SourceLocation, SpecError, Specification,
};

pub(crate) type Loc = SourceLocation;

fn err(loc: &Loc, message: impl Into<String>) -> SpecError {
    SpecError::at(loc.line, loc.column, message)
}

pub(crate) fn parse_category_code(raw: &str, loc: &Loc) -> Result<char, SpecError> {
    let mut chars = raw.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_uppercase() => Ok(c),
        _ => Err(err(
            loc,
            format!("category code `{raw}` must be a single uppercase letter"),
        )),
    }
}

pub(crate) fn parse_value_code(raw: &str, loc: &Loc) -> Result<char, SpecError> {
    let mut chars = raw.chars();
    match (chars.next(), chars.next()) {
        (Some('-'), None) => Err(err(loc, "`-` is reserved for non-applicable positions")),
        (Some(c), None) if !c.is_whitespace() => Ok(c),
        _ => Err(err(loc, format!("code `{raw}` must be a single character"))),
    }
}

pub(crate) fn parse_position(raw: &str, loc: &Loc) -> Result<usize, SpecError> {
    raw.trim()
        .parse::<usize>()
        .map_err(|_| err(loc, format!("position `{raw}` is not a non-negative integer")))
}

pub(crate) fn parse_language(raw: &str, loc: &Loc) -> Result<String, SpecError> {
    normalise_language(raw).ok_or_else(|| err(loc, format!("malformed language code `{raw}`")))
}

#[derive(Default)]
pub(crate) struct SpecBuilder {
    declared_languages: Option<BTreeSet<String>>,
    categories: Vec<Category>,
    sections: BTreeMap<String, LanguageSection>,
    current_section: Option<String>,
    // locations for deferred cross-checks
    flag_locs: Vec<(String, Loc)>,
    section_attr_locs: BTreeMap<(String, char, String), Loc>,
    section_value_locs: BTreeMap<(String, char, String, char), Loc>,
    section_locs: BTreeMap<String, Loc>,
}

impl SpecBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_languages<'a>(
        &mut self,
        langs: impl IntoIterator<Item = &'a str>,
        loc: &Loc,
    ) -> Result<(), SpecError> {
        let set = self.declared_languages.get_or_insert_with(BTreeSet::new);
        for raw in langs {
            set.insert(parse_language(raw, loc)?);
        }
        Ok(())
    }

    pub fn category(&mut self, code: &str, name: &str, loc: &Loc) -> Result<(), SpecError> {
        let code = parse_category_code(code, loc)?;
        if self.categories.iter().any(|c| c.code == code) {
            return Err(err(loc, format!("duplicate category code `{code}`")));
        }
        if name.is_empty() {
            return Err(err(loc, "category without a name"));
        }
        self.current_section = None;
        self.categories.push(Category {
            code,
            name: name.to_string(),
            attributes: Vec::new(),
        });
        Ok(())
    }

    pub fn attribute(&mut self, position: &str, name: &str, loc: &Loc) -> Result<(), SpecError> {
        let position = parse_position(position, loc)?;
        if position == 0 {
            return Err(err(loc, "position 0 is reserved for the category"));
        }
        let cat = self
            .categories
            .last_mut()
            .ok_or_else(|| err(loc, "attribute outside of a category"))?;
        if cat.attributes.iter().any(|a| a.name == name) {
            return Err(err(loc, format!("duplicate attribute `{name}` in {}", cat.code)));
        }
        if cat.attributes.iter().any(|a| a.common_position == position) {
            return Err(err(
                loc,
                format!("duplicate position {position} in category {}", cat.code),
            ));
        }
        cat.attributes.push(Attribute {
            name: name.to_string(),
            common_position: position,
            values: Vec::new(),
        });
        Ok(())
    }

    pub fn value<'a>(
        &mut self,
        code: &str,
        name: &str,
        langs: impl IntoIterator<Item = &'a str>,
        loc: &Loc,
    ) -> Result<(), SpecError> {
        let code = parse_value_code(code, loc)?;
        let mut languages = BTreeSet::new();
        for raw in langs {
            let lang = parse_language(raw, loc)?;
            self.flag_locs.push((lang.clone(), loc.clone()));
            languages.insert(lang);
        }
        if languages.is_empty() {
            return Err(err(loc, format!("value `{name}` is not flagged for any language")));
        }
        let attr = self
            .categories
            .last_mut()
            .and_then(|c| c.attributes.last_mut())
            .ok_or_else(|| err(loc, "value outside of an attribute"))?;
        if attr.values.iter().any(|v| v.code == code) {
            return Err(err(
                loc,
                format!("duplicate value code `{code}` in attribute {}", attr.name),
            ));
        }
        if attr.values.iter().any(|v| v.name == name) {
            return Err(err(
                loc,
                format!("duplicate value `{name}` in attribute {}", attr.name),
            ));
        }
        attr.values.push(AttrValue {
            name: name.to_string(),
            code,
            languages,
        });
        Ok(())
    }

    pub fn section(&mut self, lang: &str, loc: &Loc) -> Result<(), SpecError> {
        let lang = parse_language(lang, loc)?;
        if self.sections.contains_key(&lang) {
            return Err(err(loc, format!("duplicate section for language `{lang}`")));
        }
        self.section_locs.insert(lang.clone(), loc.clone());
        self.sections
            .insert(lang.clone(), LanguageSection::new(lang.clone()));
        self.current_section = Some(lang);
        Ok(())
    }

    fn current_section(&mut self, loc: &Loc) -> Result<&mut LanguageSection, SpecError> {
        let lang = self
            .current_section
            .clone()
            .ok_or_else(|| err(loc, "language-section item outside of a section"))?;
        Ok(self.sections.get_mut(&lang).expect("section registered"))
    }

    pub fn section_category(
        &mut self,
        code: &str,
        localised: Option<(&str, &str)>,
        loc: &Loc,
    ) -> Result<(), SpecError> {
        let code = parse_category_code(code, loc)?;
        let localised = match localised {
            Some((name, lcode)) => Some(Localised {
                name: name.to_string(),
                code: parse_category_code(lcode, loc)?,
            }),
            None => None,
        };
        let section = self.current_section(loc)?;
        if section.table(code).is_some() {
            return Err(err(loc, format!("duplicate table for category `{code}`")));
        }
        if let Some(l) = &localised {
            if section.table_by_localised_code(l.code).is_some() {
                return Err(err(loc, format!("duplicate localised category code `{}`", l.code)));
            }
        }
        section.tables.push(CategoryTable {
            code,
            localised,
            attributes: Vec::new(),
        });
        Ok(())
    }

    pub fn section_attribute(
        &mut self,
        position: &str,
        name: &str,
        localised_name: Option<&str>,
        loc: &Loc,
    ) -> Result<(), SpecError> {
        let position = parse_position(position, loc)?;
        if position == 0 {
            return Err(err(loc, "position 0 is reserved for the category"));
        }
        let section = self.current_section(loc)?;
        let lang = section.language.clone();
        let table = section
            .tables
            .last_mut()
            .ok_or_else(|| err(loc, "attribute outside of a category table"))?;
        if table.attributes.iter().any(|a| a.name == name) {
            return Err(err(loc, format!("duplicate attribute `{name}`")));
        }
        if table.attributes.iter().any(|a| a.position == position) {
            return Err(err(loc, format!("duplicate particular position {position}")));
        }
        let code = table.code;
        table.attributes.push(ParticularAttribute {
            position,
            name: name.to_string(),
            localised_name: localised_name.map(str::to_string),
            values: Vec::new(),
        });
        self.section_attr_locs
            .insert((lang, code, name.to_string()), loc.clone());
        Ok(())
    }

    pub fn section_value(
        &mut self,
        code: &str,
        name: &str,
        localised: Option<(&str, &str)>,
        loc: &Loc,
    ) -> Result<(), SpecError> {
        let code = parse_value_code(code, loc)?;
        let localised = match localised {
            Some((lname, lcode)) => Some(Localised {
                name: lname.to_string(),
                code: parse_value_code(lcode, loc)?,
            }),
            None => None,
        };
        let section = self.current_section(loc)?;
        let lang = section.language.clone();
        let table = section
            .tables
            .last_mut()
            .ok_or_else(|| err(loc, "value outside of a category table"))?;
        let cat = table.code;
        let attr = table
            .attributes
            .last_mut()
            .ok_or_else(|| err(loc, "value outside of an attribute"))?;
        if attr.values.iter().any(|v| v.code == code || v.name == name) {
            return Err(err(
                loc,
                format!("duplicate value `{name}`/`{code}` in attribute {}", attr.name),
            ));
        }
        if let Some(l) = &localised {
            if attr.value_by_localised_code(l.code).is_some() {
                return Err(err(
                    loc,
                    format!("duplicate localised code `{}` in attribute {}", l.code, attr.name),
                ));
            }
        }
        let attr_name = attr.name.clone();
        attr.values.push(ParticularValue {
            code,
            name: name.to_string(),
            localised,
        });
        self.section_value_locs
            .insert((lang, cat, attr_name, code), loc.clone());
        Ok(())
    }

    pub fn msd_row(&mut self, entry: MsdIndexEntry, loc: &Loc) -> Result<(), SpecError> {
        let section = self.current_section(loc)?;
        if section.index_entry(&entry.msd).is_some() {
            return Err(err(loc, format!("duplicate MSD index row `{}`", entry.msd)));
        }
        section.msd_index.push(entry);
        Ok(())
    }

    pub fn constraint(&mut self, text: &str, loc: &Loc) -> Result<(), SpecError> {
        self.current_section(loc)?.constraints.push(text.to_string());
        Ok(())
    }

    fn sort_sections(sections: &mut BTreeMap<String, LanguageSection>, order: &[char]) {
        for section in sections.values_mut() {
            for table in &mut section.tables {
                table.attributes.sort_by_key(|a| a.position);
            }
            section
                .tables
                .sort_by_key(|t| order.iter().position(|&c| c == t.code).unwrap_or(usize::MAX));
        }
    }

    /// Finishes a full specification, cross-checking sections against the
    /// common tables.
    pub fn finish(mut self) -> Result<Specification, SpecError> {
        for cat in &mut self.categories {
            cat.attributes.sort_by_key(|a| a.common_position);
        }
        let languages = match self.declared_languages {
            Some(declared) => {
                for (lang, loc) in &self.flag_locs {
                    if !declared.contains(lang) {
                        return Err(err(loc, format!("unknown language code `{lang}`")));
                    }
                }
                for (lang, loc) in &self.section_locs {
                    if !declared.contains(lang) {
                        return Err(err(loc, format!("unknown language code `{lang}`")));
                    }
                }
                declared
            }
            None => self
                .flag_locs
                .iter()
                .map(|(l, _)| l.clone())
                .chain(self.sections.keys().cloned())
                .collect(),
        };

        for section in self.sections.values() {
            let section_loc = &self.section_locs[&section.language];
            for table in &section.tables {
                let Some(cat) = self.categories.iter().find(|c| c.code == table.code) else {
                    return Err(err(
                        section_loc,
                        format!(
                            "section {} describes unknown category `{}`",
                            section.language, table.code
                        ),
                    ));
                };
                for pattr in &table.attributes {
                    let key = (section.language.clone(), table.code, pattr.name.clone());
                    let loc = &self.section_attr_locs[&key];
                    let Some(attr) = cat.attribute(&pattr.name) else {
                        return Err(err(
                            loc,
                            format!(
                                "attribute `{}` is not defined for category {} in the common tables",
                                pattr.name, cat.code
                            ),
                        ));
                    };
                    for pval in &pattr.values {
                        let vloc = &self.section_value_locs
                            [&(key.0.clone(), key.1, key.2.clone(), pval.code)];
                        match attr.value_by_code(pval.code) {
                            Some(v) if v.name == pval.name => {}
                            Some(v) => {
                                return Err(err(
                                    vloc,
                                    format!(
                                        "code `{}` of {}/{} names `{}` in the common tables, not `{}`",
                                        pval.code, cat.code, attr.name, v.name, pval.name
                                    ),
                                ))
                            }
                            None => {
                                return Err(err(
                                    vloc,
                                    format!(
                                        "value `{}`/`{}` is not defined for {}/{} in the common tables",
                                        pval.name, pval.code, cat.code, attr.name
                                    ),
                                ))
                            }
                        }
                    }
                }
            }
        }

        let order: Vec<char> = self.categories.iter().map(|c| c.code).collect();
        Self::sort_sections(&mut self.sections, &order);
        Ok(Specification {
            categories: self.categories,
            languages,
            sections: self.sections,
        })
    }

    /// Finishes a stand-alone section: exactly one section, no common tables.
    pub fn finish_section(mut self, loc: &Loc) -> Result<LanguageSection, SpecError> {
        if !self.categories.is_empty() {
            return Err(err(loc, "a section file must not contain common tables"));
        }
        if self.sections.len() != 1 {
            return Err(err(
                loc,
                format!("expected exactly one language section, found {}", self.sections.len()),
            ));
        }
        // no common order to follow: the stable sort keeps source table order
        Self::sort_sections(&mut self.sections, &[]);
        let (_, section) = self.sections.pop_first().expect("one section");
        Ok(section)
    }
}
