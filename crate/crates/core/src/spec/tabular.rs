//! The line-oriented authoring format.
//!
//! ```text
//! LANGUAGES en sl
//! CATEGORY N Noun
//! ATTR 1 Type
//! VAL c common en,sl
//! LANG-SECTION sl
//! CAT N samostalnik S
//! ATTR 1 Type vrsta
//! VAL c common občno_ime o
//! MSD Ncmsg 15945 2649 časa/čas,sveta/svet
//! CONSTRAINT free text kept verbatim
//! ```
//!
//! `LANGUAGES` is optional; without it the language set is the union of all
//! value flags and section languages.

use std::fmt::Write;

use super::builder::{Loc, SpecBuilder};
use super::{LanguageSection, MsdIndexEntry, SpecError, Specification};

pub fn parse_tabular(source: &str) -> Result<Specification, SpecError> {
    let mut builder = SpecBuilder::new();
    feed(source, &mut builder)?;
    builder.finish()
}

pub fn parse_tabular_section(source: &str) -> Result<LanguageSection, SpecError> {
    let mut builder = SpecBuilder::new();
    let last = feed(source, &mut builder)?;
    builder.finish_section(&last)
}

fn feed(source: &str, builder: &mut SpecBuilder) -> Result<Loc, SpecError> {
    let mut in_section = false;
    let mut last = Loc { line: 1, column: 1 };
    for (idx, raw) in source.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let loc = Loc {
            line: idx + 1,
            column: line.len() - trimmed.len() + 1,
        };
        last = loc.clone();
        let mut fields = trimmed.split_whitespace();
        let keyword = fields.next().unwrap_or_default();
        let args: Vec<&str> = fields.collect();
        let arity = |min: usize, max: usize| -> Result<(), SpecError> {
            if args.len() < min || args.len() > max {
                Err(SpecError::at(
                    loc.line,
                    loc.column,
                    format!("`{keyword}` takes {min}..={max} fields, found {}", args.len()),
                ))
            } else {
                Ok(())
            }
        };
        match keyword {
            "LANGUAGES" => {
                builder.declare_languages(
                    args.iter().flat_map(|a| a.split(',')).filter(|s| !s.is_empty()),
                    &loc,
                )?;
            }
            "CATEGORY" => {
                arity(2, 2)?;
                in_section = false;
                builder.category(args[0], args[1], &loc)?;
            }
            "ATTR" if !in_section => {
                arity(2, 2)?;
                builder.attribute(args[0], args[1], &loc)?;
            }
            "VAL" if !in_section => {
                arity(3, 3)?;
                builder.value(
                    args[0],
                    args[1],
                    args[2].split(',').filter(|s| !s.is_empty()),
                    &loc,
                )?;
            }
            "LANG-SECTION" => {
                arity(1, 1)?;
                in_section = true;
                builder.section(args[0], &loc)?;
            }
            "CAT" if in_section => {
                if args.len() == 2 {
                    return Err(SpecError::at(
                        loc.line,
                        loc.column,
                        "localised category needs both a name and a code",
                    ));
                }
                arity(1, 3)?;
                let localised = (args.len() == 3).then(|| (args[1], args[2]));
                builder.section_category(args[0], localised, &loc)?;
            }
            "ATTR" => {
                arity(2, 3)?;
                builder.section_attribute(args[0], args[1], args.get(2).copied(), &loc)?;
            }
            "VAL" => {
                if args.len() == 3 {
                    return Err(SpecError::at(
                        loc.line,
                        loc.column,
                        "localised value needs both a name and a code",
                    ));
                }
                arity(2, 4)?;
                let localised = (args.len() == 4).then(|| (args[2], args[3]));
                builder.section_value(args[0], args[1], localised, &loc)?;
            }
            "MSD" if in_section => {
                if args.len() < 3 {
                    arity(3, usize::MAX)?;
                }
                let entry = MsdIndexEntry {
                    msd: args[0].to_string(),
                    token_count: parse_count(args[1], &loc)?,
                    type_count: parse_count(args[2], &loc)?,
                    examples: parse_examples(&args[3..].concat(), &loc)?,
                };
                builder.msd_row(entry, &loc)?;
            }
            "CONSTRAINT" if in_section => {
                let text = trimmed["CONSTRAINT".len()..].trim_start();
                builder.constraint(text, &loc)?;
            }
            other => {
                return Err(SpecError::at(
                    loc.line,
                    loc.column,
                    format!("unexpected `{other}` line"),
                ))
            }
        }
    }
    Ok(last)
}

fn parse_count(raw: &str, loc: &Loc) -> Result<Option<u64>, SpecError> {
    if raw == "-" {
        return Ok(None);
    }
    raw.parse().map(Some).map_err(|_| {
        SpecError::at(loc.line, loc.column, format!("count `{raw}` is not a number"))
    })
}

pub(crate) fn parse_examples(raw: &str, loc: &Loc) -> Result<Vec<(String, String)>, SpecError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| match pair.split_once('/') {
            Some((wf, lemma)) if !wf.is_empty() && !lemma.is_empty() => {
                Ok((wf.to_string(), lemma.to_string()))
            }
            _ => Err(SpecError::at(
                loc.line,
                loc.column,
                format!("example `{pair}` is not of the form word-form/lemma"),
            )),
        })
        .collect()
}

fn count(c: Option<u64>) -> String {
    c.map_or_else(|| "-".to_string(), |n| n.to_string())
}

pub(crate) fn format_examples(examples: &[(String, String)], sep: &str) -> String {
    examples
        .iter()
        .map(|(wf, lemma)| format!("{wf}/{lemma}"))
        .collect::<Vec<_>>()
        .join(sep)
}

pub(crate) fn emit_section(out: &mut String, section: &LanguageSection) {
    let _ = writeln!(out, "LANG-SECTION {}", section.language);
    for table in &section.tables {
        match &table.localised {
            Some(l) => {
                let _ = writeln!(out, "CAT {} {} {}", table.code, l.name, l.code);
            }
            None => {
                let _ = writeln!(out, "CAT {}", table.code);
            }
        }
        for attr in &table.attributes {
            match &attr.localised_name {
                Some(l) => {
                    let _ = writeln!(out, "ATTR {} {} {}", attr.position, attr.name, l);
                }
                None => {
                    let _ = writeln!(out, "ATTR {} {}", attr.position, attr.name);
                }
            }
            for value in &attr.values {
                match &value.localised {
                    Some(l) => {
                        let _ = writeln!(out, "VAL {} {} {} {}", value.code, value.name, l.name, l.code);
                    }
                    None => {
                        let _ = writeln!(out, "VAL {} {}", value.code, value.name);
                    }
                }
            }
        }
    }
    for entry in &section.msd_index {
        let _ = write!(
            out,
            "MSD {} {} {}",
            entry.msd,
            count(entry.token_count),
            count(entry.type_count)
        );
        if !entry.examples.is_empty() {
            let _ = write!(out, " {}", format_examples(&entry.examples, ","));
        }
        out.push('\n');
    }
    for constraint in &section.constraints {
        let _ = writeln!(out, "CONSTRAINT {constraint}");
    }
}

/// Writes a stand-alone language section.
pub fn emit_tabular_section(section: &LanguageSection) -> String {
    let mut out = String::new();
    emit_section(&mut out, section);
    out
}

pub fn emit_tabular(spec: &Specification) -> String {
    let mut out = String::new();
    let langs: Vec<&str> = spec.languages.iter().map(String::as_str).collect();
    let _ = writeln!(out, "LANGUAGES {}", langs.join(" "));
    for cat in &spec.categories {
        let _ = writeln!(out, "CATEGORY {} {}", cat.code, cat.name);
        for attr in &cat.attributes {
            let _ = writeln!(out, "ATTR {} {}", attr.common_position, attr.name);
            for value in &attr.values {
                let flags: Vec<&str> = value.languages.iter().map(String::as_str).collect();
                let _ = writeln!(out, "VAL {} {} {}", value.code, value.name, flags.join(","));
            }
        }
    }
    for section in spec.sections.values() {
        emit_section(&mut out, section);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINI: &str = "\
# a small spec
CATEGORY Q Particle
ATTR 2 Formation
VAL s simple bg,mk,ru
VAL c compound bg,mk,ru
ATTR 1 Type
VAL z negative bg,sl
";

    #[test]
    fn attributes_sorted_by_position() {
        let spec = parse_tabular(MINI).unwrap();
        let q = spec.category('Q').unwrap();
        assert_eq!(q.attributes[0].name, "Type");
        assert_eq!(q.attributes[1].name, "Formation");
        assert_eq!(q.attributes[1].common_position, 2);
        let codes: Vec<char> = q.attributes[1].values.iter().map(|v| v.code).collect();
        assert_eq!(codes, vec!['s', 'c']);
        assert_eq!(
            spec.languages.iter().cloned().collect::<Vec<_>>(),
            vec!["bg", "mk", "ru", "sl"]
        );
    }

    #[test]
    fn language_codes_are_lowercased() {
        let spec = parse_tabular("CATEGORY X Residual\nATTR 1 Type\nVAL f foreign EN,Sl\n").unwrap();
        let v = &spec.category('X').unwrap().attributes[0].values[0];
        assert!(v.languages.contains("en") && v.languages.contains("sl"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let src = "CATEGORY N Noun\nATTR x Type\n";
        match parse_tabular(src) {
            Err(SpecError::Syntax { location, message }) => {
                assert_eq!(location.line, 2);
                assert!(message.contains("not a non-negative integer"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_codes_rejected() {
        let dup_cat = "CATEGORY N Noun\nCATEGORY N Name\n";
        assert!(parse_tabular(dup_cat).is_err());
        let dup_val = "CATEGORY N Noun\nATTR 1 Type\nVAL c common en\nVAL c proper en\n";
        let e = parse_tabular(dup_val).unwrap_err().to_string();
        assert!(e.starts_with("4:1"), "{e}");
    }

    #[test]
    fn hyphen_is_not_a_value_code() {
        assert!(parse_tabular("CATEGORY N Noun\nATTR 1 Type\nVAL - none en\n").is_err());
    }

    #[test]
    fn undeclared_language_rejected() {
        let src = "LANGUAGES en\nCATEGORY N Noun\nATTR 1 Type\nVAL c common en,xx\n";
        let e = parse_tabular(src).unwrap_err().to_string();
        assert!(e.contains("unknown language code `xx`"), "{e}");
    }

    #[test]
    fn degenerate_spec_loads() {
        let src = "LANGUAGES sl\nCATEGORY Q Particle\nLANG-SECTION sl\nCAT Q členek L\n";
        let spec = parse_tabular(src).unwrap();
        assert!(spec.category('Q').unwrap().attributes.is_empty());
        assert_eq!(spec.table("sl", 'Q').unwrap().localised.as_ref().unwrap().code, 'L');
    }

    #[test]
    fn section_must_match_common_tables() {
        let src = "CATEGORY N Noun\nATTR 1 Type\nVAL c common sl\nLANG-SECTION sl\nCAT N\nATTR 1 Kind\n";
        let e = parse_tabular(src).unwrap_err().to_string();
        assert!(e.starts_with("6:1") && e.contains("Kind"), "{e}");
        let src = "CATEGORY N Noun\nATTR 1 Type\nVAL c common sl\nLANG-SECTION sl\nCAT N\nATTR 1 Type\nVAL c proper\n";
        assert!(parse_tabular(src).is_err());
    }

    #[test]
    fn msd_rows_and_constraints() {
        let src = "CATEGORY N Noun\nATTR 1 Type\nVAL c common sl\nLANG-SECTION sl\nCAT N\nATTR 1 Type\nVAL c common\nMSD Nc 3 2 dan/dan, svet/svet\nMSD N - -\nCONSTRAINT  N1 = c  => ok\n";
        let spec = parse_tabular(src).unwrap();
        let section = spec.section("sl").unwrap();
        assert_eq!(section.msd_index[0].token_count, Some(3));
        assert_eq!(section.msd_index[0].examples.len(), 2);
        assert_eq!(section.msd_index[1].type_count, None);
        assert_eq!(section.constraints, vec!["N1 = c  => ok"]);
        let back = parse_tabular(&emit_tabular(&spec)).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn stand_alone_section() {
        let src = "LANG-SECTION xx\nCAT V\nATTR 1 Mood\nVAL e evidential\n";
        let section = parse_tabular_section(src).unwrap();
        assert_eq!(section.language, "xx");
        assert_eq!(section.tables[0].attributes[0].values[0].name, "evidential");
        assert!(parse_tabular_section("CATEGORY N Noun\n").is_err());
    }
}
