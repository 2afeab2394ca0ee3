//! Three-field lexica (word-form, lemma, MSD) and the MSD indexes derived
//! from them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::{self, Write};

use crate::codec::{Codec, Msd};
use crate::corpus::AnnotatedCorpus;
use crate::report::Report;
use crate::spec::{emit_index_row, format_examples, MsdIndexEntry, SpecFormat, Specification};
use crate::xml::XmlWriter;

/// Examples kept per index row.
pub const MAX_EXAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub word_form: String,
    pub lemma: String,
    pub msd: String,
    /// Source line, 0 when not read from a file.
    pub line: usize,
}

impl LexiconEntry {
    pub fn new(word_form: &str, lemma: &str, msd: &str) -> Self {
        LexiconEntry {
            word_form: word_form.to_string(),
            lemma: lemma.to_string(),
            msd: msd.to_string(),
            line: 0,
        }
    }

    fn location(&self, index: usize) -> String {
        if self.line > 0 {
            format!("line {}", self.line)
        } else {
            format!("entry {}", index + 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    pub language: String,
    pub entries: Vec<LexiconEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Separator {
    #[default]
    Tab,
    /// Any run of spaces or tabs.
    Whitespace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LexiconOptions {
    pub separator: Separator,
    /// `=` in the word-form field stands for the lemma and vice versa.
    pub equals_shorthand: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

fn is_comment(line: &str, separator: Separator) -> bool {
    match separator {
        Separator::Tab => line.starts_with('#') && !line.contains('\t'),
        Separator::Whitespace => line == "#" || line.starts_with("# "),
    }
}

/// Reads one entry per non-blank line; lines starting with `#` are
/// comments. All malformed lines are reported, not just the first.
pub fn load_lexicon(
    source: &str,
    language: &str,
    options: &LexiconOptions,
) -> Result<Lexicon, Vec<LineError>> {
    let mut entries = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim_end_matches('\r');
        if text.trim().is_empty() || is_comment(text, options.separator) {
            continue;
        }
        let fields: Vec<&str> = match options.separator {
            Separator::Tab => text.split('\t').map(str::trim).collect(),
            Separator::Whitespace => text.split_whitespace().collect(),
        };
        if fields.len() != 3 {
            errors.push(LineError {
                line,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
            continue;
        }
        let (mut word_form, mut lemma, msd) = (fields[0], fields[1], fields[2]);
        if options.equals_shorthand {
            match (word_form, lemma) {
                ("=", "=") => {
                    errors.push(LineError {
                        line,
                        message: "word-form and lemma cannot both be `=`".into(),
                    });
                    continue;
                }
                ("=", _) => word_form = lemma,
                (_, "=") => lemma = word_form,
                _ => {}
            }
        }
        let empty: Vec<&str> = [("word-form", word_form), ("lemma", lemma), ("MSD", msd)]
            .iter()
            .filter(|(_, v)| v.is_empty())
            .map(|(n, _)| *n)
            .collect();
        if !empty.is_empty() {
            errors.push(LineError {
                line,
                message: format!("empty {}", empty.join(", ")),
            });
            continue;
        }
        entries.push(LexiconEntry {
            word_form: word_form.to_string(),
            lemma: lemma.to_string(),
            msd: msd.to_string(),
            line,
        });
    }
    if errors.is_empty() {
        Ok(Lexicon {
            language: language.to_string(),
            entries,
        })
    } else {
        Err(errors)
    }
}

/// Writes the lexicon back as tab-separated lines.
impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{}\t{}\t{}", e.word_form, e.lemma, e.msd)?;
        }
        Ok(())
    }
}

/// Checks every MSD against the language's tagset (in the language's own
/// ordering), and reports duplicate entries and MSDs missing from the
/// language's MSD index as warnings.
pub fn validate_lexicon(lex: &Lexicon, spec: &Specification) -> Report {
    let mut report = Report::new();
    if !spec.languages.contains(&lex.language) {
        report.error("unknown-language", &lex.language, "language is not described by the specification");
        return report;
    }
    let codec = Codec::new(spec);
    let ordering = spec.native_ordering(&lex.language);
    let index: Option<BTreeSet<&str>> = spec
        .section(&lex.language)
        .filter(|s| !s.msd_index.is_empty())
        .map(|s| s.msd_index.iter().map(|e| e.msd.as_str()).collect());

    let mut verdicts: BTreeMap<&str, Option<String>> = BTreeMap::new();
    let mut seen: BTreeMap<(&str, &str, &str), String> = BTreeMap::new();
    let mut unlisted = BTreeSet::new();
    for (i, e) in lex.entries.iter().enumerate() {
        let here = e.location(i);
        let verdict = verdicts.entry(&e.msd).or_insert_with(|| {
            codec
                .normalise(&Msd::new(&e.msd, &lex.language, ordering))
                .err()
                .map(|err| err.to_string())
        });
        if let Some(reason) = verdict {
            report.error("invalid-msd", here.clone(), format!("`{}`: {reason}", e.msd));
        } else if let Some(index) = &index {
            if !index.contains(e.msd.as_str()) && unlisted.insert(e.msd.as_str()) {
                report.warning(
                    "msd-not-in-index",
                    e.msd.clone(),
                    format!("valid but not listed in the {} MSD index (first at {here})", lex.language),
                );
            }
        }
        match seen.get(&(e.word_form.as_str(), e.lemma.as_str(), e.msd.as_str())) {
            Some(first) => report.warning("duplicate-entry", here, format!("same as {first}")),
            None => {
                seen.insert((&e.word_form, &e.lemma, &e.msd), here);
            }
        }
    }
    report
}

#[derive(Default)]
struct Usage<'a> {
    tokens: u64,
    pairs: BTreeMap<(&'a str, &'a str), u64>,
}

fn lexicon_examples(lex: &Lexicon, msd: &str) -> Vec<(String, String)> {
    let pairs: BTreeSet<(&str, &str)> = lex
        .entries
        .iter()
        .filter(|e| e.msd == msd)
        .map(|e| (e.word_form.as_str(), e.lemma.as_str()))
        .collect();
    pairs
        .into_iter()
        .take(MAX_EXAMPLES)
        .map(|(w, l)| (w.to_string(), l.to_string()))
        .collect()
}

/// One index row per distinct MSD of the lexicon and, when given, of the
/// corpus, sorted by collation order.
///
/// With a corpus, rows carry token counts, counts of distinct word forms
/// and the most frequent `word-form/lemma` pairs (ties in word-form
/// order); a sentence-initial word is counted in lower case when only that
/// form is in the lexicon. MSDs the corpus does not use get zero counts.
/// Without a corpus, counts are absent and examples are the alphabetically
/// first pairs of the lexicon.
pub fn build_msd_index(
    lex: &Lexicon,
    spec: &Specification,
    corpus: Option<&AnnotatedCorpus>,
) -> Vec<MsdIndexEntry> {
    let mut msds: BTreeSet<String> = lex.entries.iter().map(|e| e.msd.clone()).collect();
    let mut usage: BTreeMap<String, Usage<'_>> = BTreeMap::new();
    let lowered: Vec<(usize, String)>;
    if let Some(corpus) = corpus {
        let known: HashSet<(&str, &str, &str)> = lex
            .entries
            .iter()
            .map(|e| (e.word_form.as_str(), e.lemma.as_str(), e.msd.as_str()))
            .collect();
        let sentences = corpus.sentences();
        // lower-cased sentence-initial forms, computed up front so usage can borrow them
        let mut folded = Vec::new();
        for (si, s) in sentences.iter().enumerate() {
            if let Some((_, t)) = s.words().next() {
                let (Some(lemma), Some(msd)) = (&t.lemma, &t.msd) else {
                    continue;
                };
                let lower = t.surface.to_lowercase();
                if lower != t.surface
                    && !known.contains(&(t.surface.as_str(), lemma.as_str(), msd.as_str()))
                    && known.contains(&(lower.as_str(), lemma.as_str(), msd.as_str()))
                {
                    folded.push((si, lower));
                }
            }
        }
        lowered = folded;
        for (si, s) in sentences.iter().enumerate() {
            for (initial, t) in s.words() {
                let (Some(lemma), Some(msd)) = (&t.lemma, &t.msd) else {
                    continue;
                };
                let form = match lowered.iter().find(|(i, _)| *i == si) {
                    Some((_, lower)) if initial => lower.as_str(),
                    _ => t.surface.as_str(),
                };
                msds.insert(msd.clone());
                let u = usage.entry(msd.clone()).or_default();
                u.tokens += 1;
                *u.pairs.entry((form, lemma.as_str())).or_default() += 1;
            }
        }
    }

    let mut rows: BTreeMap<String, MsdIndexEntry> = BTreeMap::new();
    for msd in &msds {
        let entry = match (corpus, usage.get(msd)) {
            (Some(_), Some(u)) => {
                let forms: BTreeSet<&str> = u.pairs.keys().map(|(w, _)| *w).collect();
                let mut pairs: Vec<(&(&str, &str), &u64)> = u.pairs.iter().collect();
                pairs.sort_by(|(ka, ca), (kb, cb)| cb.cmp(ca).then_with(|| ka.cmp(kb)));
                MsdIndexEntry {
                    msd: msd.clone(),
                    token_count: Some(u.tokens),
                    type_count: Some(forms.len() as u64),
                    examples: pairs
                        .into_iter()
                        .take(MAX_EXAMPLES)
                        .map(|((w, l), _)| (w.to_string(), l.to_string()))
                        .collect(),
                }
            }
            (Some(_), None) => MsdIndexEntry {
                msd: msd.clone(),
                token_count: Some(0),
                type_count: Some(0),
                examples: lexicon_examples(lex, msd),
            },
            (None, _) => MsdIndexEntry {
                msd: msd.clone(),
                token_count: None,
                type_count: None,
                examples: lexicon_examples(lex, msd),
            },
        };
        rows.insert(msd.clone(), entry);
    }

    let codec = Codec::new(spec);
    let ordering = spec.native_ordering(&lex.language);
    let keyed: Vec<Msd> = msds.iter().map(|m| Msd::new(m, &lex.language, ordering)).collect();
    codec
        .sort(&keyed)
        .into_iter()
        .filter_map(|m| rows.remove(&m.text))
        .collect()
}

/// Writes index rows as `MSD` lines of the tabular specification format or
/// as a TEI `msd.index` table, preceded by a comment stating where the
/// counts come from.
pub fn emit_index(
    spec: Option<&Specification>,
    language: &str,
    entries: &[MsdIndexEntry],
    format: SpecFormat,
    provenance: &str,
) -> String {
    match format {
        SpecFormat::Tabular => {
            let mut out = String::new();
            for line in provenance.lines() {
                let _ = writeln!(out, "# {line}");
            }
            let count = |c: Option<u64>| c.map_or_else(|| "-".to_string(), |n| n.to_string());
            for e in entries {
                let _ = write!(out, "MSD {} {} {}", e.msd, count(e.token_count), count(e.type_count));
                if !e.examples.is_empty() {
                    let _ = write!(out, " {}", format_examples(&e.examples, ","));
                }
                out.push('\n');
            }
            out
        }
        SpecFormat::Tei => {
            let mut w = XmlWriter::new();
            w.open("table", &[("n", "msd.index"), ("select", language)]);
            w.comment(&format!(" {} ", provenance.replace("--", "- -")));
            for e in entries {
                emit_index_row(&mut w, spec, language, e);
            }
            w.close("table");
            w.finish()
        }
    }
}

/// Describes where index counts come from, for [`emit_index`].
pub fn provenance(lex: &Lexicon, corpus: Option<&AnnotatedCorpus>) -> String {
    match corpus {
        Some(c) => format!(
            "counts: {} word tokens of corpus {}; examples by corpus frequency; lexicon of {} entries",
            c.sentences().iter().map(|s| s.words().count()).sum::<usize>(),
            c.text_id,
            lex.entries.len()
        ),
        None => format!(
            "counts: none (lexicon only, {} entries); examples in alphabetical order",
            lex.entries.len()
        ),
    }
}
