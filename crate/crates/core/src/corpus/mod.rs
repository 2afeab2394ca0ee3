//! Linguistically annotated corpora: a text divided into divisions,
//! paragraphs and sentences of word and punctuation tokens, each word
//! carrying a lemma and a reference to its MSD, with the feature libraries
//! defining the MSDs kept in the back matter.

mod parse;
mod stats;
mod validate;

use crate::ops::{emit_feature_libraries, FeatureLibraries};
use crate::spec::Specification;
use crate::xml::XmlWriter;

pub use parse::{load_corpus, CorpusError, ParseMode};
pub use stats::{corpus_stats, CorpusStats, Counts, LevelCounts};
pub use validate::validate_corpus;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnnotatedCorpus {
    /// Default namespace of the source document, kept for output.
    pub namespace: Option<String>,
    pub text_id: String,
    pub language: String,
    pub body: Vec<Block>,
    pub back: Option<FeatureLibraries>,
}

/// An element of the body or of a division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Division(Division),
    Paragraph(Paragraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division {
    pub id: String,
    pub div_type: Option<String>,
    pub content: Vec<Block>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paragraph {
    pub id: String,
    pub sentences: Vec<Sentence>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub tokens: Vec<Token>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub surface: String,
    pub lemma: Option<String>,
    /// MSD identifier without the leading `#`.
    pub msd: Option<String>,
}

impl Token {
    pub fn word(surface: &str, lemma: &str, msd: &str) -> Self {
        Token {
            kind: TokenKind::Word,
            surface: surface.to_string(),
            lemma: Some(lemma.to_string()),
            msd: Some(msd.to_string()),
        }
    }

    pub fn punctuation(surface: &str) -> Self {
        Token {
            kind: TokenKind::Punctuation,
            surface: surface.to_string(),
            lemma: None,
            msd: None,
        }
    }
}

impl Sentence {
    /// Word tokens with a flag telling whether each is the first word of
    /// the sentence.
    pub fn words(&self) -> impl Iterator<Item = (bool, &Token)> {
        self.tokens
            .iter()
            .filter(|t| t.kind == TokenKind::Word)
            .enumerate()
            .map(|(i, t)| (i == 0, t))
    }
}

fn collect_sentences<'a>(blocks: &'a [Block], out: &mut Vec<&'a Sentence>) {
    for block in blocks {
        match block {
            Block::Division(d) => collect_sentences(&d.content, out),
            Block::Paragraph(p) => out.extend(&p.sentences),
        }
    }
}

impl AnnotatedCorpus {
    /// All sentences in document order.
    pub fn sentences(&self) -> Vec<&Sentence> {
        let mut out = Vec::new();
        collect_sentences(&self.body, &mut out);
        out
    }

    /// Distinct MSD references in order of first use.
    pub fn used_msds(&self) -> Vec<String> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for s in self.sentences() {
            for t in &s.tokens {
                if let Some(m) = &t.msd {
                    if seen.insert(m.as_str()) {
                        out.push(m.clone());
                    }
                }
            }
        }
        out
    }

    /// Writes the corpus in canonical form.
    pub fn to_xml(&self) -> String {
        let mut w = XmlWriter::new();
        let mut attrs = Vec::new();
        if let Some(ns) = &self.namespace {
            attrs.push(("xmlns", ns.as_str()));
        }
        attrs.push(("xml:id", self.text_id.as_str()));
        attrs.push(("xml:lang", self.language.as_str()));
        w.open("text", &attrs);
        w.open("body", &[]);
        write_blocks(&mut w, &self.body);
        w.close("body");
        if let Some(libs) = &self.back {
            w.open("back", &[]);
            libs.write(&mut w);
            w.close("back");
        }
        w.close("text");
        w.finish()
    }
}

fn write_blocks(w: &mut XmlWriter, blocks: &[Block]) {
    for block in blocks {
        match block {
            Block::Division(d) => {
                let mut attrs = Vec::new();
                if let Some(t) = &d.div_type {
                    attrs.push(("type", t.as_str()));
                }
                attrs.push(("xml:id", d.id.as_str()));
                w.open("div", &attrs);
                write_blocks(w, &d.content);
                w.close("div");
            }
            Block::Paragraph(p) => {
                w.open("p", &[("xml:id", &p.id)]);
                for s in &p.sentences {
                    if s.tokens.is_empty() {
                        w.empty("s", &[("xml:id", &s.id)]);
                        continue;
                    }
                    w.open("s", &[("xml:id", &s.id)]);
                    for t in &s.tokens {
                        match t.kind {
                            TokenKind::Word => {
                                let ana = format!("#{}", t.msd.as_deref().unwrap_or_default());
                                w.leaf(
                                    "w",
                                    &[("lemma", t.lemma.as_deref().unwrap_or_default()), ("ana", &ana)],
                                    &t.surface,
                                );
                            }
                            TokenKind::Punctuation => w.leaf("c", &[], &t.surface),
                        }
                    }
                    w.close("s");
                }
                w.close("p");
            }
        }
    }
}

/// A token whose MSD could not be turned into feature-library entries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("token {token}: MSD `{msd}`: {reason}")]
pub struct AttachError {
    /// `sentence-id[index]` of the first token using the MSD.
    pub token: String,
    pub msd: String,
    pub reason: String,
}

/// Replaces the back matter with libraries generated from the MSDs the
/// text actually uses.
pub fn attach_libraries(
    corpus: &AnnotatedCorpus,
    spec: &Specification,
) -> Result<AnnotatedCorpus, AttachError> {
    let msds = corpus.used_msds();
    let libs = emit_feature_libraries(spec, &corpus.language, &msds).map_err(|(msd, e)| {
        let token = corpus
            .sentences()
            .iter()
            .find_map(|s| {
                s.tokens
                    .iter()
                    .position(|t| t.msd.as_deref() == Some(msd.as_str()))
                    .map(|i| format!("{}[{}]", s.id, i + 1))
            })
            .unwrap_or_default();
        AttachError {
            token,
            msd,
            reason: e.to_string(),
        }
    })?;
    let mut out = corpus.clone();
    out.back = Some(libs);
    Ok(out)
}

#[cfg(test)]
mod tests;
