use std::collections::BTreeSet;
use std::fmt::Write;

use super::{AnnotatedCorpus, Block, Sentence, TokenKind};

/// Token, type and MSD counts over some stretch of text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub sentences: usize,
    pub words: usize,
    pub punctuation: usize,
    /// Distinct word forms.
    pub types: usize,
    /// Distinct MSDs.
    pub msds: usize,
}

impl Counts {
    pub fn tokens(&self) -> usize {
        self.words + self.punctuation
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCounts {
    /// `sentence`, `paragraph`, `division` or `text`.
    pub level: &'static str,
    pub id: String,
    pub counts: Counts,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorpusStats {
    /// Every unit in document order, each container after its content.
    pub units: Vec<LevelCounts>,
    pub total: Counts,
}

impl CorpusStats {
    pub fn of_level<'a>(&'a self, level: &'a str) -> impl Iterator<Item = &'a LevelCounts> + 'a {
        self.units.iter().filter(move |u| u.level == level)
    }

    /// `level<TAB>id<TAB>sentences<TAB>words<TAB>punctuation<TAB>types<TAB>msds`
    /// per unit, the whole text last.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("level\tid\tsentences\twords\tpunctuation\ttypes\tmsds\n");
        for u in &self.units {
            let c = u.counts;
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                u.level, u.id, c.sentences, c.words, c.punctuation, c.types, c.msds
            );
        }
        out
    }
}

#[derive(Default)]
struct Tally<'a> {
    sentences: usize,
    words: usize,
    punctuation: usize,
    forms: BTreeSet<&'a str>,
    msds: BTreeSet<&'a str>,
}

impl<'a> Tally<'a> {
    fn add_sentence(&mut self, s: &'a Sentence) {
        self.sentences += 1;
        for t in &s.tokens {
            match t.kind {
                TokenKind::Word => {
                    self.words += 1;
                    self.forms.insert(&t.surface);
                }
                TokenKind::Punctuation => self.punctuation += 1,
            }
            if let Some(m) = &t.msd {
                self.msds.insert(m);
            }
        }
    }

    fn absorb(&mut self, other: Tally<'a>) {
        self.sentences += other.sentences;
        self.words += other.words;
        self.punctuation += other.punctuation;
        self.forms.extend(other.forms);
        self.msds.extend(other.msds);
    }

    fn counts(&self) -> Counts {
        Counts {
            sentences: self.sentences,
            words: self.words,
            punctuation: self.punctuation,
            types: self.forms.len(),
            msds: self.msds.len(),
        }
    }
}

fn walk<'a>(blocks: &'a [Block], units: &mut Vec<LevelCounts>) -> Tally<'a> {
    let mut tally = Tally::default();
    for block in blocks {
        match block {
            Block::Division(d) => {
                let inner = walk(&d.content, units);
                units.push(LevelCounts {
                    level: "division",
                    id: d.id.clone(),
                    counts: inner.counts(),
                });
                tally.absorb(inner);
            }
            Block::Paragraph(p) => {
                let mut para = Tally::default();
                for s in &p.sentences {
                    let mut one = Tally::default();
                    one.add_sentence(s);
                    units.push(LevelCounts {
                        level: "sentence",
                        id: s.id.clone(),
                        counts: one.counts(),
                    });
                    para.absorb(one);
                }
                units.push(LevelCounts {
                    level: "paragraph",
                    id: p.id.clone(),
                    counts: para.counts(),
                });
                tally.absorb(para);
            }
        }
    }
    tally
}

pub fn corpus_stats(corpus: &AnnotatedCorpus) -> CorpusStats {
    let mut units = Vec::new();
    let tally = walk(&corpus.body, &mut units);
    let total = tally.counts();
    units.push(LevelCounts {
        level: "text",
        id: corpus.text_id.clone(),
        counts: total,
    });
    CorpusStats { units, total }
}
