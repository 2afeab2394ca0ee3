use roxmltree::{Document, Node};

use super::{AnnotatedCorpus, Block, Division, Paragraph, Sentence, Token, TokenKind};
use crate::ids::is_well_formed;
use crate::ops::{FeatureEntry, FeatureLibraries, StructureEntry};
use crate::report::Report;
use crate::xml::{position, text_of, xml_attr};

/// How to treat markup outside the supported element set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Unknown elements are read through (their content is kept) and
    /// reported as warnings.
    #[default]
    Permissive,
    /// Unknown elements are errors.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct CorpusError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl From<roxmltree::Error> for CorpusError {
    fn from(e: roxmltree::Error) -> Self {
        let pos = e.pos();
        CorpusError {
            line: pos.row as usize,
            column: pos.col as usize,
            message: e.to_string(),
        }
    }
}

struct Reader {
    mode: ParseMode,
    warnings: Report,
}

fn fail(node: Node<'_, '_>, message: impl Into<String>) -> CorpusError {
    let (line, column) = position(node);
    CorpusError {
        line,
        column,
        message: message.into(),
    }
}

fn required<'a>(node: Node<'a, '_>, value: Option<&'a str>, what: &str) -> Result<&'a str, CorpusError> {
    value.ok_or_else(|| fail(node, format!("<{}> lacks {what}", node.tag_name().name())))
}

fn identifier<'a>(node: Node<'a, '_>) -> Result<&'a str, CorpusError> {
    let id = required(node, xml_attr(node, "id"), "xml:id")?;
    if !is_well_formed(id) {
        return Err(fail(node, format!("malformed identifier `{id}`")));
    }
    Ok(id)
}

fn location(node: Node<'_, '_>) -> String {
    let (line, column) = position(node);
    format!("{line}:{column}")
}

impl Reader {
    /// Children that are elements, with unknown wrappers opened up in
    /// permissive mode. `known` lists the element names expected here.
    fn elements<'a, 'i>(&mut self, node: Node<'a, 'i>, known: &[&str]) -> Result<Vec<Node<'a, 'i>>, CorpusError> {
        let mut out = Vec::new();
        for child in node.children() {
            if child.is_text() {
                let text = child.text().unwrap_or_default();
                if !text.trim().is_empty() {
                    if self.mode == ParseMode::Strict {
                        return Err(fail(child, format!("unexpected text `{}`", text.trim())));
                    }
                    self.warnings.warning("stray-text", location(child), format!("ignored text `{}`", text.trim()));
                }
                continue;
            }
            if !child.is_element() {
                continue;
            }
            let name = child.tag_name().name();
            if known.contains(&name) {
                out.push(child);
            } else if self.mode == ParseMode::Strict {
                return Err(fail(child, format!("unexpected element <{name}>")));
            } else {
                self.warnings.warning(
                    "unknown-element",
                    location(child),
                    format!("<{name}> is not part of the corpus format; reading its content"),
                );
                out.extend(self.elements(child, known)?);
            }
        }
        Ok(out)
    }

    fn blocks(&mut self, node: Node<'_, '_>) -> Result<Vec<Block>, CorpusError> {
        let mut blocks = Vec::new();
        for child in self.elements(node, &["div", "p"])? {
            if child.tag_name().name() == "div" {
                blocks.push(Block::Division(Division {
                    id: identifier(child)?.to_string(),
                    div_type: child.attribute("type").map(str::to_string),
                    content: self.blocks(child)?,
                }));
            } else {
                blocks.push(Block::Paragraph(self.paragraph(child)?));
            }
        }
        Ok(blocks)
    }

    fn paragraph(&mut self, node: Node<'_, '_>) -> Result<Paragraph, CorpusError> {
        let id = identifier(node)?.to_string();
        let mut sentences = Vec::new();
        for s in self.elements(node, &["s"])? {
            let sid = identifier(s)?.to_string();
            let mut tokens = Vec::new();
            for t in self.elements(s, &["w", "c"])? {
                tokens.push(self.token(t)?);
            }
            if tokens.is_empty() {
                self.warnings.warning("empty-sentence", sid.clone(), "sentence has no tokens");
            }
            sentences.push(Sentence { id: sid, tokens });
        }
        Ok(Paragraph { id, sentences })
    }

    fn token(&mut self, node: Node<'_, '_>) -> Result<Token, CorpusError> {
        let surface = text_of(node);
        if node.tag_name().name() == "c" {
            return Ok(Token::punctuation(&surface));
        }
        let lemma = required(node, node.attribute("lemma"), "@lemma")?;
        let ana = required(node, node.attribute("ana"), "@ana")?;
        let msd = ana
            .strip_prefix('#')
            .filter(|m| is_well_formed(m))
            .ok_or_else(|| fail(node, format!("malformed reference `{ana}`, expected #MSD")))?;
        Ok(Token {
            kind: TokenKind::Word,
            surface,
            lemma: Some(lemma.to_string()),
            msd: Some(msd.to_string()),
        })
    }

    fn libraries(&mut self, back: Node<'_, '_>) -> Result<FeatureLibraries, CorpusError> {
        let mut libs = FeatureLibraries::default();
        for lib in self.elements(back, &["fLib", "fvLib"])? {
            if lib.tag_name().name() == "fLib" {
                for f in self.elements(lib, &["f"])? {
                    let symbol = self
                        .elements(f, &["symbol"])?
                        .into_iter()
                        .next()
                        .ok_or_else(|| fail(f, "<f> lacks a <symbol>"))?;
                    libs.features.push(FeatureEntry {
                        id: identifier(f)?.to_string(),
                        name: required(f, f.attribute("name"), "@name")?.to_string(),
                        value: required(symbol, symbol.attribute("value"), "@value")?.to_string(),
                        language: xml_attr(f, "lang").unwrap_or_default().to_string(),
                    });
                }
            } else {
                for fs in self.elements(lib, &["fs"])? {
                    let feats = required(fs, fs.attribute("feats"), "@feats")?;
                    let feats = feats
                        .split_whitespace()
                        .map(|r| {
                            r.strip_prefix('#')
                                .map(str::to_string)
                                .ok_or_else(|| fail(fs, format!("malformed reference `{r}`, expected #id")))
                        })
                        .collect::<Result<_, _>>()?;
                    libs.structures.push(StructureEntry {
                        id: identifier(fs)?.to_string(),
                        language: xml_attr(fs, "lang").unwrap_or_default().to_string(),
                        feats,
                    });
                }
            }
        }
        Ok(libs)
    }
}

/// Reads a corpus document. Returns the corpus together with warnings about
/// markup that was read through or ignored.
pub fn load_corpus(source: &str, mode: ParseMode) -> Result<(AnnotatedCorpus, Report), CorpusError> {
    let doc = Document::parse(source)?;
    let mut reader = Reader {
        mode,
        warnings: Report::new(),
    };
    let mut text = doc.root_element();
    if text.tag_name().name() != "text" {
        let found = text
            .descendants()
            .find(|n| n.is_element() && n.tag_name().name() == "text");
        match (mode, found) {
            (ParseMode::Permissive, Some(t)) => {
                reader.warnings.warning(
                    "unknown-element",
                    location(text),
                    format!("<{}> wrapper around <text> ignored", text.tag_name().name()),
                );
                text = t;
            }
            _ => return Err(fail(text, "root element must be <text>")),
        }
    }
    let text_id = identifier(text)?.to_string();
    let language = required(text, xml_attr(text, "lang"), "xml:lang")?.to_string();
    let mut corpus = AnnotatedCorpus {
        namespace: text.tag_name().namespace().map(str::to_string),
        text_id,
        language,
        body: Vec::new(),
        back: None,
    };
    let mut seen_body = false;
    for part in reader.elements(text, &["body", "back"])? {
        if part.tag_name().name() == "body" {
            if seen_body {
                return Err(fail(part, "more than one <body>"));
            }
            seen_body = true;
            corpus.body = reader.blocks(part)?;
        } else {
            corpus.back = Some(reader.libraries(part)?);
        }
    }
    if !seen_body {
        return Err(fail(text, "<text> has no <body>"));
    }
    Ok((corpus, reader.warnings))
}
