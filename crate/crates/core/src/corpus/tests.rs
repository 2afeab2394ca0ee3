use super::*;
use crate::fixtures::{sample_spec, SAMPLE_CORPUS};

fn sample() -> AnnotatedCorpus {
    let (corpus, warnings) = load_corpus(SAMPLE_CORPUS, ParseMode::Strict).unwrap();
    assert!(warnings.findings.is_empty());
    corpus
}

#[test]
fn reads_words_and_punctuation() {
    let corpus = sample();
    assert_eq!(corpus.text_id, "Osl.");
    assert_eq!(corpus.language, "sl");
    let first = corpus.sentences()[0];
    assert_eq!(first.id, "Osl.1.2.2.1");
    assert_eq!(first.tokens[6], Token::word("dan", "dan", "Ncmsn"));
    assert_eq!(first.tokens[3], Token::punctuation(","));
}

#[test]
fn canonical_round_trip() {
    let corpus = sample();
    assert_eq!(corpus.to_xml(), SAMPLE_CORPUS);
    let with_decl = format!("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n{SAMPLE_CORPUS}");
    let (again, _) = load_corpus(&with_decl, ParseMode::Strict).unwrap();
    assert_eq!(again, corpus);
}

#[test]
fn sample_is_valid() {
    let corpus = sample();
    let spec = sample_spec();
    let report = validate_corpus(&corpus, Some(&spec));
    assert!(report.is_clean(), "{}", report.to_tsv());
    assert_eq!(report.findings.len(), 0);
}

#[test]
fn first_sentence_counts() {
    let stats = corpus_stats(&sample());
    let s = stats.of_level("sentence").next().unwrap();
    assert_eq!((s.counts.words, s.counts.punctuation), (6, 1));
    assert_eq!(s.counts.types, 6);
    assert_eq!(s.counts.msds, 5);
    let words: usize = stats.of_level("sentence").map(|u| u.counts.words).sum();
    assert_eq!(stats.total.words, words);
    assert_eq!(stats.total.tokens(), 11);
    assert_eq!(stats.total.sentences, 2);
    let text = stats.units.last().unwrap();
    assert_eq!((text.level, text.id.as_str()), ("text", "Osl."));
}

#[test]
fn empty_corpus_counts_zero() {
    let src = "<text xml:id=\"X.\" xml:lang=\"sl\"><body/></text>";
    let (corpus, _) = load_corpus(src, ParseMode::Strict).unwrap();
    assert_eq!(corpus_stats(&corpus).total, Counts::default());
}

#[test]
fn empty_sentence_warns() {
    let src = r#"<text xml:id="X." xml:lang="sl"><body><p xml:id="X.1"><s xml:id="X.1.1"/></p></body></text>"#;
    let (corpus, warnings) = load_corpus(src, ParseMode::Strict).unwrap();
    assert_eq!(corpus.sentences()[0].tokens.len(), 0);
    assert_eq!(warnings.of_kind("empty-sentence").count(), 1);
}

#[test]
fn unknown_elements_depend_on_mode() {
    let src = SAMPLE_CORPUS.replace(
        "<w lemma=\"dan\" ana=\"#Ncmsn\">dan</w>",
        "<name><w lemma=\"dan\" ana=\"#Ncmsn\">dan</w></name>",
    );
    let err = load_corpus(&src, ParseMode::Strict).unwrap_err();
    assert!(err.message.contains("<name>"), "{err}");
    let (corpus, warnings) = load_corpus(&src, ParseMode::Permissive).unwrap();
    assert_eq!(warnings.of_kind("unknown-element").count(), 1);
    assert_eq!(corpus, sample());
}

#[test]
fn missing_attributes_are_errors() {
    let src = SAMPLE_CORPUS.replace("<w lemma=\"dan\" ana=\"#Ncmsn\">dan</w>", "<w ana=\"#Ncmsn\">dan</w>");
    let err = load_corpus(&src, ParseMode::Permissive).unwrap_err();
    assert!(err.message.contains("@lemma"));
    assert_eq!(err.line, 13);
    let src = SAMPLE_CORPUS.replace("<s xml:id=\"Osl.1.2.2.2\">", "<s>");
    assert!(load_corpus(&src, ParseMode::Permissive).is_err());
    let src = SAMPLE_CORPUS.replace("ana=\"#Ncmsn\">dan<", "ana=\"Ncmsn\">dan<");
    assert!(load_corpus(&src, ParseMode::Permissive).unwrap_err().message.contains("malformed reference"));
}

#[test]
fn dangling_reference() {
    let src = SAMPLE_CORPUS.replacen("ana=\"#Ncmsn\"", "ana=\"#Xqq\"", 1);
    let (corpus, _) = load_corpus(&src, ParseMode::Strict).unwrap();
    let report = validate_corpus(&corpus, None);
    let f: Vec<_> = report.of_kind("dangling-ana").collect();
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].path, "Osl.1.2.2.1[7]");
}

#[test]
fn decomposition_mismatch() {
    let src = SAMPLE_CORPUS.replace("#N0. #N1.c #N2.m #N3.s #N4.n", "#N0. #N1.c #N2.m #N3.s");
    let (corpus, _) = load_corpus(&src, ParseMode::Strict).unwrap();
    assert!(validate_corpus(&corpus, None).of_kind("decomposition-mismatch").next().is_none());
    let spec = sample_spec();
    let report = validate_corpus(&corpus, Some(&spec));
    let f: Vec<_> = report.of_kind("decomposition-mismatch").collect();
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].path, "Ncmsn");
}

#[test]
fn hierarchy_violation() {
    let src = SAMPLE_CORPUS.replace("xml:id=\"Osl.1.2.2.2\"", "xml:id=\"Osl.1.3.1\"");
    let (corpus, _) = load_corpus(&src, ParseMode::Strict).unwrap();
    let report = validate_corpus(&corpus, None);
    assert_eq!(report.of_kind("id-hierarchy").count(), 1);
}

#[test]
fn attach_regenerates_back_matter() {
    let corpus = sample();
    let spec = sample_spec();
    let mut bare = corpus.clone();
    bare.back = None;
    let attached = attach_libraries(&bare, &spec).unwrap();
    assert_eq!(attached, corpus);
    let ids: std::collections::BTreeSet<String> =
        attached.back.unwrap().structures.into_iter().map(|s| s.id).collect();
    let used: std::collections::BTreeSet<String> = corpus.used_msds().into_iter().collect();
    assert_eq!(ids, used);
}

#[test]
fn attach_names_the_offending_token() {
    let src = SAMPLE_CORPUS.replacen("ana=\"#Agpmsny\"", "ana=\"#Agpmsnz\"", 1);
    let (corpus, _) = load_corpus(&src, ParseMode::Strict).unwrap();
    let err = attach_libraries(&corpus, &sample_spec()).unwrap_err();
    assert_eq!(err.token, "Osl.1.2.2.1[6]");
    assert_eq!(err.msd, "Agpmsnz");
}
