use std::collections::{BTreeMap, BTreeSet};

use super::{AnnotatedCorpus, Block};
use crate::codec::{Codec, Msd};
use crate::ids::extends;
use crate::ops::emit_feature_libraries;
use crate::report::Report;
use crate::spec::Specification;

fn check_ids(report: &mut Report, seen: &mut BTreeSet<String>, parent: &str, id: &str) {
    if !seen.insert(id.to_string()) {
        report.error("duplicate-id", id, "identifier used more than once");
    }
    if !extends(parent, id) {
        report.error("id-hierarchy", id, format!("does not extend its parent `{parent}`"));
    }
}

fn walk(report: &mut Report, seen: &mut BTreeSet<String>, parent: &str, blocks: &[Block]) {
    for block in blocks {
        match block {
            Block::Division(d) => {
                check_ids(report, seen, parent, &d.id);
                walk(report, seen, &d.id, &d.content);
            }
            Block::Paragraph(p) => {
                check_ids(report, seen, parent, &p.id);
                for s in &p.sentences {
                    check_ids(report, seen, &p.id, &s.id);
                }
            }
        }
    }
}

/// Checks identifiers, references from the text into the feature-structure
/// library and from there into the feature library, and, with a
/// specification, that every library entry agrees with the decoded MSD.
///
/// Without back matter the MSD references are checked against the
/// specification directly, when one is given.
pub fn validate_corpus(corpus: &AnnotatedCorpus, spec: Option<&Specification>) -> Report {
    let mut report = Report::new();
    let mut seen = BTreeSet::from([corpus.text_id.clone()]);
    walk(&mut report, &mut seen, &corpus.text_id, &corpus.body);

    let Some(libs) = &corpus.back else {
        report.warning("no-libraries", &corpus.text_id, "corpus has no feature libraries");
        if let Some(spec) = spec {
            let codec = Codec::new(spec);
            let ordering = spec.native_ordering(&corpus.language);
            for msd in corpus.used_msds() {
                if let Err(e) = codec.normalise(&Msd::new(&msd, &corpus.language, ordering)) {
                    report.error("invalid-msd", msd, e.to_string());
                }
            }
        }
        return report;
    };

    let mut features: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, f) in libs.features.iter().enumerate() {
        if features.insert(&f.id, i).is_some() {
            report.error("duplicate-id", &f.id, "feature defined more than once");
        }
    }
    let mut structures: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, s) in libs.structures.iter().enumerate() {
        if structures.insert(&s.id, i).is_some() {
            report.error("duplicate-id", &s.id, "feature structure defined more than once");
        }
    }
    let labels: BTreeSet<&str> = libs
        .structures
        .iter()
        .map(|s| s.language.as_str())
        .chain(libs.features.iter().map(|f| f.language.as_str()))
        .collect();
    if labels.len() > 1 {
        let labels: Vec<&str> = labels.into_iter().collect();
        report.warning(
            "mixed-library-languages",
            &corpus.text_id,
            format!("library entries are labelled with several languages: {}", labels.join(" ")),
        );
    }

    for s in corpus.sentences() {
        for (i, t) in s.tokens.iter().enumerate() {
            if let Some(msd) = &t.msd {
                if !structures.contains_key(msd.as_str()) {
                    report.error(
                        "dangling-ana",
                        format!("{}[{}]", s.id, i + 1),
                        format!("`#{msd}` has no entry in the feature-structure library"),
                    );
                }
            }
        }
    }

    let mut referenced = BTreeSet::new();
    for s in &libs.structures {
        for f in &s.feats {
            referenced.insert(f.as_str());
            if !features.contains_key(f.as_str()) {
                report.error(
                    "dangling-feature",
                    &s.id,
                    format!("`#{f}` has no entry in the feature library"),
                );
            }
        }
    }
    for f in &libs.features {
        if !referenced.contains(f.id.as_str()) {
            report.info("unused-feature", &f.id, "not referenced by any feature structure");
        }
    }

    if let Some(spec) = spec {
        for s in &libs.structures {
            let expected = match emit_feature_libraries(spec, &corpus.language, &[s.id.as_str()]) {
                Ok(libs) => libs,
                Err((_, e)) => {
                    report.error("invalid-msd", &s.id, e.to_string());
                    continue;
                }
            };
            let want = &expected.structures[0].feats;
            if want != &s.feats {
                report.error(
                    "decomposition-mismatch",
                    &s.id,
                    format!("expected `{}`, found `{}`", want.join(" "), s.feats.join(" ")),
                );
            }
            for e in &expected.features {
                let Some(&i) = features.get(e.id.as_str()) else {
                    continue;
                };
                let f = &libs.features[i];
                if f.name != e.name || f.value != e.value {
                    report.error(
                        "feature-mismatch",
                        &f.id,
                        format!("expected {}={}, found {}={}", e.name, e.value, f.name, f.value),
                    );
                }
            }
        }
    }
    report
}
