//! Sample data shared by unit tests, integration tests and examples.

use crate::spec::{parse_tabular, Specification};

/// Tabular source of the sample specification.
pub const SAMPLE_SPEC: &str = include_str!("../data/sample-spec.tbl");

/// The sample specification: twelve categories, nine languages, a localised
/// Slovene section with an MSD index and a plain English section.
pub fn sample_spec() -> Specification {
    parse_tabular(SAMPLE_SPEC).expect("sample specification parses")
}

/// A short Slovene corpus in canonical form, with feature libraries.
pub const SAMPLE_CORPUS: &str = include_str!("../data/sample-corpus.xml");

/// Macedonian-Slovene links with `...` lines between them and links broken
/// over several lines.
pub const ALIGN_EXCERPT: &str = include_str!("../data/align-mk-sl-excerpt.xml");

/// The same links in canonical form.
pub const ALIGN_MK_SL: &str = include_str!("../data/align-mk-sl.xml");

/// English-Macedonian and English-Slovene alignments over a shared English
/// hub.
pub const HUB_EN_MK: &str = include_str!("../data/hub-en-mk.xml");
pub const HUB_EN_SL: &str = include_str!("../data/hub-en-sl.xml");

/// English tagset, one MSD per line, in the English section's ordering.
pub const EN_TAGSET: &str = include_str!("../data/en-tagset.txt");
