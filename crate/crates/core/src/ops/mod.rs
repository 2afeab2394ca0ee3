//! Whole-specification transformations: deriving a template for a new
//! language, merging a language section into the common tables, comparing
//! two specifications, and generating feature libraries and printable
//! reports.

mod diff;
mod fslib;
mod merge;
mod render;
mod split;

use std::fmt;

pub use diff::diff;
pub use fslib::{emit_feature_libraries, FeatureEntry, FeatureLibraries, StructureEntry};
pub use merge::{merge, MergeError};
pub use render::render_report;
pub use split::{split, SplitError};

/// One line of a change or warning listing: `KIND<TAB>path<TAB>detail`.
///
/// Paths address items as `N`, `N/Type`, `N/Type/common`, or with a
/// language prefix (`sl:N/Type`) for items of a language section.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChangeRecord {
    pub kind: String,
    pub path: String,
    pub detail: String,
}

impl ChangeRecord {
    pub fn new(kind: &str, path: impl Into<String>, detail: impl Into<String>) -> Self {
        ChangeRecord {
            kind: kind.to_string(),
            path: path.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for ChangeRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.kind, self.path, self.detail)
    }
}

/// Renders records one per line.
pub fn records_to_text(records: &[ChangeRecord]) -> String {
    records.iter().map(|r| format!("{r}\n")).collect()
}
