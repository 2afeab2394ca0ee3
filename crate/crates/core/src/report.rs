//! Findings produced by the validators.
//!
//! Every validator returns a [`Report`] rather than failing: problems found
//! in the data are data. Reports render one finding per line as
//! `severity<TAB>kind<TAB>path<TAB>detail`, in the order they were found.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    /// Stable machine-readable kind, e.g. `dangling-ana`.
    pub kind: String,
    /// Where the problem is (identifier, line number, MSD, ...).
    pub path: String,
    pub detail: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}",
            self.severity, self.kind, self.path, self.detail
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        severity: Severity,
        kind: &str,
        path: impl Into<String>,
        detail: impl Into<String>,
    ) {
        self.findings.push(Finding {
            severity,
            kind: kind.to_string(),
            path: path.into(),
            detail: detail.into(),
        });
    }

    pub fn error(&mut self, kind: &str, path: impl Into<String>, detail: impl Into<String>) {
        self.push(Severity::Error, kind, path, detail);
    }

    pub fn warning(&mut self, kind: &str, path: impl Into<String>, detail: impl Into<String>) {
        self.push(Severity::Warning, kind, path, detail);
    }

    pub fn info(&mut self, kind: &str, path: impl Into<String>, detail: impl Into<String>) {
        self.push(Severity::Info, kind, path, detail);
    }

    pub fn extend(&mut self, other: Report) {
        self.findings.extend(other.findings);
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.findings
            .iter()
            .filter(|f| f.severity == severity)
            .count()
    }

    pub fn has_errors(&self) -> bool {
        self.count(Severity::Error) > 0
    }

    /// No errors and no warnings; informational findings are allowed.
    pub fn is_clean(&self) -> bool {
        self.findings.iter().all(|f| f.severity == Severity::Info)
    }

    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Finding> + 'a {
        self.findings.iter().filter(move |f| f.kind == kind)
    }

    /// Tab-separated rendering, one finding per line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for finding in &self.findings {
            out.push_str(&finding.to_string());
            out.push('\n');
        }
        out
    }

    /// Prose rendering for terminals.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&format!("{}: {} at {}: {}\n", f.severity, f.kind, f.path, f.detail));
        }
        out.push_str(&format!(
            "{} error(s), {} warning(s), {} note(s)\n",
            self.count(Severity::Error),
            self.count(Severity::Warning),
            self.count(Severity::Info)
        ));
        out
    }
}
