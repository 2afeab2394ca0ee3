//! Toolkit for MULTEXT-East style morphosyntactic resources: tagset
//! specifications, MSD strings, lexica, annotated corpora and sentence
//! alignments.

pub mod alignment;
pub mod codec;
pub mod corpus;
pub mod ids;
pub mod lexicon;
pub mod ops;
pub mod report;
pub mod spec;
pub(crate) mod xml;

#[doc(hidden)]
pub mod fixtures;

pub use codec::{Codec, FeatureStructure, Msd};
pub use report::{Finding, Report, Severity};
pub use spec::{load_spec, Ordering, SpecFormat, Specification};
