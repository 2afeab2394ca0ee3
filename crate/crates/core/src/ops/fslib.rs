use std::collections::BTreeMap;

use crate::codec::{Codec, CodecError, Msd};
use crate::spec::{Specification, CATEGORY_ATTRIBUTE};
use crate::xml::XmlWriter;

/// Language label of the generated libraries; identifiers and symbols use
/// English codes and names.
const LIBRARY_LANGUAGE: &str = "en";

/// One feature: an attribute-value pair at a position, or the category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureEntry {
    /// `<Cat><position>.<code>`, or `<Cat>0.` for the category itself.
    pub id: String,
    pub name: String,
    pub value: String,
    pub language: String,
}

/// One feature structure: an MSD and the features it is made of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureEntry {
    pub id: String,
    pub language: String,
    /// Feature identifiers in ascending position order.
    pub feats: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureLibraries {
    pub features: Vec<FeatureEntry>,
    pub structures: Vec<StructureEntry>,
}

impl FeatureLibraries {
    pub fn is_empty(&self) -> bool {
        self.features.is_empty() && self.structures.is_empty()
    }

    pub(crate) fn write(&self, w: &mut XmlWriter) {
        w.open("fLib", &[]);
        for f in &self.features {
            w.open(
                "f",
                &[("name", &f.name), ("xml:id", &f.id), ("xml:lang", &f.language)],
            );
            w.empty("symbol", &[("value", &f.value)]);
            w.close("f");
        }
        w.close("fLib");
        w.open("fvLib", &[]);
        for s in &self.structures {
            let feats: Vec<String> = s.feats.iter().map(|f| format!("#{f}")).collect();
            w.empty(
                "fs",
                &[("xml:id", &s.id), ("xml:lang", &s.language), ("feats", &feats.join(" "))],
            );
        }
        w.close("fvLib");
    }

    /// The `fLib` and `fvLib` elements as an XML fragment.
    pub fn to_xml(&self) -> String {
        let mut w = XmlWriter::new();
        self.write(&mut w);
        w.finish()
    }
}

/// Builds the feature and feature-structure libraries for the MSDs of one
/// language, written in the language's own ordering with English codes.
///
/// Features are listed by category, position and value order; structures
/// in MSD collation order. Duplicate MSDs are listed once.
pub fn emit_feature_libraries<S: AsRef<str>>(
    spec: &Specification,
    language: &str,
    msds: &[S],
) -> Result<FeatureLibraries, (String, CodecError)> {
    let codec = Codec::new(spec);
    let ordering = spec.native_ordering(language);
    // (category rank, position, value rank) -> entry
    let mut features: BTreeMap<(usize, usize, usize), FeatureEntry> = BTreeMap::new();
    let mut structures: BTreeMap<(Vec<u32>, String), StructureEntry> = BTreeMap::new();

    for raw in msds {
        let text = raw.as_ref();
        let msd = Msd::new(text, language, ordering);
        let key = codec.collation_key(&msd).map_err(|e| (text.to_string(), e))?;
        if structures.contains_key(&(key.0.clone(), text.to_string())) {
            continue;
        }
        let mut chars = text.chars();
        let cat_code = chars.next().expect("normalised MSD is non-empty");
        let cat = spec.category(cat_code).expect("decoded category exists");
        let rank = spec.category_rank(cat_code).expect("decoded category exists");
        let cat_id = format!("{cat_code}0.");
        features.entry((rank, 0, 0)).or_insert_with(|| FeatureEntry {
            id: cat_id.clone(),
            name: CATEGORY_ATTRIBUTE.to_string(),
            value: cat.name.clone(),
            language: LIBRARY_LANGUAGE.to_string(),
        });
        let mut feats = vec![cat_id];
        for (i, code) in chars.enumerate() {
            if code == '-' {
                continue;
            }
            let position = i + 1;
            let attr = match crate::spec::lookup(spec, language, cat_code, position, ordering) {
                Ok(crate::spec::Slot::Attribute(a)) => a,
                _ => return Err((text.to_string(), CodecError::NoAttributeAt { position })),
            };
            let value_rank = attr.values.iter().position(|v| v.code == code).expect("decoded value exists");
            let id = format!("{cat_code}{position}.{code}");
            features.entry((rank, position, value_rank)).or_insert_with(|| FeatureEntry {
                id: id.clone(),
                name: attr.name.clone(),
                value: attr.values[value_rank].name.clone(),
                language: LIBRARY_LANGUAGE.to_string(),
            });
            feats.push(id);
        }
        structures.insert(
            (key.0, text.to_string()),
            StructureEntry {
                id: text.to_string(),
                language: LIBRARY_LANGUAGE.to_string(),
                feats,
            },
        );
    }
    Ok(FeatureLibraries {
        features: features.into_values().collect(),
        structures: structures.into_values().collect(),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::fixtures::sample_spec;

    #[test]
    fn noun_structure_references() {
        let spec = sample_spec();
        let libs = emit_feature_libraries(&spec, "sl", &["Ncmsn"]).unwrap();
        assert_eq!(libs.structures.len(), 1);
        let feats: Vec<String> = libs.structures[0].feats.iter().map(|f| format!("#{f}")).collect();
        assert_eq!(feats.join(" "), "#N0. #N1.c #N2.m #N3.s #N4.n");
    }

    #[test]
    fn empty_input_gives_empty_libraries() {
        let spec = sample_spec();
        let libs = emit_feature_libraries::<&str>(&spec, "sl", &[]).unwrap();
        assert!(libs.is_empty());
        assert_eq!(libs.to_xml(), "<fLib>\n</fLib>\n<fvLib>\n</fvLib>\n");
    }

    #[test]
    fn shared_features_are_listed_once() {
        let spec = sample_spec();
        let libs = emit_feature_libraries(&spec, "sl", &["Ncmsg", "Ncmsn", "Ncmsn"]).unwrap();
        let ids: Vec<&str> = libs.features.iter().map(|f| f.id.as_str()).collect();
        assert_eq!(ids, ["N0.", "N1.c", "N2.m", "N3.s", "N4.n", "N4.g"]);
        let fs: Vec<&str> = libs.structures.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(fs, ["Ncmsn", "Ncmsg"]);
    }

    #[test]
    fn xml_layout() {
        let spec = sample_spec();
        let libs = emit_feature_libraries(&spec, "sl", &["Ncmsn"]).unwrap();
        let xml = libs.to_xml();
        assert!(xml.starts_with(
            "<fLib>\n  <f name=\"CATEGORY\" xml:id=\"N0.\" xml:lang=\"en\">\n    <symbol value=\"Noun\"/>\n  </f>\n"
        ));
        assert!(xml.contains(
            "  <fs xml:id=\"Ncmsn\" xml:lang=\"en\" feats=\"#N0. #N1.c #N2.m #N3.s #N4.n\"/>\n"
        ));
    }

    #[test]
    fn every_reference_resolves() {
        let spec = sample_spec();
        let msds: Vec<String> = spec.section("sl").unwrap().msd_index.iter().map(|e| e.msd.clone()).collect();
        let libs = emit_feature_libraries(&spec, "sl", &msds).unwrap();
        let ids: BTreeSet<&str> = libs.features.iter().map(|f| f.id.as_str()).collect();
        let used: BTreeSet<&str> = libs.structures.iter().flat_map(|s| s.feats.iter().map(String::as_str)).collect();
        assert_eq!(ids, used);
        // particular positions: Slovene verbs put Aspect second
        let vmen = libs.structures.iter().find(|s| s.id == "Vmen").unwrap();
        assert_eq!(vmen.feats, ["V0.", "V1.m", "V2.e", "V3.n"]);
    }

    #[test]
    fn invalid_msd_is_an_error() {
        let spec = sample_spec();
        let err = emit_feature_libraries(&spec, "sl", &["Ncmsn", "Ncmsz"]).unwrap_err();
        assert_eq!(err.0, "Ncmsz");
        assert!(emit_feature_libraries(&spec, "sl", &["Ncmsn-"]).is_err());
    }
}
