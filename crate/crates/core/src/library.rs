//! A JSON component library searched by session type up to isomorphism.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iso::{id_process, normal_form, synthesize, AdapterPair};
use crate::syntax::{parse_type, ParseError, SessionType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub name: String,
    #[serde(rename = "type")]
    pub type_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl ComponentRecord {
    pub fn new(name: impl Into<String>, type_text: impl Into<String>) -> Self {
        ComponentRecord { name: name.into(), type_text: type_text.into(), description: None }
    }

    pub fn session_type(&self) -> Result<SessionType, ParseError> {
        parse_type(&self.type_text)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LibraryFile {
    pub records: Vec<ComponentRecord>,
}

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed library JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("component `{name}` has an unparseable type: {source}")]
    BadType { name: String, source: ParseError },
    #[error("duplicate component name `{0}`")]
    DuplicateName(String),
}

impl LibraryFile {
    pub fn new(records: Vec<ComponentRecord>) -> Self {
        LibraryFile { records }
    }

    pub fn from_json(text: &str) -> Result<Self, LibraryError> {
        let lib: LibraryFile = serde_json::from_str(text)?;
        lib.validate()?;
        Ok(lib)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records always serialize");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<(), LibraryError> {
        let mut seen = BTreeSet::new();
        for r in &self.records {
            if !seen.insert(r.name.as_str()) {
                return Err(LibraryError::DuplicateName(r.name.clone()));
            }
            r.session_type()
                .map_err(|source| LibraryError::BadType { name: r.name.clone(), source })?;
        }
        Ok(())
    }
}

pub fn lib_load(path: impl AsRef<Path>) -> Result<LibraryFile, LibraryError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| LibraryError::Io { path: path.to_path_buf(), source })?;
    LibraryFile::from_json(&text)
}

pub fn lib_save(lib: &LibraryFile, path: impl AsRef<Path>) -> Result<(), LibraryError> {
    let path = path.as_ref();
    lib.validate()?;
    fs::write(path, lib.to_json()).map_err(|source| LibraryError::Io { path: path.to_path_buf(), source })
}

#[derive(Clone, Debug)]
pub struct SearchHit {
    pub record: ComponentRecord,
    /// Converts the component's type into the query type.
    pub adapters: AdapterPair,
    pub exact: bool,
}

/// Normal forms computed so far, shared across queries.
#[derive(Default)]
pub struct Searcher {
    normal_forms: HashMap<SessionType, SessionType>,
}

impl Searcher {
    pub fn new() -> Self {
        Self::default()
    }

    fn nf(&mut self, t: &SessionType) -> SessionType {
        self.normal_forms.entry(t.clone()).or_insert_with(|| normal_form(t)).clone()
    }

    /// Records whose type is isomorphic to `query`, exact matches first.
    pub fn search(&mut self, lib: &LibraryFile, query: &SessionType) -> Vec<SearchHit> {
        let want = self.nf(query);
        let mut exact = Vec::new();
        let mut iso = Vec::new();
        for r in &lib.records {
            let Ok(t) = r.session_type() else { continue };
            if &t == query {
                let adapters = AdapterPair {
                    forward: id_process(&t),
                    backward: id_process(&t),
                    from: t.clone(),
                    to: t,
                };
                exact.push(SearchHit { record: r.clone(), adapters, exact: true });
            } else if self.nf(&t) == want {
                if let Ok(adapters) = synthesize(&t, query) {
                    iso.push(SearchHit { record: r.clone(), adapters, exact: false });
                }
            }
        }
        exact.extend(iso);
        exact
    }
}

pub fn search_by_iso(lib: &LibraryFile, query: &SessionType) -> Vec<SearchHit> {
    Searcher::new().search(lib, query)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{certify_iso_witnesses, SearchOptions};

    fn ty(s: &str) -> SessionType {
        parse_type(s).unwrap()
    }

    #[test]
    fn output_order_is_found_with_adapters() {
        let lib = LibraryFile::new(vec![ComponentRecord::new("sendIB", "!int.!bool.end")]);
        let hits = search_by_iso(&lib, &ty("!bool.!int.end"));
        assert_eq!(hits.len(), 1);
        assert!(!hits[0].exact);
        assert!(hits[0].adapters.forward.contains_par() || hits[0].adapters.forward.size() > 1);
        let a = &hits[0].adapters;
        certify_iso_witnesses(&a.from, &a.to, &a.forward, &a.backward, &SearchOptions::default()).unwrap();
    }

    #[test]
    fn unit_output_matches_end() {
        let lib = LibraryFile::new(vec![ComponentRecord::new("unitSrc", "!unit.end")]);
        let hits = search_by_iso(&lib, &SessionType::End);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].adapters.check().ok(), Some(()));
    }

    #[test]
    fn empty_library_has_no_hits() {
        assert!(search_by_iso(&LibraryFile::default(), &ty("!int.end")).is_empty());
    }

    #[test]
    fn exact_matches_come_first() {
        let lib = LibraryFile::new(vec![
            ComponentRecord::new("swapped", "!bool.!int.end"),
            ComponentRecord::new("other", "?int.end"),
            ComponentRecord::new("same", "!int.!bool.end"),
        ]);
        let hits = search_by_iso(&lib, &ty("!int.!bool.end"));
        let names: Vec<&str> = hits.iter().map(|h| h.record.name.as_str()).collect();
        assert_eq!(names, ["same", "swapped"]);
        assert!(hits[0].exact);
    }

    #[test]
    fn load_single_record() {
        let lib = LibraryFile::from_json(r#"[{"name":"a","type":"end"}]"#).unwrap();
        assert_eq!(lib.records, vec![ComponentRecord::new("a", "end")]);
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let err = LibraryFile::from_json(r#"[{"name":"a","type":"end"},{"name":"a","type":"!int.end"}]"#).unwrap_err();
        assert!(err.to_string().contains("`a`"), "{err}");
    }

    #[test]
    fn bad_type_and_bad_json_are_rejected() {
        assert!(matches!(
            LibraryFile::from_json(r#"[{"name":"a","type":"!nat.end"}]"#),
            Err(LibraryError::BadType { .. })
        ));
        assert!(matches!(LibraryFile::from_json("[{"), Err(LibraryError::Json(_))));
        assert!(matches!(LibraryFile::from_json(r#"[{"name":"a"}]"#), Err(LibraryError::Json(_))));
    }

    #[test]
    fn save_then_load_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lib.json");
        let mut rec = ComponentRecord::new("b", "?bool.end + end");
        rec.description = Some("reads a flag".into());
        let lib = LibraryFile::new(vec![ComponentRecord::new("a", "end"), rec]);
        lib_save(&lib, &path).unwrap();
        assert_eq!(lib_load(&path).unwrap(), lib);
        let text = fs::read_to_string(&path).unwrap();
        lib_save(&lib_load(&path).unwrap(), &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), text);
    }
}
