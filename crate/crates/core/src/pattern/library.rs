use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::template::{TemplateError, WorkflowTemplate};
use crate::graph::{parse, Format, ParseError};

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Template { path: PathBuf, source: TemplateError },
    #[error("pattern {id} defined in both {} and {}", first.display(), second.display())]
    DuplicateId { id: String, first: PathBuf, second: PathBuf },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no pattern with id {0:?} in the library")]
pub struct LookupError(pub String);

/// Templates keyed by id (hyphens stripped).
#[derive(Clone, Debug, Default)]
pub struct PatternLibrary {
    templates: BTreeMap<String, WorkflowTemplate>,
    sources: BTreeMap<String, PathBuf>,
}

impl PatternLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert or replace a template.
    pub fn insert(&mut self, template: WorkflowTemplate) {
        self.templates.insert(template.id.clone(), template);
    }

    /// Accepts `T3` or `T-3`.
    pub fn lookup(&self, id: &str) -> Result<&WorkflowTemplate, LookupError> {
        let key: String = id.chars().filter(|c| *c != '-').collect();
        self.templates.get(&key).ok_or_else(|| LookupError(id.to_owned()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.templates.keys().map(String::as_str)
    }

    pub fn templates(&self) -> impl Iterator<Item = &WorkflowTemplate> {
        self.templates.values()
    }

    pub fn source(&self, id: &str) -> Option<&Path> {
        self.sources.get(id).map(PathBuf::as_path)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

impl FromIterator<WorkflowTemplate> for PatternLibrary {
    fn from_iter<I: IntoIterator<Item = WorkflowTemplate>>(iter: I) -> Self {
        let mut lib = PatternLibrary::new();
        for t in iter {
            lib.insert(t);
        }
        lib
    }
}

/// Load every `*.ttl` file in `dir`, one template per file.
pub fn load_library(dir: &Path) -> Result<PatternLibrary, LibraryError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| LibraryError::Io { path, source }
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io(dir))?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io(dir))?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "ttl"));
    paths.sort();

    let mut lib = PatternLibrary::new();
    for path in paths {
        let text = fs::read_to_string(&path).map_err(io(&path))?;
        let graph =
            parse(&text, Format::Turtle).map_err(|source| LibraryError::Parse { path: path.clone(), source })?;
        let template = WorkflowTemplate::from_graph(&graph)
            .map_err(|source| LibraryError::Template { path: path.clone(), source })?;
        if let Some(first) = lib.sources.get(&template.id) {
            return Err(LibraryError::DuplicateId { id: template.id, first: first.clone(), second: path });
        }
        lib.sources.insert(template.id.clone(), path);
        lib.insert(template);
    }
    Ok(lib)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxology::parse_pattern;
    use crate::graph::serialize;
    use crate::pattern::build_template;

    fn write(dir: &Path, name: &str, id: &str, notation: &str) {
        let t = build_template(id, &parse_pattern(notation).unwrap()).unwrap();
        fs::write(dir.join(name), serialize(&t.to_graph(), Format::Turtle)).unwrap();
    }

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("swemls-lib-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn loads_and_looks_up_with_or_without_hyphen() {
        let dir = scratch("ok");
        write(&dir, "a1.ttl", "A1", "[sym -> ML -> sym]");
        fs::write(dir.join("README.txt"), "ignored").unwrap();
        let lib = load_library(&dir).unwrap();
        assert_eq!(lib.len(), 1);
        assert_eq!(lib.lookup("A-1").unwrap().id, "A1");
        assert_eq!(lib.lookup("Z9").unwrap_err(), LookupError("Z9".into()));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn duplicate_ids_name_both_files() {
        let dir = scratch("dup");
        write(&dir, "one.ttl", "A1", "[sym -> ML -> sym]");
        write(&dir, "two.ttl", "A1", "[data -> ML -> sym]");
        let err = load_library(&dir).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("one.ttl") && msg.contains("two.ttl"), "{msg}");
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn parse_errors_name_the_file() {
        let dir = scratch("bad");
        fs::write(dir.join("broken.ttl"), "res:x a .").unwrap();
        let msg = load_library(&dir).unwrap_err().to_string();
        assert!(msg.contains("broken.ttl"), "{msg}");
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn missing_directory_is_an_io_error() {
        let err = load_library(Path::new("/nonexistent/swemls-patterns")).unwrap_err();
        assert!(matches!(err, LibraryError::Io { .. }));
    }

    #[test]
    fn shipped_library_loads() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../patterns");
        let lib = load_library(&dir).unwrap();
        for id in ["T3", "A1", "F2", "F3", "F4"] {
            let t = lib.lookup(id).unwrap();
            let notation = t.notation.as_deref().unwrap();
            let rebuilt = build_template(id, &parse_pattern(notation).unwrap()).unwrap();
            assert_eq!(&rebuilt, t, "{id}");
        }
    }
}
