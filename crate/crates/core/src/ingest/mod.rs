//! Tabular system descriptions (TSV with a header row) to instance graphs,
//! driven by a declarative column mapping.

mod config;

pub use config::{controlled_class, load_config, ColumnRule, ConfigError, Handling, MappingConfig, RuleKind};

use std::collections::BTreeMap;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::boxology::{ArtifactKind, ProcessorKind};
use crate::graph::{Graph, Iri, Literal, Term, Triple};
use crate::pattern::{normalize_id, template_iri};
use crate::vocab;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("reading table: {0}")]
    Csv(#[from] csv::Error),
    #[error("header lacks configured column `{0}`")]
    MissingColumn(String),
    #[error("header column `{0}` has no mapping rule")]
    UnmappedColumn(String),
}

/// A data row that was rejected; other rows are unaffected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowError {
    /// 1-based line number in the input, counting the header.
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct IngestOutcome {
    pub graph: Graph,
    pub rows: usize,
    pub ingested: usize,
    pub errors: Vec<RowError>,
}

const BASE36: &[u8] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

fn digest(parts: &[&str]) -> [u8; 32] {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    h.finalize().into()
}

fn base36_suffix(parts: &[&str]) -> String {
    let d = digest(parts);
    let mut n = u64::from_be_bytes(d[..8].try_into().expect("8 bytes"));
    let mut out = [0u8; 8];
    for slot in out.iter_mut().rev() {
        *slot = BASE36[(n % 36) as usize];
        n /= 36;
    }
    String::from_utf8(out.to_vec()).expect("ascii")
}

fn hex_suffix(parts: &[&str]) -> String {
    digest(parts)[..4].iter().map(|b| format!("{b:02x}")).collect()
}

/// `res:System_` plus 8 uppercase alphanumerics derived from title and year.
pub fn mint_system_iri(title: &str, year: &str) -> Iri {
    vocab::res(&format!("System_{}", base36_suffix(&["system", title.trim(), year.trim()])))
}

pub fn mint_paper_iri(title: &str, year: &str) -> Iri {
    vocab::res(&format!("Paper_{}", base36_suffix(&["paper", title.trim(), year.trim()])))
}

fn mint_compound(prefix: &str, system: &Iri, column: &str, members: &[String]) -> Iri {
    let mut sorted: Vec<&str> = members.iter().map(String::as_str).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut parts = vec![system.as_str(), column];
    parts.extend(sorted);
    vocab::res(&format!("{prefix}_{}", hex_suffix(&parts)))
}

/// Local name for a controlled term: whitespace and slashes become `_`,
/// characters not allowed in IRIs are percent-encoded.
pub fn term_local(text: &str) -> String {
    let mut out = String::new();
    for c in text.trim().chars() {
        match c {
            c if c.is_whitespace() || c == '/' => out.push('_'),
            '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' | '%' => out.push_str(&format!("%{:02X}", c as u32)),
            c if c.is_control() => out.push_str(&format!("%{:02X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// `res:<Class>.<local>`, e.g. `res:Domain.Medicine_Health`.
pub fn controlled_term(class: &str, text: &str) -> Iri {
    vocab::res(&format!("{class}.{}", term_local(text)))
}

fn split_list(cell: &str) -> Vec<String> {
    cell.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_owned).collect()
}

/// A cell item: `a,b` or `{a}` is a compound, anything else a single term.
fn parse_item(item: &str) -> (Vec<String>, bool) {
    let item = item.trim();
    if let Some(inner) = item.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        return (split_list(inner), true);
    }
    let members = split_list(item);
    let compound = members.len() > 1;
    (members, compound)
}

struct RowBuilder {
    triples: Vec<Triple>,
}

impl RowBuilder {
    fn add(&mut self, s: &Iri, p: &Iri, o: impl Into<Term>) {
        self.triples.push(Triple::new(Term::Iri(s.clone()), p.clone(), o.into()).expect("IRI subject"));
    }

    fn typed(&mut self, s: &Iri, class: &'static str) {
        self.add(s, &vocab::iri(vocab::RDF_TYPE), vocab::iri(class));
    }

    /// Controlled term node with its type and label.
    fn term(&mut self, class_name: &str, class: &'static str, text: &str) -> Iri {
        let iri = controlled_term(class_name, text);
        self.typed(&iri, class);
        self.add(&iri, &vocab::iri(vocab::RDFS_LABEL), Literal::plain(text.trim()));
        iri
    }

    fn field(&mut self, subject: &Iri, rule: &ColumnRule, cell: &str) -> Result<(), String> {
        let p = &rule.predicate;
        match &rule.handling {
            Handling::Literal => self.add(subject, p, Literal::plain(cell)),
            Handling::Integer => {
                let n: i64 = cell.parse().map_err(|_| format!("column {}: `{cell}` is not an integer", rule.column))?;
                self.add(subject, p, Literal::integer(n));
            }
            Handling::ControlledTerm(class) => {
                let t = self.term(class, controlled_class(class).expect("validated"), cell);
                self.add(subject, p, t);
            }
            Handling::SplitList(None) => {
                for v in split_list(cell) {
                    self.add(subject, p, Literal::plain(v));
                }
            }
            Handling::SplitList(Some(class)) => {
                for v in split_list(cell) {
                    let t = self.term(class, controlled_class(class).expect("validated"), &v);
                    self.add(subject, p, t);
                }
            }
            Handling::PatternId => {
                let id = normalize_id(cell).map_err(|e| format!("column {}: {e}", rule.column))?;
                self.add(subject, p, template_iri(&id));
            }
        }
        Ok(())
    }

    /// Single term or compound node for one cell item.
    fn item(
        &mut self,
        system: &Iri,
        rule: &ColumnRule,
        item: &str,
        compound_prefix: &str,
        class_name: &str,
        class: &'static str,
    ) -> Result<Iri, String> {
        let (members, compound) = parse_item(item);
        if members.is_empty() {
            return Err(format!("column {}: empty item in `{item}`", rule.column));
        }
        if !compound {
            return Ok(self.term(class_name, class, &members[0]));
        }
        let node = mint_compound(compound_prefix, system, &rule.column, &members);
        for m in &members {
            let t = self.term(class_name, class, m);
            self.add(&node, &vocab::iri(vocab::HAS_COMPOUND_ELEMENT), t);
        }
        Ok(node)
    }
}

fn cell<'a>(row: &BTreeMap<&str, &'a str>, rule: Option<&ColumnRule>) -> &'a str {
    rule.and_then(|r| row.get(r.column.as_str()).copied()).unwrap_or("").trim()
}

fn ingest_row(row: &BTreeMap<&str, &str>, config: &MappingConfig) -> Result<Vec<Triple>, String> {
    let title = cell(row, config.find(RuleKind::PaperField, vocab::TERMS_TITLE));
    let year = cell(row, config.find(RuleKind::PaperField, vocab::YEAR));
    let pattern = cell(row, config.find(RuleKind::SystemField, vocab::HAS_CORRESPONDING_PATTERN));
    if title.is_empty() {
        return Err("missing title".into());
    }
    if year.len() != 4 || !year.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("year `{year}` is not a 4-digit integer"));
    }
    if pattern.is_empty() {
        return Err("missing pattern id".into());
    }
    if !config.rules().iter().any(|r| r.kind == RuleKind::Step && !cell(row, Some(r)).is_empty()) {
        return Err("no steps".into());
    }

    let system = mint_system_iri(title, year);
    let paper = mint_paper_iri(title, year);
    let mut b = RowBuilder { triples: Vec::new() };
    b.typed(&paper, vocab::PAPER);
    b.typed(&system, vocab::SYSTEM);
    b.add(&paper, &vocab::iri(vocab::REPORTS), system.clone());

    for rule in config.rules() {
        let value = cell(row, Some(rule));
        if value.is_empty() {
            continue;
        }
        match rule.kind {
            RuleKind::PaperField => b.field(&paper, rule, value)?,
            RuleKind::SystemField => b.field(&system, rule, value)?,
            RuleKind::Step => {
                let (kind, ordinal) = rule.step_slot().expect("validated");
                let Handling::ControlledTerm(class_name) = &rule.handling else { unreachable!("validated") };
                let step = Iri::new(format!("{}.{}", system.as_str(), rule.column)).expect("column is alphanumeric");
                let has_step = match kind {
                    ProcessorKind::Ml => vocab::HAS_STEP_ML,
                    ProcessorKind::Kr => vocab::HAS_STEP_KR,
                };
                b.add(&system, &vocab::iri(has_step), step.clone());
                b.add(&step, &vocab::iri(vocab::STEP_ORDINAL), Literal::integer(ordinal as i64));
                let class = controlled_class(class_name).expect("validated");
                let model = b.item(&system, rule, value, "Model", class_name, class)?;
                b.add(&step, &rule.predicate, model);
            }
            RuleKind::Variable => {
                let Handling::ControlledTerm(class_name) = &rule.handling else { unreachable!("validated") };
                let class = match rule.variable_kind().expect("validated") {
                    ArtifactKind::Sym => vocab::SEMANTIC_WEB_RESOURCE,
                    ArtifactKind::Data => vocab::DATA_RESOURCE,
                };
                let prefix = if class == vocab::DATA_RESOURCE { "Data" } else { "SW" };
                for item in value.split('|').filter(|s| !s.trim().is_empty()) {
                    let node = b.item(&system, rule, item, prefix, class_name, class)?;
                    if parse_item(item).1 {
                        b.typed(&node, class);
                    }
                    b.add(&system, &rule.predicate, node);
                }
            }
            RuleKind::CompoundList => {
                let Handling::SplitList(Some(class_name)) = &rule.handling else { unreachable!("validated") };
                let class = controlled_class(class_name).expect("validated");
                let members = split_list(value);
                let node = mint_compound("Compound", &system, &rule.column, &members);
                for m in &members {
                    let t = b.term(class_name, class, m);
                    b.add(&node, &vocab::iri(vocab::HAS_COMPOUND_ELEMENT), t);
                }
                b.add(&system, &rule.predicate, node);
            }
        }
    }
    Ok(b.triples)
}

/// Ingest a TSV table. Rows failing the record invariants (title, 4-digit
/// year, pattern id, at least one step) are reported and skipped.
pub fn ingest_rows(tsv: &str, config: &MappingConfig) -> Result<IngestOutcome, IngestError> {
    let mut graph = Graph::new();
    *graph.prefixes_mut() = vocab::default_prefixes();
    if tsv.trim().is_empty() {
        return Ok(IngestOutcome { graph, rows: 0, ingested: 0, errors: vec![] });
    }
    let mut reader =
        csv::ReaderBuilder::new().delimiter(b'\t').quoting(false).flexible(true).from_reader(tsv.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    for column in config.columns() {
        if !header.iter().any(|h| h == column) {
            return Err(IngestError::MissingColumn(column.to_owned()));
        }
    }
    if let Some(extra) = header.iter().find(|h| config.rule(h).is_none()) {
        return Err(IngestError::UnmappedColumn(extra.clone()));
    }
    let records: Vec<(usize, csv::StringRecord)> = reader
        .records()
        .map(|r| r.map(|rec| (rec.position().map_or(0, |p| p.line() as usize), rec)))
        .collect::<Result<_, _>>()?;

    let results: Vec<(usize, Result<Vec<Triple>, String>)> = records
        .par_iter()
        .map(|(line, rec)| {
            if rec.len() != header.len() {
                return (*line, Err(format!("expected {} fields, found {}", header.len(), rec.len())));
            }
            let row: BTreeMap<&str, &str> = header.iter().map(String::as_str).zip(rec.iter()).collect();
            (*line, ingest_row(&row, config))
        })
        .collect();

    let mut errors = Vec::new();
    let mut ingested = 0;
    for (line, result) in results {
        match result {
            Ok(triples) => {
                graph.extend(triples);
                ingested += 1;
            }
            Err(message) => errors.push(RowError { line, message }),
        }
    }
    Ok(IngestOutcome { graph, rows: records.len(), ingested, errors })
}

fn label_of(graph: &Graph, node: &Term) -> String {
    if let Some(Term::Literal(l)) = graph.object(node, &vocab::iri(vocab::RDFS_LABEL)) {
        return l.lexical().to_owned();
    }
    let local = node.as_iri().map_or_else(|| node.str_value(), |i| i.local_name());
    local.split_once('.').map_or(local, |(_, rest)| rest).to_owned()
}

fn item_text(graph: &Graph, node: &Term) -> String {
    let mut members: Vec<String> = graph
        .objects(node, &vocab::iri(vocab::HAS_COMPOUND_ELEMENT))
        .iter()
        .map(|m| label_of(graph, m))
        .collect();
    match members.len() {
        0 => label_of(graph, node),
        1 => format!("{{{}}}", members[0]),
        _ => {
            members.sort();
            members.join(",")
        }
    }
}

fn field_text(graph: &Graph, subject: &Term, rule: &ColumnRule) -> String {
    let objects = graph.objects(subject, &rule.predicate);
    let mut values: Vec<String> = match &rule.handling {
        Handling::Literal | Handling::Integer | Handling::SplitList(None) => {
            objects.iter().map(|o| o.str_value().to_owned()).collect()
        }
        Handling::ControlledTerm(_) | Handling::SplitList(Some(_)) => objects.iter().map(|o| label_of(graph, o)).collect(),
        Handling::PatternId => objects
            .iter()
            .filter_map(|o| o.as_iri())
            .map(|i| i.local_name().trim_start_matches("Pattern.").to_owned())
            .collect(),
    };
    values.sort();
    values.join(",")
}

/// Write the systems in `graph` back as a table in `config`'s column order.
/// Ingesting the result reproduces the graph.
pub fn export_table(graph: &Graph, config: &MappingConfig) -> String {
    let mut out = config.columns().collect::<Vec<_>>().join("\t");
    out.push('\n');
    let systems = graph.subjects(&vocab::iri(vocab::RDF_TYPE), &vocab::term(vocab::SYSTEM));
    for system in systems {
        let Some(paper) = graph.subjects(&vocab::iri(vocab::REPORTS), &system).into_iter().next() else {
            continue;
        };
        let cells: Vec<String> = config
            .rules()
            .iter()
            .map(|rule| match rule.kind {
                RuleKind::PaperField => field_text(graph, &paper, rule),
                RuleKind::SystemField => field_text(graph, &system, rule),
                RuleKind::Step => {
                    let (kind, _) = rule.step_slot().expect("validated");
                    let has_step = match kind {
                        ProcessorKind::Ml => vocab::HAS_STEP_ML,
                        ProcessorKind::Kr => vocab::HAS_STEP_KR,
                    };
                    let step = Term::Iri(
                        Iri::new(format!("{}.{}", system.str_value(), rule.column)).expect("column is alphanumeric"),
                    );
                    if !graph.objects(&system, &vocab::iri(has_step)).contains(&step) {
                        return String::new();
                    }
                    graph.object(&step, &rule.predicate).map(|m| item_text(graph, &m)).unwrap_or_default()
                }
                RuleKind::Variable => {
                    let class = match rule.variable_kind().expect("validated") {
                        ArtifactKind::Sym => vocab::SEMANTIC_WEB_RESOURCE,
                        ArtifactKind::Data => vocab::DATA_RESOURCE,
                    };
                    let mut items: Vec<String> = graph
                        .objects(&system, &rule.predicate)
                        .iter()
                        .filter(|v| graph.has_type(v, &vocab::iri(class)))
                        .map(|v| item_text(graph, v))
                        .collect();
                    items.sort();
                    items.join("|")
                }
                RuleKind::CompoundList => {
                    let mut members: Vec<String> = graph
                        .objects(&system, &rule.predicate)
                        .iter()
                        .flat_map(|c| graph.objects(c, &vocab::iri(vocab::HAS_COMPOUND_ELEMENT)))
                        .map(|m| label_of(graph, &m))
                        .collect();
                    members.sort();
                    members.join(",")
                }
            })
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}
