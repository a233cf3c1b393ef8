use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::boxology::{ArtifactKind, ProcessorKind};
use crate::graph::Iri;
use crate::vocab;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    /// Property of the paper node.
    PaperField,
    /// Property of the system node.
    SystemField,
    /// Column `ML<n>` / `KR<n>`: a step with its model(s).
    Step,
    /// Column `SW.<name>` / `Data.<name>`: system variables in one role.
    Variable,
    /// Whole cell becomes one compound node attached to the system.
    CompoundList,
}

impl FromStr for RuleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "paper-field" => RuleKind::PaperField,
            "system-field" => RuleKind::SystemField,
            "step" => RuleKind::Step,
            "variable" => RuleKind::Variable,
            "compound-list" => RuleKind::CompoundList,
            _ => return Err(format!("unknown rule kind `{s}`")),
        })
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::PaperField => "paper-field",
            RuleKind::SystemField => "system-field",
            RuleKind::Step => "step",
            RuleKind::Variable => "variable",
            RuleKind::CompoundList => "compound-list",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Handling {
    Literal,
    Integer,
    /// `iri-from-controlled-term:<Class>` → `res:<Class>.<Text_With_Underscores>`.
    ControlledTerm(String),
    /// Comma-separated values; controlled terms when a class is given.
    SplitList(Option<String>),
    /// `T-3` → `res:Pattern.T3`.
    PatternId,
}

impl FromStr for Handling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let class = |c: &str| {
            if controlled_class(c).is_some() {
                Ok(c.to_owned())
            } else {
                Err(format!("unknown controlled-term class `{c}`"))
            }
        };
        Ok(match s.split_once(':') {
            None if s == "literal" => Handling::Literal,
            None if s == "integer" => Handling::Integer,
            None if s == "split-list" => Handling::SplitList(None),
            None if s == "pattern-id" => Handling::PatternId,
            Some(("iri-from-controlled-term", c)) => Handling::ControlledTerm(class(c)?),
            Some(("split-list", c)) => Handling::SplitList(Some(class(c)?)),
            _ => return Err(format!("unknown value handling `{s}`")),
        })
    }
}

impl fmt::Display for Handling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Handling::Literal => f.write_str("literal"),
            Handling::Integer => f.write_str("integer"),
            Handling::ControlledTerm(c) => write!(f, "iri-from-controlled-term:{c}"),
            Handling::SplitList(None) => f.write_str("split-list"),
            Handling::SplitList(Some(c)) => write!(f, "split-list:{c}"),
            Handling::PatternId => f.write_str("pattern-id"),
        }
    }
}

/// Class of individuals minted for a controlled-term class name.
pub fn controlled_class(name: &str) -> Option<&'static str> {
    Some(match name {
        "Domain" => vocab::APPLICATION_DOMAIN,
        "Task" => vocab::TASK,
        "Maturity" => vocab::MATURITY_LEVEL,
        "TrainingType" => vocab::TRAINING_TYPE,
        "SymbolUsage" => vocab::SYMBOL_USAGE,
        "StatisticalModel" => vocab::STATISTICAL_MODEL,
        "SemanticModel" => vocab::SEMANTIC_MODEL,
        "Country" => vocab::COUNTRY,
        "Resource" => vocab::SEMANTIC_WEB_RESOURCE,
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnRule {
    pub column: String,
    pub kind: RuleKind,
    pub predicate: Iri,
    pub handling: Handling,
}

impl ColumnRule {
    /// Step kind and ordinal for `ML2`, `KR1`.
    pub fn step_slot(&self) -> Option<(ProcessorKind, usize)> {
        parse_step_column(&self.column)
    }

    /// Artifact kind for `SW.source`, `Data.output`.
    pub fn variable_kind(&self) -> Option<ArtifactKind> {
        parse_variable_column(&self.column)
    }
}

pub(crate) fn parse_step_column(column: &str) -> Option<(ProcessorKind, usize)> {
    let (kind, rest) = if let Some(r) = column.strip_prefix("ML") {
        (ProcessorKind::Ml, r)
    } else {
        (ProcessorKind::Kr, column.strip_prefix("KR")?)
    };
    let n: usize = rest.parse().ok()?;
    (n >= 1 && !rest.starts_with('0')).then_some((kind, n))
}

pub(crate) fn parse_variable_column(column: &str) -> Option<ArtifactKind> {
    let (kind, name) = column.split_once('.')?;
    if name.is_empty() {
        return None;
    }
    match kind {
        "SW" => Some(ArtifactKind::Sym),
        "Data" => Some(ArtifactKind::Data),
        _ => None,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown predicate `{predicate}`")]
    UnknownPredicate { line: usize, predicate: String },
    #[error("line {line}: duplicate column `{column}`")]
    DuplicateColumn { line: usize, column: String },
    #[error("no rules")]
    NoRules,
    #[error("no rule maps {0}")]
    MissingRequired(&'static str),
}

/// Column-to-vocabulary mapping for tabular system descriptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingConfig {
    rules: Vec<ColumnRule>,
}

impl MappingConfig {
    pub fn rules(&self) -> &[ColumnRule] {
        &self.rules
    }

    pub fn rule(&self, column: &str) -> Option<&ColumnRule> {
        self.rules.iter().find(|r| r.column == column)
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().map(|r| r.column.as_str())
    }

    pub(crate) fn find(&self, kind: RuleKind, predicate: &str) -> Option<&ColumnRule> {
        self.rules.iter().find(|r| r.kind == kind && r.predicate.as_str() == predicate)
    }
}

fn expand_predicate(text: &str) -> Option<Iri> {
    let full = if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        inner.to_owned()
    } else {
        let (prefix, local) = text.split_once(':')?;
        vocab::default_prefixes().expand(prefix, local)?
    };
    vocab::is_known_property(&full).then(|| Iri::new(full).ok()).flatten()
}

/// Parse the line-based config: `column <TAB> rule-kind <TAB> predicate <TAB> handling`.
/// Blank lines and lines starting with `#` are ignored.
pub fn load_config(text: &str) -> Result<MappingConfig, ConfigError> {
    let mut rules: Vec<ColumnRule> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
        let [column, kind, predicate, handling] = fields.as_slice() else {
            return Err(ConfigError::Syntax { line, message: format!("expected 4 tab-separated fields, found {}", fields.len()) });
        };
        let syntax = |message: String| ConfigError::Syntax { line, message };
        let kind: RuleKind = kind.parse().map_err(syntax)?;
        let handling: Handling = handling.parse().map_err(syntax)?;
        let predicate = expand_predicate(predicate)
            .ok_or_else(|| ConfigError::UnknownPredicate { line, predicate: (*predicate).to_owned() })?;
        if column.is_empty() {
            return Err(syntax("empty column name".into()));
        }
        if !seen.insert(column.to_string()) {
            return Err(ConfigError::DuplicateColumn { line, column: (*column).to_owned() });
        }
        match kind {
            RuleKind::Step => {
                if parse_step_column(column).is_none() {
                    return Err(syntax(format!("step column `{column}` must be named ML<n> or KR<n>")));
                }
                if !matches!(handling, Handling::ControlledTerm(_)) {
                    return Err(syntax("step columns need iri-from-controlled-term".into()));
                }
            }
            RuleKind::Variable => {
                if parse_variable_column(column).is_none() {
                    return Err(syntax(format!("variable column `{column}` must be named SW.<name> or Data.<name>")));
                }
                if ![vocab::HAS_SOURCE_VARIABLE, vocab::HAS_INTERMEDIATE_VARIABLE, vocab::HAS_OUTPUT_VARIABLE]
                    .contains(&predicate.as_str())
                {
                    return Err(syntax("variable columns must target a variable-role predicate".into()));
                }
                if !matches!(handling, Handling::ControlledTerm(_)) {
                    return Err(syntax("variable columns need iri-from-controlled-term".into()));
                }
            }
            RuleKind::CompoundList => {
                if !matches!(handling, Handling::SplitList(Some(_))) {
                    return Err(syntax("compound-list columns need split-list:<Class>".into()));
                }
            }
            RuleKind::PaperField | RuleKind::SystemField => {
                if handling == Handling::PatternId && kind != RuleKind::SystemField {
                    return Err(syntax("pattern-id applies to system fields".into()));
                }
            }
        }
        rules.push(ColumnRule { column: (*column).to_owned(), kind, predicate, handling });
    }
    if rules.is_empty() {
        return Err(ConfigError::NoRules);
    }
    let config = MappingConfig { rules };
    for (kind, predicate, what) in [
        (RuleKind::PaperField, vocab::TERMS_TITLE, "the paper title"),
        (RuleKind::PaperField, vocab::YEAR, "the publication year"),
        (RuleKind::SystemField, vocab::HAS_CORRESPONDING_PATTERN, "the pattern id"),
    ] {
        if config.find(kind, predicate).is_none() {
            return Err(ConfigError::MissingRequired(what));
        }
    }
    Ok(config)
}
