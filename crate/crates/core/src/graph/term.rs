use std::fmt;

use super::GraphError;
use crate::vocab;

/// An absolute IRI. Never empty, never contains whitespace or the characters
/// that N-Triples would need to escape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(text: impl Into<String>) -> Result<Self, GraphError> {
        let text = text.into();
        if text.is_empty() {
            return Err(GraphError::InvalidIri { iri: text, reason: "empty" });
        }
        if let Some(c) = text.chars().find(|c| !is_iri_char(*c)) {
            let reason = if c.is_whitespace() { "contains whitespace" } else { "contains a forbidden character" };
            return Err(GraphError::InvalidIri { iri: text, reason });
        }
        Ok(Iri(text))
    }

    /// Builds an IRI from a compile-time constant known to be valid.
    pub(crate) fn from_static(text: &'static str) -> Self {
        debug_assert!(Iri::new(text).is_ok(), "invalid constant IRI {text}");
        Iri(text.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `/` or `#`.
    pub fn local_name(&self) -> &str {
        let cut = self.0.rfind(['/', '#']).map(|i| i + 1).unwrap_or(0);
        &self.0[cut..]
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

fn is_iri_char(c: char) -> bool {
    !(c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    lang: Option<String>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), datatype: None, lang: None }
    }

    /// A typed literal. `xsd:string` collapses to a plain literal so both
    /// spellings compare equal.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        let datatype = (datatype.as_str() != vocab::XSD_STRING).then_some(datatype);
        Literal { lexical: lexical.into(), datatype, lang: None }
    }

    pub fn lang(lexical: impl Into<String>, lang: impl Into<String>) -> Result<Self, GraphError> {
        let lang = lang.into();
        if !is_lang_tag(&lang) {
            return Err(GraphError::InvalidLanguageTag(lang));
        }
        Ok(Literal { lexical: lexical.into(), datatype: None, lang: Some(lang.to_ascii_lowercase()) })
    }

    pub fn integer(value: i64) -> Self {
        Literal::typed(value.to_string(), Iri::from_static(vocab::XSD_INTEGER))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn language(&self) -> Option<&str> {
        self.lang.as_deref()
    }
}

pub(crate) fn is_lang_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    !first.is_empty()
        && first.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(text: impl Into<String>) -> Result<Self, GraphError> {
        Iri::new(text).map(Term::Iri)
    }

    pub fn blank(label: impl Into<String>) -> Result<Self, GraphError> {
        let label = label.into();
        let ok = label.chars().next().is_some_and(|c| c.is_alphanumeric() || c == '_')
            && label.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-');
        if ok {
            Ok(Term::Blank(label))
        } else {
            Err(GraphError::InvalidBlankLabel(label))
        }
    }

    pub fn literal(lexical: impl Into<String>) -> Self {
        Term::Literal(Literal::plain(lexical))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// String value as used by aggregates: lexical form for literals, the
    /// IRI text for IRIs, the label for blank nodes.
    pub fn str_value(&self) -> &str {
        match self {
            Term::Iri(iri) => iri.as_str(),
            Term::Blank(label) => label,
            Term::Literal(lit) => lit.lexical(),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

/// N-Triples rendering.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "{iri}"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal(lit) => {
                write!(f, "\"{}\"", escape_string(lit.lexical()))?;
                if let Some(lang) = lit.language() {
                    write!(f, "@{lang}")
                } else if let Some(dt) = lit.datatype() {
                    write!(f, "^^{dt}")
                } else {
                    Ok(())
                }
            }
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, GraphError> {
        if subject.is_literal() {
            return Err(GraphError::LiteralSubject(subject.to_string()));
        }
        Ok(Triple { subject, predicate, object })
    }

    /// Checks all three positions, for callers holding untyped terms.
    pub fn from_terms(subject: Term, predicate: Term, object: Term) -> Result<Self, GraphError> {
        match predicate {
            Term::Iri(p) => Triple::new(subject, p, object),
            other => Err(GraphError::NonIriPredicate(other.to_string())),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
