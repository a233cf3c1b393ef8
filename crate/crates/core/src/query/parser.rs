use thiserror::Error;

use super::ast::{Element, GroupPattern, Predicate, Projection, Query, QueryTerm, Select, TriplePattern};
use crate::graph::{Iri, Literal, PrefixMap, Term};
use crate::vocab;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unsupported feature {feature}")]
    Unsupported { line: usize, column: usize, feature: String },
    #[error("{line}:{column}: unknown prefix `{prefix}`")]
    UnknownPrefix { line: usize, column: usize, prefix: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Var(String),
    IriRef(String),
    PName(String, String),
    Word(String),
    Str(String),
    Int(String),
    LangTag(String),
    Punct(char),
    DoubleCaret,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const UNSUPPORTED_WORDS: &[&str] = &[
    "FILTER", "OPTIONAL", "MINUS", "BIND", "VALUES", "SERVICE", "GRAPH", "ORDER", "LIMIT", "OFFSET", "DISTINCT",
    "REDUCED", "HAVING", "CONSTRUCT", "ASK", "DESCRIBE", "BASE", "FROM", "NOT", "EXISTS", "COUNT", "SUM", "MIN",
    "MAX", "AVG", "SAMPLE", "INSERT", "DELETE", "LOAD", "CLEAR",
];

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, line: 1, column: 1 }
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> QueryError {
        QueryError::Syntax { line, column, message: message.into() }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek_at(0) {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, QueryError> {
        let mut out = Vec::new();
        loop {
            // Trivia.
            loop {
                match (self.peek_at(0), self.peek_at(1)) {
                    (Some(c), _) if c.is_whitespace() => {
                        self.bump();
                    }
                    (Some('#'), _) => {
                        while self.peek_at(0).is_some_and(|c| c != '\n') {
                            self.bump();
                        }
                    }
                    (Some('/'), Some('*')) => {
                        let (line, column) = (self.line, self.column);
                        self.bump();
                        self.bump();
                        loop {
                            match (self.peek_at(0), self.peek_at(1)) {
                                (Some('*'), Some('/')) => {
                                    self.bump();
                                    self.bump();
                                    break;
                                }
                                (Some(_), _) => {
                                    self.bump();
                                }
                                (None, _) => return Err(self.err(line, column, "unterminated comment")),
                            }
                        }
                    }
                    _ => break,
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(c) = self.peek_at(0) else {
                out.push(Spanned { tok: Tok::Eof, line, column });
                return Ok(out);
            };
            let tok = match c {
                '?' | '$' => {
                    self.bump();
                    let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                    if name.is_empty() {
                        return Err(QueryError::Unsupported { line, column, feature: "property path operator `?`".into() });
                    }
                    Tok::Var(name)
                }
                '<' => {
                    self.bump();
                    let iri = self.take_while(|c| c != '>' && c != '\n');
                    if self.bump() != Some('>') {
                        return Err(self.err(line, column, "unterminated IRI"));
                    }
                    Tok::IriRef(iri)
                }
                '"' | '\'' => self.string(c, line, column)?,
                '@' => {
                    self.bump();
                    let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                    if tag.is_empty() {
                        return Err(self.err(line, column, "empty language tag"));
                    }
                    Tok::LangTag(tag)
                }
                '^' if self.peek_at(1) == Some('^') => {
                    self.bump();
                    self.bump();
                    Tok::DoubleCaret
                }
                c if c.is_ascii_digit() => Tok::Int(self.take_while(|c| c.is_ascii_digit())),
                c if c.is_ascii_alphabetic() || c == ':' || c == '_' => {
                    if c == '_' && self.peek_at(1) == Some(':') {
                        return Err(QueryError::Unsupported { line, column, feature: "blank node".into() });
                    }
                    let prefix = self.take_while(is_name_char);
                    if self.peek_at(0) == Some(':') {
                        self.bump();
                        let mut local = self.take_while(|c| is_name_char(c) || c == '.');
                        while local.ends_with('.') {
                            local.pop();
                            self.pos -= 1;
                            self.column -= 1;
                        }
                        Tok::PName(prefix, local)
                    } else {
                        Tok::Word(prefix)
                    }
                }
                _ => {
                    self.bump();
                    Tok::Punct(c)
                }
            };
            out.push(Spanned { tok, line, column });
        }
    }

    fn string(&mut self, quote: char, line: usize, column: usize) -> Result<Tok, QueryError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.err(line, column, "unterminated string")),
                Some(c) if c == quote => return Ok(Tok::Str(s)),
                Some('\\') => {
                    let e = self.bump();
                    s.push(match e {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        _ => return Err(self.err(self.line, self.column, "invalid escape")),
                    });
                }
                Some(c) => s.push(c),
            }
        }
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    prefixes: PrefixMap,
}

fn is_word(t: &Tok, w: &str) -> bool {
    matches!(t, Tok::Word(x) if x.eq_ignore_ascii_case(w))
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err(t: &Spanned, message: impl Into<String>) -> QueryError {
        QueryError::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Var(v) => format!("`?{v}`"),
            Tok::IriRef(i) => format!("`<{i}>`"),
            Tok::PName(p, l) => format!("`{p}:{l}`"),
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::LangTag(l) => format!("`@{l}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::DoubleCaret => "`^^`".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn check_unsupported(&self) -> Result<(), QueryError> {
        let t = self.peek();
        if let Tok::Word(w) = &t.tok {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED_WORDS.contains(&upper.as_str()) {
                return Err(QueryError::Unsupported { line: t.line, column: t.column, feature: upper });
            }
        }
        Ok(())
    }

    fn expect_punct(&mut self, c: char) -> Result<(), QueryError> {
        let t = self.next();
        if t.tok == Tok::Punct(c) {
            Ok(())
        } else {
            Err(Self::err(&t, format!("expected `{c}`, found {}", Self::describe(&t.tok))))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), QueryError> {
        self.check_unsupported()?;
        let t = self.next();
        if is_word(&t.tok, w) {
            Ok(())
        } else {
            Err(Self::err(&t, format!("expected {w}, found {}", Self::describe(&t.tok))))
        }
    }

    fn expect_var(&mut self) -> Result<String, QueryError> {
        let t = self.next();
        match &t.tok {
            Tok::Var(v) => Ok(v.clone()),
            other => Err(Self::err(&t, format!("expected a variable, found {}", Self::describe(other)))),
        }
    }

    fn resolve(&self, t: &Spanned) -> Result<Iri, QueryError> {
        let text = match &t.tok {
            Tok::IriRef(i) => i.clone(),
            Tok::PName(p, l) => self.prefixes.expand(p, l).ok_or_else(|| QueryError::UnknownPrefix {
                line: t.line,
                column: t.column,
                prefix: p.clone(),
            })?,
            _ => unreachable!("caller checks the token kind"),
        };
        Iri::new(text).map_err(|e| Self::err(t, e.to_string()))
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        while is_word(&self.peek().tok, "PREFIX") {
            self.next();
            let t = self.next();
            let Tok::PName(prefix, local) = &t.tok else {
                return Err(Self::err(&t, "expected a prefix name like `ex:`"));
            };
            if !local.is_empty() {
                return Err(Self::err(&t, "expected a prefix name like `ex:`"));
            }
            let iri = self.next();
            let Tok::IriRef(ns) = &iri.tok else {
                return Err(Self::err(&iri, "expected a namespace IRI"));
            };
            self.prefixes.insert(prefix.clone(), ns.clone());
        }
        let select = self.select(false)?;
        self.check_unsupported()?;
        let t = self.next();
        if t.tok != Tok::Eof {
            return Err(Self::err(&t, format!("unexpected {} after query", Self::describe(&t.tok))));
        }
        Ok(Query { select })
    }

    fn select(&mut self, nested: bool) -> Result<Select, QueryError> {
        self.expect_word("SELECT")?;
        let mut projection = Vec::new();
        loop {
            self.check_unsupported()?;
            let t = self.peek().clone();
            match &t.tok {
                Tok::Var(_) => projection.push(Projection::Var(self.expect_var()?)),
                Tok::Punct('*') => {
                    return Err(QueryError::Unsupported { line: t.line, column: t.column, feature: "SELECT *".into() })
                }
                Tok::Punct('(') => {
                    self.next();
                    self.check_unsupported()?;
                    self.expect_word("GROUP_CONCAT")?;
                    self.expect_punct('(')?;
                    let var = self.expect_var()?;
                    let mut separator = " ".to_owned();
                    if self.peek().tok == Tok::Punct(';') {
                        self.next();
                        self.expect_word("SEPARATOR")?;
                        self.expect_punct('=')?;
                        let s = self.next();
                        let Tok::Str(sep) = s.tok else {
                            return Err(Self::err(&s, "expected a separator string"));
                        };
                        separator = sep;
                    }
                    self.expect_punct(')')?;
                    self.expect_word("AS")?;
                    let alias = self.expect_var()?;
                    self.expect_punct(')')?;
                    projection.push(Projection::GroupConcat { var, separator, alias });
                }
                _ => break,
            }
        }
        if projection.is_empty() {
            let t = self.peek();
            return Err(Self::err(t, format!("expected a projection, found {}", Self::describe(&t.tok))));
        }
        self.check_unsupported()?;
        if is_word(&self.peek().tok, "WHERE") {
            self.next();
        }
        let pattern = self.group()?;
        let mut group_by = Vec::new();
        self.check_unsupported()?;
        if is_word(&self.peek().tok, "GROUP") {
            let t = self.next();
            if !nested {
                return Err(QueryError::Unsupported {
                    line: t.line,
                    column: t.column,
                    feature: "GROUP BY outside a sub-select".into(),
                });
            }
            self.expect_word("BY")?;
            while let Tok::Var(_) = self.peek().tok {
                group_by.push(self.expect_var()?);
            }
            if group_by.is_empty() {
                return Err(Self::err(self.peek(), "expected GROUP BY variables"));
            }
        }
        self.check_unsupported()?;
        Ok(Select { projection, pattern, group_by })
    }

    fn group(&mut self) -> Result<GroupPattern, QueryError> {
        self.expect_punct('{')?;
        self.check_unsupported()?;
        if is_word(&self.peek().tok, "SELECT") {
            let sub = self.select(true)?;
            self.expect_punct('}')?;
            return Ok(GroupPattern { elements: vec![Element::SubSelect(Box::new(sub))] });
        }
        let mut elements = Vec::new();
        loop {
            self.check_unsupported()?;
            let t = self.peek().clone();
            match &t.tok {
                Tok::Punct('}') => {
                    self.next();
                    return Ok(GroupPattern { elements });
                }
                Tok::Punct('.') => {
                    self.next();
                }
                Tok::Punct('{') => {
                    let mut branches = vec![self.group()?];
                    while is_word(&self.peek().tok, "UNION") {
                        self.next();
                        branches.push(self.group()?);
                    }
                    elements.push(if branches.len() == 1 {
                        Element::Group(branches.pop().expect("one branch"))
                    } else {
                        Element::Union(branches)
                    });
                }
                Tok::Punct('[') | Tok::Punct('(') => {
                    return Err(QueryError::Unsupported {
                        line: t.line,
                        column: t.column,
                        feature: if t.tok == Tok::Punct('[') { "blank node".into() } else { "collection".into() },
                    })
                }
                Tok::Eof => return Err(Self::err(&t, "unterminated group, expected `}`")),
                _ => self.triples_block(&mut elements)?,
            }
        }
    }

    fn term(&mut self) -> Result<QueryTerm, QueryError> {
        self.check_unsupported()?;
        let t = self.next();
        Ok(match &t.tok {
            Tok::Var(v) => QueryTerm::Var(v.clone()),
            Tok::IriRef(_) | Tok::PName(..) => QueryTerm::Const(Term::Iri(self.resolve(&t)?)),
            Tok::Int(n) => QueryTerm::Const(Term::Literal(Literal::typed(n.clone(), vocab::iri(vocab::XSD_INTEGER)))),
            Tok::Str(s) => {
                let s = s.clone();
                match &self.peek().tok {
                    Tok::LangTag(_) => {
                        let tag = self.next();
                        let Tok::LangTag(l) = &tag.tok else { unreachable!() };
                        let lit = Literal::lang(s, l.clone()).map_err(|e| Self::err(&tag, e.to_string()))?;
                        QueryTerm::Const(Term::Literal(lit))
                    }
                    Tok::DoubleCaret => {
                        self.next();
                        let dt = self.next();
                        if !matches!(dt.tok, Tok::IriRef(_) | Tok::PName(..)) {
                            return Err(Self::err(&dt, "expected a datatype IRI"));
                        }
                        QueryTerm::Const(Term::Literal(Literal::typed(s, self.resolve(&dt)?)))
                    }
                    _ => QueryTerm::Const(Term::Literal(Literal::plain(s))),
                }
            }
            other => return Err(Self::err(&t, format!("expected a term, found {}", Self::describe(other)))),
        })
    }

    fn path_step(&mut self) -> Result<Iri, QueryError> {
        self.check_unsupported()?;
        let t = self.next();
        match &t.tok {
            Tok::Word(w) if w == "a" => Ok(vocab::iri(vocab::RDF_TYPE)),
            Tok::IriRef(_) | Tok::PName(..) => self.resolve(&t),
            Tok::Punct(c @ ('^' | '!' | '(')) => Err(QueryError::Unsupported {
                line: t.line,
                column: t.column,
                feature: format!("property path operator `{c}`"),
            }),
            other => Err(Self::err(&t, format!("expected a predicate, found {}", Self::describe(other)))),
        }
    }

    fn predicate(&mut self) -> Result<Predicate, QueryError> {
        if let Tok::Var(_) = self.peek().tok {
            return Ok(Predicate::Var(self.expect_var()?));
        }
        let mut path = vec![self.path_step()?];
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Punct('/') => {
                    self.next();
                    path.push(self.path_step()?);
                }
                Tok::Punct(c @ ('|' | '*' | '+' | '^')) => {
                    return Err(QueryError::Unsupported {
                        line: t.line,
                        column: t.column,
                        feature: format!("property path operator `{c}`"),
                    })
                }
                _ => return Ok(Predicate::Path(path)),
            }
        }
    }

    fn triples_block(&mut self, out: &mut Vec<Element>) -> Result<(), QueryError> {
        let subject = self.term()?;
        if matches!(subject, QueryTerm::Const(Term::Literal(_))) {
            return Err(Self::err(&self.tokens[self.pos - 1], "a literal cannot be a subject"));
        }
        loop {
            let predicate = self.predicate()?;
            loop {
                let object = self.term()?;
                out.push(Element::Triple(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                }));
                if self.peek().tok == Tok::Punct(',') {
                    self.next();
                } else {
                    break;
                }
            }
            if self.peek().tok == Tok::Punct(';') {
                self.next();
                // Trailing `;` before `.` or `}` is allowed.
                if matches!(self.peek().tok, Tok::Punct('.') | Tok::Punct('}')) {
                    return Ok(());
                }
            } else {
                return Ok(());
            }
        }
    }
}

fn validate_select(select: &Select, nested: bool) -> Result<(), QueryError> {
    let vars = select.pattern.variables();
    let grouped = !select.group_by.is_empty();
    let mut names = std::collections::BTreeSet::new();
    for g in &select.group_by {
        if !vars.contains(g) {
            return Err(QueryError::Invalid(format!("GROUP BY variable ?{g} does not occur in the WHERE clause")));
        }
    }
    for p in &select.projection {
        if !names.insert(p.name()) {
            return Err(QueryError::Invalid(format!("?{} is projected twice", p.name())));
        }
        match p {
            Projection::Var(v) => {
                if !vars.contains(v) {
                    return Err(QueryError::Invalid(format!("projected variable ?{v} does not occur in the WHERE clause")));
                }
                if grouped && !select.group_by.contains(v) {
                    return Err(QueryError::Invalid(format!("?{v} is projected but not grouped")));
                }
            }
            Projection::GroupConcat { var, alias, .. } => {
                if !(nested && grouped) {
                    return Err(QueryError::Invalid("group_concat is only allowed in a grouped sub-select".into()));
                }
                if !vars.contains(var) {
                    return Err(QueryError::Invalid(format!("aggregated variable ?{var} does not occur in the WHERE clause")));
                }
                if vars.contains(alias) {
                    return Err(QueryError::Invalid(format!("alias ?{alias} is already used in the WHERE clause")));
                }
            }
        }
    }
    validate_group(&select.pattern)
}

fn validate_group(group: &GroupPattern) -> Result<(), QueryError> {
    for e in &group.elements {
        match e {
            Element::SubSelect(s) => validate_select(s, true)?,
            Element::Union(bs) => bs.iter().try_for_each(validate_group)?,
            Element::Group(g) => validate_group(g)?,
            Element::Triple(_) => {}
        }
    }
    Ok(())
}

/// Parse the supported query subset. The vocabulary prefixes (`rdf`, `rdfs`,
/// `skos`, `terms`, `swemls`, `res`, ...) are pre-bound.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser { tokens, pos: 0, prefixes: vocab::default_prefixes() };
    let query = parser.query()?;
    validate_select(&query.select, false)?;
    Ok(query)
}
