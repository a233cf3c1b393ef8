//! Turtle subset and N-Triples reading and writing.
//!
//! Accepted Turtle: `@prefix` / `PREFIX` directives, prefixed names, `a`,
//! `;` predicate lists, `,` object lists, blank node labels, plain, typed and
//! language-tagged literals, bare integers/decimals/booleans, `#` line
//! comments and `/* ... */` block comments. `rdf`, `rdfs`, `skos`, `terms` and
//! `xsd` are pre-bound.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::term::escape_string;
use super::{Graph, Iri, Literal, ParseError, PrefixMap, Term, Triple};
use crate::vocab;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Turtle,
    NTriples,
}

impl FromStr for Format {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "turtle" | "ttl" => Ok(Format::Turtle),
            "ntriples" | "n-triples" | "nt" => Ok(Format::NTriples),
            _ => Err(ParseError::UnknownFormat(s.to_owned())),
        }
    }
}

impl Format {
    /// Guess from a file extension; anything but `.nt` is read as Turtle.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("nt") => Format::NTriples,
            _ => Format::Turtle,
        }
    }
}

pub fn parse(text: &str, format: Format) -> Result<Graph, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser { tokens, pos: 0, prefixes: builtin_prefixes(), graph: Graph::new(), format };
    parser.document()?;
    let Parser { mut graph, prefixes, .. } = parser;
    *graph.prefixes_mut() = prefixes;
    Ok(graph)
}

fn builtin_prefixes() -> PrefixMap {
    let mut p = PrefixMap::new();
    p.insert("rdf", vocab::RDF_NS);
    p.insert("rdfs", vocab::RDFS_NS);
    p.insert("skos", vocab::SKOS_NS);
    p.insert("terms", vocab::TERMS_NS);
    p.insert("xsd", vocab::XSD_NS);
    p
}

/// Deterministic text: triples sorted by subject, predicate, object.
pub fn serialize(graph: &Graph, format: Format) -> String {
    match format {
        Format::NTriples => {
            let mut out = String::new();
            for t in graph.iter() {
                let _ = writeln!(out, "{t}");
            }
            out
        }
        Format::Turtle => serialize_turtle(graph),
    }
}

fn output_prefixes(graph: &Graph) -> PrefixMap {
    let mut prefixes = vocab::default_prefixes();
    for (p, ns) in graph.prefixes().iter() {
        if prefixes.get(p).is_none() && !prefixes.iter().any(|(_, n)| n == ns) {
            prefixes.insert(p, ns);
        }
    }
    prefixes
}

fn serialize_turtle(graph: &Graph) -> String {
    let prefixes = output_prefixes(graph);
    let mut out = String::new();
    for (p, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {p}: <{ns}> .");
    }
    let mut by_subject: BTreeMap<Term, BTreeMap<Iri, Vec<Term>>> = BTreeMap::new();
    for t in graph.iter() {
        by_subject.entry(t.subject).or_default().entry(t.predicate).or_default().push(t.object);
    }
    for (subject, preds) in by_subject {
        out.push('\n');
        out.push_str(&turtle_term(&subject, &prefixes));
        let n = preds.len();
        let mut preds: Vec<(Iri, Vec<Term>)> = preds.into_iter().collect();
        preds.sort_by_key(|(p, _)| p.as_str() != vocab::RDF_TYPE);
        for (i, (pred, objects)) in preds.into_iter().enumerate() {
            out.push_str(if i == 0 { " " } else { "    " });
            if pred.as_str() == vocab::RDF_TYPE {
                out.push('a');
            } else {
                out.push_str(&turtle_iri(&pred, &prefixes));
            }
            out.push(' ');
            let objs: Vec<String> = objects.iter().map(|o| turtle_term(o, &prefixes)).collect();
            out.push_str(&objs.join(", "));
            out.push_str(if i + 1 == n { " .\n" } else { " ;\n" });
        }
    }
    out
}

fn turtle_iri(iri: &Iri, prefixes: &PrefixMap) -> String {
    prefixes.compact(iri.as_str()).unwrap_or_else(|| iri.to_string())
}

fn turtle_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(iri) => turtle_iri(iri, prefixes),
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal(lit) => {
            let mut s = format!("\"{}\"", escape_string(lit.lexical()));
            if let Some(lang) = lit.language() {
                s.push('@');
                s.push_str(lang);
            } else if let Some(dt) = lit.datatype() {
                s.push_str("^^");
                s.push_str(&turtle_iri(dt, prefixes));
            }
            s
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    LangTag(String),
    Caret2,
    Integer(String),
    Decimal(String),
    Bool(bool),
    A,
    AtPrefix,
    SparqlPrefix,
    Dot,
    Semicolon,
    Comma,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, line: 1, column: 1 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
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

    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line, column, message: message.into() }
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let (line, column) = (self.line, self.column);
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            Some('*') if self.peek() == Some('/') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                            None => return Err(self.err(line, column, "unterminated block comment")),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia()?;
            let (line, column) = (self.line, self.column);
            let Some(c) = self.peek() else { break };
            let tok = match c {
                '<' => self.iri_ref()?,
                '"' | '\'' => self.string(c)?,
                '@' => {
                    self.bump();
                    let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                    if word == "prefix" {
                        Tok::AtPrefix
                    } else if word.is_empty() {
                        return Err(self.err(line, column, "expected language tag or directive after `@`"));
                    } else if word == "base" {
                        return Err(self.err(line, column, "`@base` is not supported"));
                    } else {
                        Tok::LangTag(word)
                    }
                }
                '^' if self.peek_at(1) == Some('^') => {
                    self.bump();
                    self.bump();
                    Tok::Caret2
                }
                '.' if !self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                    self.bump();
                    Tok::Dot
                }
                ';' => {
                    self.bump();
                    Tok::Semicolon
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '_' if self.peek_at(1) == Some(':') => {
                    self.bump();
                    self.bump();
                    let label = self.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
                    let label = self.give_back_dots(label);
                    if label.is_empty() {
                        return Err(self.err(line, column, "empty blank node label"));
                    }
                    Tok::Blank(label)
                }
                c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.number(line, column)?,
                c if c.is_alphabetic() || c == ':' => self.name(line, column)?,
                '[' | '(' => return Err(self.err(line, column, format!("`{c}` collections and anonymous nodes are not supported"))),
                other => return Err(self.err(line, column, format!("unexpected character `{other}`"))),
            };
            out.push(Spanned { tok, line, column });
        }
        Ok(out)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    /// Names may not end in `.`; un-read trailing dots so they terminate the statement.
    fn give_back_dots(&mut self, mut s: String) -> String {
        while s.ends_with('.') {
            s.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        s
    }

    fn iri_ref(&mut self) -> Result<Tok, ParseError> {
        let (line, column) = (self.line, self.column);
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => s.push(self.unicode_escape(line, column)?),
                Some(c) if c.is_whitespace() => return Err(self.err(line, column, "whitespace inside IRI")),
                Some(c) => s.push(c),
                None => return Err(self.err(line, column, "unterminated IRI")),
            }
        }
        Iri::new(&s).map_err(|e| self.err(line, column, e.to_string()))?;
        Ok(Tok::IriRef(s))
    }

    fn unicode_escape(&mut self, line: usize, column: usize) -> Result<char, ParseError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.err(line, column, "invalid escape")),
        };
        let mut hex = String::new();
        for _ in 0..width {
            hex.push(self.bump().ok_or_else(|| self.err(line, column, "truncated escape"))?);
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.err(line, column, format!("invalid code point \\u{hex}")))
    }

    fn string(&mut self, quote: char) -> Result<Tok, ParseError> {
        let (line, column) = (self.line, self.column);
        let long = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        let open = if long { 3 } else { 1 };
        for _ in 0..open {
            self.bump();
        }
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err(line, column, "unterminated string")),
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.bump();
                        self.bump();
                        break;
                    }
                    s.push(c);
                }
                Some('\n') | Some('\r') if !long => return Err(self.err(line, column, "newline in string")),
                Some('\\') => {
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') | Some('U') => {
                            s.push(self.unicode_escape(line, column)?);
                            continue;
                        }
                        _ => return Err(self.err(self.line, self.column, "invalid string escape")),
                    };
                    self.bump();
                    s.push(c);
                }
                Some(c) => s.push(c),
            }
        }
        Ok(Tok::Str(s))
    }

    fn number(&mut self, line: usize, column: usize) -> Result<Tok, ParseError> {
        let mut s = String::new();
        if matches!(self.peek(), Some('+') | Some('-')) {
            s.push(self.bump().unwrap());
        }
        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
            s.push_str(&self.take_while(|c| c.is_ascii_digit()));
            return Ok(Tok::Decimal(s));
        }
        if s.chars().any(|c| c.is_ascii_digit()) {
            Ok(Tok::Integer(s))
        } else {
            Err(self.err(line, column, "malformed number"))
        }
    }

    fn name(&mut self, line: usize, column: usize) -> Result<Tok, ParseError> {
        let prefix = self.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if self.peek() == Some(':') {
            if prefix.ends_with('.') {
                return Err(self.err(line, column, "prefix may not end with `.`"));
            }
            self.bump();
            let mut local = String::new();
            while let Some(c) = self.peek() {
                if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '%') {
                    local.push(c);
                    self.bump();
                } else if c == '\\' {
                    self.bump();
                    match self.bump() {
                        Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                        _ => return Err(self.err(line, column, "invalid escape in local name")),
                    }
                } else {
                    break;
                }
            }
            let local = self.give_back_dots(local);
            return Ok(Tok::PName { prefix, local });
        }
        let word = self.give_back_dots(prefix);
        match word.as_str() {
            "a" => Ok(Tok::A),
            "true" => Ok(Tok::Bool(true)),
            "false" => Ok(Tok::Bool(false)),
            w if w.eq_ignore_ascii_case("prefix") => Ok(Tok::SparqlPrefix),
            w => Err(self.err(line, column, format!("unexpected word `{w}`"))),
        }
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    prefixes: PrefixMap,
    graph: Graph,
    format: Format,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Spanned, ParseError> {
        let t = self.tokens.get(self.pos).cloned().ok_or_else(|| self.eof_error())?;
        self.pos += 1;
        Ok(t)
    }

    fn eof_error(&self) -> ParseError {
        let (line, column) = self.tokens.last().map(|t| (t.line, t.column)).unwrap_or((1, 1));
        ParseError::Syntax { line, column, message: "unexpected end of input".into() }
    }

    fn err(t: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let t = self.next()?;
        if t.tok == want {
            Ok(())
        } else {
            Err(Self::err(&t, format!("expected {what}")))
        }
    }

    fn document(&mut self) -> Result<(), ParseError> {
        while let Some(t) = self.peek() {
            match t.tok {
                Tok::AtPrefix | Tok::SparqlPrefix if self.format == Format::NTriples => {
                    return Err(Self::err(t, "prefix directives are not allowed in N-Triples"));
                }
                Tok::AtPrefix => {
                    self.pos += 1;
                    self.prefix_decl()?;
                    self.expect(Tok::Dot, "`.` after @prefix")?;
                }
                Tok::SparqlPrefix => {
                    self.pos += 1;
                    self.prefix_decl()?;
                }
                _ => {
                    self.triples()?;
                    self.expect(Tok::Dot, "`.` at end of statement")?;
                }
            }
        }
        Ok(())
    }

    fn prefix_decl(&mut self) -> Result<(), ParseError> {
        let t = self.next()?;
        let Tok::PName { prefix, local } = &t.tok else {
            return Err(Self::err(&t, "expected prefix name"));
        };
        if !local.is_empty() {
            return Err(Self::err(&t, "expected `prefix:` with empty local part"));
        }
        let ns = self.next()?;
        let Tok::IriRef(iri) = ns.tok else {
            return Err(Self::err(&ns, "expected namespace IRI"));
        };
        self.prefixes.insert(prefix.clone(), iri);
        Ok(())
    }

    fn resolve(&self, t: &Spanned) -> Result<Iri, ParseError> {
        match &t.tok {
            Tok::IriRef(s) => Iri::new(s.clone()).map_err(|e| Self::err(t, e.to_string())),
            Tok::PName { .. } if self.format == Format::NTriples => Err(Self::err(t, "prefixed names are not allowed in N-Triples")),
            Tok::PName { prefix, local } => {
                let full = self.prefixes.expand(prefix, local).ok_or_else(|| ParseError::UnknownPrefix {
                    line: t.line,
                    column: t.column,
                    prefix: prefix.clone(),
                })?;
                Iri::new(full).map_err(|e| Self::err(t, e.to_string()))
            }
            _ => Err(Self::err(t, "expected IRI")),
        }
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        let t = self.next()?;
        let subject = match &t.tok {
            Tok::Blank(label) => Term::Blank(label.clone()),
            Tok::IriRef(_) | Tok::PName { .. } => Term::Iri(self.resolve(&t)?),
            _ => return Err(Self::err(&t, "expected subject (IRI or blank node)")),
        };
        loop {
            let verb = self.next()?;
            let predicate = match verb.tok {
                Tok::A if self.format == Format::Turtle => vocab::iri(vocab::RDF_TYPE),
                _ => self.resolve(&verb).map_err(|e| match e {
                    ParseError::Syntax { line, column, .. } => {
                        ParseError::Syntax { line, column, message: "expected predicate".into() }
                    }
                    other => other,
                })?,
            };
            loop {
                let object = self.object()?;
                self.graph.insert(Triple { subject: subject.clone(), predicate: predicate.clone(), object });
                if matches!(self.peek().map(|t| &t.tok), Some(Tok::Comma)) && self.format == Format::Turtle {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if matches!(self.peek().map(|t| &t.tok), Some(Tok::Semicolon)) && self.format == Format::Turtle {
                while matches!(self.peek().map(|t| &t.tok), Some(Tok::Semicolon)) {
                    self.pos += 1;
                }
                if matches!(self.peek().map(|t| &t.tok), Some(Tok::Dot) | None) {
                    return Ok(());
                }
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        let t = self.next()?;
        Ok(match &t.tok {
            Tok::IriRef(_) | Tok::PName { .. } => Term::Iri(self.resolve(&t)?),
            Tok::Blank(label) => Term::Blank(label.clone()),
            Tok::Str(s) => match self.peek().map(|n| n.tok.clone()) {
                Some(Tok::LangTag(lang)) => {
                    self.pos += 1;
                    Term::Literal(Literal::lang(s.clone(), lang).map_err(|e| Self::err(&t, e.to_string()))?)
                }
                Some(Tok::Caret2) => {
                    self.pos += 1;
                    let dt = self.next()?;
                    Term::Literal(Literal::typed(s.clone(), self.resolve(&dt)?))
                }
                _ => Term::literal(s.clone()),
            },
            Tok::Integer(n) if self.format == Format::Turtle => {
                Term::Literal(Literal::typed(n.clone(), vocab::iri(vocab::XSD_INTEGER)))
            }
            Tok::Decimal(n) if self.format == Format::Turtle => {
                Term::Literal(Literal::typed(n.clone(), vocab::iri(vocab::XSD_DECIMAL)))
            }
            Tok::Bool(b) if self.format == Format::Turtle => {
                Term::Literal(Literal::typed(b.to_string(), vocab::iri(vocab::XSD_BOOLEAN)))
            }
            _ => return Err(Self::err(&t, "expected object")),
        })
    }
}
