//! Boxology pattern notation, e.g. `[{sym -> ML -> data / data} -> ML -> sym]`.
//!
//! ```text
//! pattern := "[" flow "]"
//! flow    := stage ("->" stage)*
//! stage   := "sym" | "data" | "ML" | "KR" | "{" flow ("/" flow)+ "}"
//! ```
//!
//! A group holds parallel branches whose terminal outputs jointly feed the
//! stage after the group.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArtifactKind {
    /// Symbolic artifact (`sym`), a Semantic Web resource.
    Sym,
    Data,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessorKind {
    Ml,
    Kr,
}

impl ArtifactKind {
    pub fn token(self) -> &'static str {
        match self {
            ArtifactKind::Sym => "sym",
            ArtifactKind::Data => "data",
        }
    }

    /// Prefix used in template variable names (`SW1`, `Data2`).
    pub fn label(self) -> &'static str {
        match self {
            ArtifactKind::Sym => "SW",
            ArtifactKind::Data => "Data",
        }
    }
}

impl ProcessorKind {
    pub fn token(self) -> &'static str {
        match self {
            ProcessorKind::Ml => "ML",
            ProcessorKind::Kr => "KR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    Artifact(ArtifactKind),
    Processor(ProcessorKind),
    /// Parallel branches; always at least two.
    Group(Vec<Flow>),
}

/// A non-empty chain of stages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow(pub Vec<Stage>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternAst {
    pub root: Flow,
}

impl Flow {
    pub fn stages(&self) -> &[Stage] {
        &self.0
    }
}

impl PatternAst {
    /// Number of processor stages, including those inside groups.
    pub fn processor_count(&self) -> usize {
        fn count(flow: &Flow) -> usize {
            flow.0
                .iter()
                .map(|s| match s {
                    Stage::Processor(_) => 1,
                    Stage::Artifact(_) => 0,
                    Stage::Group(branches) => branches.iter().map(count).sum(),
                })
                .sum()
        }
        count(&self.root)
    }

    pub fn artifact_count(&self) -> usize {
        fn count(flow: &Flow) -> usize {
            flow.0
                .iter()
                .map(|s| match s {
                    Stage::Artifact(_) => 1,
                    Stage::Processor(_) => 0,
                    Stage::Group(branches) => branches.iter().map(count).sum(),
                })
                .sum()
        }
        count(&self.root)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at offset {offset}")]
pub struct NotationError {
    pub offset: usize,
    pub kind: NotationErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotationErrorKind {
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("unbalanced bracket")]
    UnbalancedBracket,
    #[error("unbalanced brace")]
    UnbalancedBrace,
    #[error("empty branch")]
    EmptyBranch,
    #[error("group needs at least two branches")]
    SingleBranchGroup,
    #[error("expected a stage")]
    ExpectedStage,
    #[error("unexpected trailing input")]
    TrailingInput,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Slash,
    Arrow,
    Artifact(ArtifactKind),
    Processor(ProcessorKind),
    End,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, NotationError> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = input[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let single = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(t) = single {
            out.push((i, t));
            i += 1;
            continue;
        }
        if input[i..].starts_with("->") {
            out.push((i, Tok::Arrow));
            i += 2;
            continue;
        }
        let word: String = input[i..].chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
        let tok = match word.as_str() {
            "sym" => Tok::Artifact(ArtifactKind::Sym),
            "data" => Tok::Artifact(ArtifactKind::Data),
            "ML" => Tok::Processor(ProcessorKind::Ml),
            "KR" => Tok::Processor(ProcessorKind::Kr),
            "" => {
                return Err(NotationError { offset: i, kind: NotationErrorKind::UnknownToken(c.to_string()) });
            }
            other => {
                return Err(NotationError { offset: i, kind: NotationErrorKind::UnknownToken(other.to_owned()) });
            }
        };
        out.push((i, tok));
        i += word.len();
    }
    out.push((input.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> (usize, Tok) {
        self.toks[self.pos]
    }

    fn fail<T>(&self, kind: NotationErrorKind) -> Result<T, NotationError> {
        Err(NotationError { offset: self.peek().0, kind })
    }

    fn flow(&mut self, in_group: bool) -> Result<Flow, NotationError> {
        let mut stages = vec![self.stage(in_group)?];
        while self.peek().1 == Tok::Arrow {
            self.pos += 1;
            stages.push(self.stage(in_group)?);
        }
        Ok(Flow(stages))
    }

    fn stage(&mut self, in_group: bool) -> Result<Stage, NotationError> {
        let (_, tok) = self.peek();
        match tok {
            Tok::Artifact(k) => {
                self.pos += 1;
                Ok(Stage::Artifact(k))
            }
            Tok::Processor(k) => {
                self.pos += 1;
                Ok(Stage::Processor(k))
            }
            Tok::LBrace => {
                self.pos += 1;
                let mut branches = vec![self.flow(true)?];
                while self.peek().1 == Tok::Slash {
                    self.pos += 1;
                    branches.push(self.flow(true)?);
                }
                match self.peek().1 {
                    Tok::RBrace => self.pos += 1,
                    _ => return self.fail(NotationErrorKind::UnbalancedBrace),
                }
                if branches.len() < 2 {
                    return self.fail_at(self.toks[self.pos - 1].0, NotationErrorKind::SingleBranchGroup);
                }
                Ok(Stage::Group(branches))
            }
            Tok::Slash | Tok::RBrace if in_group => self.fail(NotationErrorKind::EmptyBranch),
            Tok::End | Tok::RBracket if in_group => self.fail(NotationErrorKind::UnbalancedBrace),
            Tok::End => self.fail(NotationErrorKind::UnbalancedBracket),
            _ => self.fail(NotationErrorKind::ExpectedStage),
        }
    }

    fn fail_at<T>(&self, offset: usize, kind: NotationErrorKind) -> Result<T, NotationError> {
        Err(NotationError { offset, kind })
    }
}

pub fn parse_pattern(notation: &str) -> Result<PatternAst, NotationError> {
    let toks = lex(notation)?;
    let mut p = Parser { toks, pos: 0 };
    match p.peek().1 {
        Tok::LBracket => p.pos += 1,
        Tok::End => return p.fail(NotationErrorKind::UnbalancedBracket),
        _ => return p.fail(NotationErrorKind::ExpectedStage),
    }
    let root = p.flow(false)?;
    match p.peek().1 {
        Tok::RBracket => p.pos += 1,
        Tok::RBrace | Tok::End => return p.fail(NotationErrorKind::UnbalancedBracket),
        Tok::Slash => return p.fail(NotationErrorKind::UnbalancedBrace),
        _ => return p.fail(NotationErrorKind::ExpectedStage),
    }
    if p.peek().1 != Tok::End {
        return p.fail(NotationErrorKind::TrailingInput);
    }
    Ok(PatternAst { root })
}

/// Canonical text: `a -> b` chains, `{x / y}` groups.
pub fn render_notation(ast: &PatternAst) -> String {
    ast.to_string()
}

impl fmt::Display for PatternAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.root)
    }
}

impl fmt::Display for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, stage) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" -> ")?;
            }
            match stage {
                Stage::Artifact(k) => f.write_str(k.token())?,
                Stage::Processor(k) => f.write_str(k.token())?,
                Stage::Group(branches) => {
                    f.write_str("{")?;
                    for (j, b) in branches.iter().enumerate() {
                        if j > 0 {
                            f.write_str(" / ")?;
                        }
                        write!(f, "{b}")?;
                    }
                    f.write_str("}")?;
                }
            }
        }
        Ok(())
    }
}
