//! `swemls` command line: pattern compilation, ingest, enrichment,
//! validation, queries, trend reports and embeddings.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use swemls_core::embed::{
    generate_walks, neighbors, neighbors_in, project_2d, token, train, EmbeddingSpace, TrainConfig, WalkConfig,
};
use swemls_core::graph::{parse, serialize, Format, Graph, Term};
use swemls_core::ingest::{ingest_rows, load_config};
use swemls_core::pattern::LibraryError;
use swemls_core::query::{evaluate, parse_query, trend_report, Dimension};
use swemls_core::{compile_template, enrich, load_library, parse_pattern, validate, vocab, PatternLibrary};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status when validation finds a violation.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status for usage and input errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "swemls", version, about = "Build, check, query and embed knowledge graphs of SW + ML systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct LibraryArg {
    /// Directory of pattern templates (*.ttl).
    #[arg(long, env = "SWEMLS_PATTERNS")]
    patterns: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EntityFilter {
    /// Graph used to resolve --type.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Keep only entities with this rdf:type (IRI or prefixed name).
    #[arg(long = "type", requires = "graph")]
    class: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Work with boxology patterns.
    #[command(subcommand)]
    Pattern(PatternCommand),
    /// Turn a TSV table of systems into a graph.
    Ingest {
        table: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Extra graph files merged into the output (e.g. resource hierarchies).
        #[arg(long)]
        merge: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Add the workflow edges each system's pattern prescribes.
    Enrich {
        graph: PathBuf,
        #[command(flatten)]
        library: LibraryArg,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check systems against generic rules and their pattern templates.
    Validate {
        graph: PathBuf,
        #[command(flatten)]
        library: LibraryArg,
        /// Write the findings as TSV.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a SELECT query and print the result as TSV.
    Query { graph: PathBuf, query: PathBuf },
    /// Count systems per year, pattern, domain, task, maturity or training-type.
    Report {
        graph: PathBuf,
        #[arg(long = "by")]
        dimension: String,
    },
    /// Train random-walk embeddings of the graph's entities.
    Embed {
        graph: PathBuf,
        /// Embedding file to write; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = WalkConfig::default().walks_per_entity)]
        walks: usize,
        #[arg(long, default_value_t = WalkConfig::default().depth)]
        depth: usize,
        #[arg(long, default_value_t = TrainConfig::default().dim)]
        dim: usize,
        #[arg(long, default_value_t = TrainConfig::default().window)]
        window: usize,
        #[arg(long, default_value_t = TrainConfig::default().negatives)]
        negatives: usize,
        #[arg(long, default_value_t = TrainConfig::default().epochs)]
        epochs: usize,
        #[arg(long = "lr", default_value_t = TrainConfig::default().learning_rate)]
        learning_rate: f32,
        #[arg(long, default_value_t = TrainConfig::default().seed)]
        seed: u64,
    },
    /// Nearest entities by cosine similarity.
    Neighbors {
        space: PathBuf,
        entity: String,
        #[arg(short, default_value_t = 10)]
        k: usize,
        #[command(flatten)]
        filter: EntityFilter,
    },
    /// 2D PCA projection of embedded entities as TSV (entity, x, y).
    Project {
        space: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        filter: EntityFilter,
    },
}

#[derive(Subcommand, Debug)]
enum PatternCommand {
    /// Compile a notation such as "[sym -> ML -> sym]" into a template graph.
    Compile {
        id: String,
        notation: String,
        /// Turtle file to write; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Load and check every template in a directory.
    Check { dir: PathBuf },
}

/// A failure that maps to the violation exit status rather than the usage
/// one.
#[derive(Debug)]
struct Violation(String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse(&read(path)?, Format::from_path(path)).with_context(|| format!("cannot parse {}", path.display()))
}

fn save_graph(path: &Path, graph: &Graph) -> Result<()> {
    write(path, &serialize(graph, Format::from_path(path)))
}

fn library(arg: &LibraryArg) -> Result<PatternLibrary> {
    let dir = arg.patterns.as_ref().ok_or_else(|| anyhow!("no pattern library: pass --patterns or set SWEMLS_PATTERNS"))?;
    load_library(dir).map_err(|e| match e {
        LibraryError::Io { .. } => anyhow!(e),
        other => anyhow!(Violation(other.to_string())),
    })
}

/// Accepts a full IRI, `<iri>`, a prefixed name, or a literal token.
fn resolve_entity(text: &str) -> String {
    if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return inner.to_owned();
    }
    if text.starts_with('"') || text.starts_with("_:") || text.contains("://") {
        return text.to_owned();
    }
    match text.split_once(':') {
        Some((prefix, local)) => vocab::default_prefixes().expand(prefix, local).unwrap_or_else(|| text.to_owned()),
        None => text.to_owned(),
    }
}

fn typed_entities(filter: &EntityFilter) -> Result<Option<BTreeSet<String>>> {
    let (Some(graph), Some(class)) = (&filter.graph, &filter.class) else {
        return Ok(None);
    };
    let graph = load_graph(graph)?;
    let class = Term::iri(resolve_entity(class)).map_err(|e| anyhow!("invalid --type: {e}"))?;
    let members: BTreeSet<String> =
        graph.subjects(&vocab::iri(vocab::RDF_TYPE), &class).iter().map(token).collect();
    Ok(Some(members))
}

fn load_space(path: &Path) -> Result<EmbeddingSpace> {
    EmbeddingSpace::from_text(&read(path)?).with_context(|| format!("cannot load {}", path.display()))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Pattern(PatternCommand::Compile { id, notation, output }) => {
            let ast = parse_pattern(&notation).map_err(|e| anyhow!("invalid notation {notation:?}: {e}"))?;
            let graph = compile_template(&id, &ast)?;
            let text = serialize(&graph, Format::Turtle);
            match output {
                Some(path) => write(&path, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Pattern(PatternCommand::Check { dir }) => {
            let lib = library(&LibraryArg { patterns: Some(dir) })?;
            for t in lib.templates() {
                let steps = t.steps.len();
                let vars = t.variables.len();
                writeln!(out, "{}\t{} steps\t{} variables\t{}", t.id, steps, vars, t.notation.as_deref().unwrap_or(""))?;
            }
            writeln!(err, "{} templates ok", lib.len())?;
        }
        Command::Ingest { table, config, merge, output } => {
            let config = load_config(&read(&config)?).context("invalid mapping config")?;
            let mut outcome = ingest_rows(&read(&table)?, &config)?;
            for path in &merge {
                outcome.graph.merge(&load_graph(path)?);
            }
            save_graph(&output, &outcome.graph)?;
            for e in &outcome.errors {
                writeln!(err, "{}: line {}: {}", table.display(), e.line, e.message)?;
            }
            writeln!(err, "ingested {}/{} rows, {} triples", outcome.ingested, outcome.rows, outcome.graph.len())?;
            if !outcome.errors.is_empty() {
                return Ok(EXIT_VIOLATION);
            }
        }
        Command::Enrich { graph, library: lib, output } => {
            let lib = library(&lib)?;
            let e = enrich(&load_graph(&graph)?, &lib);
            save_graph(&output, &e.graph)?;
            for s in &e.skipped {
                writeln!(err, "skipped {}: {}", s.system, s.reason)?;
            }
            writeln!(err, "added {} triples", e.added.len())?;
        }
        Command::Validate { graph, library: lib, report } => {
            let lib = library(&lib)?;
            let r = validate(&load_graph(&graph)?, &lib);
            if let Some(path) = report {
                write(&path, &r.to_tsv())?;
            }
            out.write_all(r.to_text().as_bytes())?;
            if !r.conforms {
                return Ok(EXIT_VIOLATION);
            }
        }
        Command::Query { graph, query } => {
            let text = read(&query)?;
            let q = parse_query(&text).with_context(|| format!("in {}", query.display()))?;
            out.write_all(evaluate(&q, &load_graph(&graph)?).to_tsv().as_bytes())?;
        }
        Command::Report { graph, dimension } => {
            let dimension: Dimension = dimension.parse()?;
            writeln!(out, "{dimension}\tsystems")?;
            for (value, count) in trend_report(&load_graph(&graph)?, dimension) {
                writeln!(out, "{value}\t{count}")?;
            }
        }
        Command::Embed { graph, output, walks, depth, dim, window, negatives, epochs, learning_rate, seed } => {
            if walks == 0 || depth == 0 {
                bail!("--walks and --depth must be at least 1");
            }
            let g = load_graph(&graph)?;
            let corpus = generate_walks(&g, &WalkConfig { walks_per_entity: walks, depth, seed, parallel: true });
            let space = train(&corpus, &TrainConfig { dim, window, negatives, epochs, learning_rate, seed })?;
            let text = space.to_text();
            match output {
                Some(path) => write(&path, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
            writeln!(err, "{} walks, {} tokens embedded", corpus.walks.len(), space.len())?;
        }
        Command::Neighbors { space, entity, k, filter } => {
            let space = load_space(&space)?;
            let entity = resolve_entity(&entity);
            let ranked = match typed_entities(&filter)? {
                Some(candidates) => neighbors_in(&space, &entity, k, &candidates)?,
                None => neighbors(&space, &entity, k)?,
            };
            for (token, cosine) in ranked {
                writeln!(out, "{token}\t{cosine:.6}")?;
            }
        }
        Command::Project { space, output, filter } => {
            let space = load_space(&space)?;
            let entities: Vec<String> = match typed_entities(&filter)? {
                Some(members) => members.into_iter().filter(|m| space.vector(m).is_some()).collect(),
                None => space.tokens().to_vec(),
            };
            let table = project_2d(&space, &entities)?;
            write(&output, &table.to_tsv())?;
            writeln!(err, "projected {} entities", table.rows.len())?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.downcast_ref::<Violation>().is_some() {
                EXIT_VIOLATION
            } else {
                EXIT_USAGE
            }
        }
    }
}
