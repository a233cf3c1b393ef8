use std::collections::BTreeSet;

use super::train::TrainConfig;
use super::EmbedError;

/// Token vectors with the training configuration that produced them.
/// Tokens are kept sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSpace {
    config: TrainConfig,
    tokens: Vec<String>,
    vectors: Vec<Vec<f32>>,
}

fn dot(a: &[f32], b: &[f32]) -> f64 {
    a.iter().zip(b).map(|(x, y)| *x as f64 * *y as f64).sum()
}

fn cosine(a: &[f32], b: &[f32]) -> f64 {
    let denom = (dot(a, a) * dot(b, b)).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        dot(a, b) / denom
    }
}

impl EmbeddingSpace {
    pub(crate) fn new(config: TrainConfig, tokens: Vec<String>, vectors: Vec<Vec<f32>>) -> Self {
        debug_assert!(tokens.windows(2).all(|w| w[0] < w[1]));
        EmbeddingSpace { config, tokens, vectors }
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.config.dim
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    fn position(&self, token: &str) -> Option<usize> {
        self.tokens.binary_search_by(|t| t.as_str().cmp(token)).ok()
    }

    pub fn vector(&self, token: &str) -> Option<&[f32]> {
        self.position(token).map(|i| self.vectors[i].as_slice())
    }

    pub fn cosine(&self, a: &str, b: &str) -> Option<f64> {
        Some(cosine(self.vector(a)?, self.vector(b)?))
    }

    /// Text dump: a `#` header line with the training configuration, then
    /// one `token<TAB>v1<TAB>...<TAB>vd` line per token. Floats are written
    /// in shortest round-trip form, so loading restores the exact bits.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "# dim={} window={} negatives={} epochs={} learning-rate={} seed={}\n",
            c.dim, c.window, c.negatives, c.epochs, c.learning_rate, c.seed
        );
        for (t, v) in self.tokens.iter().zip(&self.vectors) {
            out.push_str(t);
            for x in v {
                out.push('\t');
                out.push_str(&x.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, EmbedError> {
        let err = |line: usize, message: String| EmbedError::Parse { line, message };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty embedding file".into()))?;
        let fields = header.strip_prefix('#').ok_or_else(|| err(1, "missing `#` configuration header".into()))?;
        let mut config = TrainConfig::default();
        for field in fields.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| err(1, format!("malformed header field `{field}`")))?;
            let bad = |_| err(1, format!("invalid value for `{key}`: `{value}`"));
            match key {
                "dim" => config.dim = value.parse().map_err(bad)?,
                "window" => config.window = value.parse().map_err(bad)?,
                "negatives" => config.negatives = value.parse().map_err(bad)?,
                "epochs" => config.epochs = value.parse().map_err(bad)?,
                "learning-rate" => config.learning_rate = value.parse().map_err(|_| err(1, format!("invalid value for `{key}`: `{value}`")))?,
                "seed" => config.seed = value.parse().map_err(bad)?,
                _ => return Err(err(1, format!("unknown header field `{key}`"))),
            }
        }
        let mut rows: Vec<(String, Vec<f32>)> = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let mut cells = line.split('\t');
            let token = cells.next().unwrap_or_default().to_owned();
            let vector = cells
                .map(|c| c.parse::<f32>().ok().filter(|x| x.is_finite()))
                .collect::<Option<Vec<f32>>>()
                .ok_or_else(|| err(i + 1, format!("non-numeric or non-finite component for `{token}`")))?;
            if vector.len() != config.dim {
                return Err(err(i + 1, format!("`{token}` has {} components, expected {}", vector.len(), config.dim)));
            }
            rows.push((token, vector));
        }
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(EmbedError::Parse { line: 0, message: format!("duplicate token `{}`", w[0].0) });
        }
        let (tokens, vectors) = rows.into_iter().unzip();
        Ok(EmbeddingSpace { config, tokens, vectors })
    }
}

fn ranked<'a>(space: &'a EmbeddingSpace, entity: &str, k: usize, keep: impl Fn(&str) -> bool) -> Result<Vec<(String, f64)>, EmbedError> {
    if k == 0 {
        return Err(EmbedError::InvalidConfig("k must be at least 1".into()));
    }
    let query = space.vector(entity).ok_or_else(|| EmbedError::UnknownEntity(entity.to_owned()))?;
    let mut scored: Vec<(&'a str, f64)> = space
        .tokens
        .iter()
        .zip(&space.vectors)
        .filter(|(t, _)| t.as_str() != entity && keep(t))
        .map(|(t, v)| (t.as_str(), cosine(query, v)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    scored.truncate(k);
    Ok(scored.into_iter().map(|(t, c)| (t.to_owned(), c)).collect())
}

/// The `k` tokens most cosine-similar to `entity`, excluding itself. Ties
/// are broken by token order.
pub fn neighbors(space: &EmbeddingSpace, entity: &str, k: usize) -> Result<Vec<(String, f64)>, EmbedError> {
    ranked(space, entity, k, |_| true)
}

/// Like [`neighbors`], restricted to tokens in `candidates`.
pub fn neighbors_in(
    space: &EmbeddingSpace,
    entity: &str,
    k: usize,
    candidates: &BTreeSet<String>,
) -> Result<Vec<(String, f64)>, EmbedError> {
    ranked(space, entity, k, |t| candidates.contains(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(rows: &[(&str, [f32; 2])]) -> EmbeddingSpace {
        let config = TrainConfig { dim: 2, ..TrainConfig::default() };
        let mut rows = rows.to_vec();
        rows.sort_by_key(|r| r.0);
        EmbeddingSpace::new(config, rows.iter().map(|r| r.0.to_owned()).collect(), rows.iter().map(|r| r.1.to_vec()).collect())
    }

    #[test]
    fn neighbors_rank_and_break_ties() {
        let s = space(&[("q", [1.0, 0.0]), ("b", [1.0, 1.0]), ("a", [1.0, 1.0]), ("c", [-1.0, 0.0]), ("d", [2.0, 0.0])]);
        let n = neighbors(&s, "q", 3).unwrap();
        let names: Vec<&str> = n.iter().map(|(t, _)| t.as_str()).collect();
        assert_eq!(names, ["d", "a", "b"]);
        assert!((n[0].1 - 1.0).abs() < 1e-12);
        assert_eq!(neighbors(&s, "q", 10).unwrap().len(), 4);
        assert!(matches!(neighbors(&s, "zz", 1), Err(EmbedError::UnknownEntity(_))));
        assert!(neighbors(&s, "q", 0).is_err());
        let only: BTreeSet<String> = ["c".to_owned()].into();
        assert_eq!(neighbors_in(&s, "q", 2, &only).unwrap().len(), 1);
    }

    #[test]
    fn lone_entity_has_no_neighbors() {
        let s = space(&[("q", [1.0, 0.0])]);
        assert!(neighbors(&s, "q", 1).unwrap().is_empty());
    }

    #[test]
    fn dump_round_trips_exactly() {
        let s = space(&[("<x y>", [0.1, -3.25e-7]), ("\"lit\\t\"", [f32::MIN_POSITIVE, 1.0 / 3.0])]);
        let back = EmbeddingSpace::from_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(), s.to_text());
    }

    #[test]
    fn malformed_dumps_are_rejected() {
        assert!(EmbeddingSpace::from_text("").is_err());
        assert!(EmbeddingSpace::from_text("a\t1\n").is_err());
        assert!(matches!(EmbeddingSpace::from_text("# dim=2\na\t1\n"), Err(EmbedError::Parse { line: 2, .. })));
        assert!(EmbeddingSpace::from_text("# dim=1\na\tNaN\n").is_err());
        assert!(EmbeddingSpace::from_text("# dim=1\na\t1\na\t2\n").is_err());
        assert!(EmbeddingSpace::from_text("# colour=1\n").is_err());
    }
}
