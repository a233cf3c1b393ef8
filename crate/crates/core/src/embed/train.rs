use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::space::EmbeddingSpace;
use super::walks::WalkCorpus;
use super::EmbedError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    /// Starting learning rate; decays linearly towards `1e-4` of itself.
    pub learning_rate: f32,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { dim: 64, window: 5, negatives: 5, epochs: 5, learning_rate: 0.025, seed: 42 }
    }
}

impl TrainConfig {
    fn check(&self) -> Result<(), EmbedError> {
        let bad = |what: &str| Err(EmbedError::InvalidConfig(what.to_owned()));
        if self.dim == 0 {
            return bad("dim must be at least 1");
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning rate must be positive");
        }
        Ok(())
    }
}

fn sigmoid(x: f32) -> f32 {
    1.0 / (1.0 + (-x).exp())
}

/// Negative log-likelihood of one (label, score) pair.
fn pair_loss(label: bool, score: f32) -> f64 {
    let x = if label { score as f64 } else { -(score as f64) };
    // ln(1 + e^-x), stable for large |x|
    if x > 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

fn contexts(sentence: &[usize], i: usize, window: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    let lo = i.saturating_sub(window);
    let hi = (i + window).min(sentence.len() - 1);
    (lo..=hi).filter(move |&j| j != i).map(move |j| (sentence[j], j))
}

/// The positive context followed by up to `negatives` noise tokens; a noise
/// draw equal to the context is dropped.
fn targets(context: usize, negatives: usize, noise: &WeightedIndex<f64>, rng: &mut ChaCha8Rng) -> Vec<(usize, bool)> {
    let mut out = vec![(context, true)];
    for _ in 0..negatives {
        let t = noise.sample(rng);
        if t != context {
            out.push((t, false));
        }
    }
    out
}

/// Mean pair loss of the whole corpus under fixed parameters. The noise
/// draws come from `eval_seed`, so calls after different epochs score the
/// same pairs.
fn corpus_loss(
    sentences: &[Vec<usize>],
    input: &[f32],
    output: &[f32],
    config: &TrainConfig,
    noise: &WeightedIndex<f64>,
    eval_seed: u64,
) -> f64 {
    let dim = config.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(eval_seed);
    let mut loss = 0.0f64;
    let mut pairs = 0usize;
    for sentence in sentences {
        for (i, &center) in sentence.iter().enumerate() {
            let c = &input[center * dim..(center + 1) * dim];
            for (context, _) in contexts(sentence, i, config.window) {
                for (target, label) in targets(context, config.negatives, noise, &mut rng) {
                    let o = &output[target * dim..(target + 1) * dim];
                    loss += pair_loss(label, c.iter().zip(o).map(|(a, b)| a * b).sum());
                }
                pairs += 1;
            }
        }
    }
    if pairs == 0 {
        0.0
    } else {
        loss / pairs as f64
    }
}

/// Skip-gram with negative sampling over the walk corpus. Each epoch visits
/// the walks in a seeded shuffled order on one thread, so the result is a
/// pure function of the corpus and `config`. Returns the space and, for each epoch, the mean
/// corpus loss of the parameters at the end of that epoch.
pub fn train_with_losses(corpus: &WalkCorpus, config: &TrainConfig) -> Result<(EmbeddingSpace, Vec<f64>), EmbedError> {
    config.check()?;
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for w in &corpus.walks {
        for t in &w.tokens {
            *counts.entry(t).or_default() += 1;
        }
    }
    if counts.is_empty() {
        return Err(EmbedError::EmptyCorpus);
    }
    let index: BTreeMap<&str, usize> = counts.keys().enumerate().map(|(i, t)| (*t, i)).collect();
    let sentences: Vec<Vec<usize>> =
        corpus.walks.iter().map(|w| w.tokens.iter().map(|t| index[t.as_str()]).collect()).collect();
    let noise = WeightedIndex::new(counts.values().map(|&c| (c as f64).powf(0.75))).expect("counts are positive");

    let dim = config.dim;
    let vocab = counts.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut input: Vec<f32> = (0..vocab * dim).map(|_| (rng.gen::<f32>() - 0.5) / dim as f32).collect();
    let mut output = vec![0.0f32; vocab * dim];
    let mut grad = vec![0.0f32; dim];

    let total = (config.epochs * corpus.token_count()) as f32;
    let mut processed = 0usize;
    let eval_seed = rng.gen::<u64>();
    let mut losses = Vec::with_capacity(config.epochs);
    let mut order: Vec<usize> = (0..sentences.len()).collect();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for sentence in order.iter().map(|&w| &sentences[w]) {
            for (i, &center) in sentence.iter().enumerate() {
                let lr = config.learning_rate * (1.0 - processed as f32 / total).max(1e-4);
                processed += 1;
                for (context, _) in contexts(sentence, i, config.window) {
                    grad.iter_mut().for_each(|g| *g = 0.0);
                    let c = &mut input[center * dim..(center + 1) * dim];
                    for (target, label) in targets(context, config.negatives, &noise, &mut rng) {
                        let o = &mut output[target * dim..(target + 1) * dim];
                        let score: f32 = c.iter().zip(o.iter()).map(|(a, b)| a * b).sum();
                        let g = (if label { 1.0 } else { 0.0 } - sigmoid(score)) * lr;
                        for k in 0..dim {
                            grad[k] += g * o[k];
                            o[k] += g * c[k];
                        }
                    }
                    c.iter_mut().zip(&grad).for_each(|(v, g)| *v += g);
                }
            }
        }
        losses.push(corpus_loss(&sentences, &input, &output, config, &noise, eval_seed));
    }

    let tokens: Vec<String> = counts.keys().map(|t| t.to_string()).collect();
    let vectors: Vec<Vec<f32>> = input.chunks(dim).map(<[f32]>::to_vec).collect();
    Ok((EmbeddingSpace::new(*config, tokens, vectors), losses))
}

pub fn train(corpus: &WalkCorpus, config: &TrainConfig) -> Result<EmbeddingSpace, EmbedError> {
    train_with_losses(corpus, config).map(|(space, _)| space)
}
