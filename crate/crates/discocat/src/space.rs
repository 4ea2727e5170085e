//! Distributional vector space from co-occurrence counts.
//!
//! Every tagged content word outside the stop list is a target and receives
//! one weight per basis word. The weight is the conditional-over-marginal
//! ratio `count(c,t) * count(total) / (count(t) * count(c))`, i.e. how much
//! more often `c` appears near `t` than chance predicts; ratios with a zero
//! denominator are defined as 0. Counting is window-limited by token
//! position, so raw and stop-listed tokens push content words apart without
//! contributing counts.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::corpus::{Corpus, Token, TokenKey};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SpaceError {
    #[error("corpus has no content tokens after filtering")]
    EmptyCorpus,
    #[error("window must be at least 1")]
    ZeroWindow,
    #[error("basis size must be at least 1")]
    ZeroBasis,
    #[error("no context words with known vectors for this occurrence")]
    NoContext,
    #[error("sentence {sentence} has no position {position}")]
    BadPosition { sentence: usize, position: usize },
}

/// Knobs for space construction.
#[derive(Clone, Debug)]
pub struct SpaceConfig {
    /// Co-occurrence window, in token positions on either side.
    pub window: usize,
    /// Number of most frequent content words forming the basis.
    pub basis_size: usize,
    /// Lemmas excluded from targets and basis.
    pub stop: BTreeSet<String>,
}

impl Default for SpaceConfig {
    fn default() -> Self {
        SpaceConfig {
            window: 5,
            basis_size: 2000,
            stop: crate::corpus::default_stop_set(),
        }
    }
}

/// The finished space: an ordered basis and one dense weight row per target.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSpace {
    basis: Vec<TokenKey>,
    basis_index: BTreeMap<TokenKey, usize>,
    vectors: BTreeMap<TokenKey, Vec<f64>>,
}

impl VectorSpace {
    pub fn new(basis: Vec<TokenKey>, vectors: BTreeMap<TokenKey, Vec<f64>>) -> VectorSpace {
        let basis_index = basis.iter().cloned().zip(0..).collect();
        VectorSpace { basis, basis_index, vectors }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[TokenKey] {
        &self.basis
    }

    pub fn basis_position(&self, key: &TokenKey) -> Option<usize> {
        self.basis_index.get(key).copied()
    }

    pub fn vector(&self, key: &TokenKey) -> Option<&[f64]> {
        self.vectors.get(key).map(Vec::as_slice)
    }

    pub fn targets(&self) -> impl Iterator<Item = &TokenKey> {
        self.vectors.keys()
    }

    pub fn target_count(&self) -> usize {
        self.vectors.len()
    }
}

/// Per-sentence content positions: tagged tokens whose lemma is not
/// stop-listed.
fn content_positions(sentence: &[Token], stop: &BTreeSet<String>) -> Vec<(usize, TokenKey)> {
    sentence
        .iter()
        .enumerate()
        .filter_map(|(i, t)| match t {
            Token::Tagged(k) if !stop.contains(&k.lemma) => Some((i, k.clone())),
            _ => None,
        })
        .collect()
}

#[derive(Default)]
struct Counts {
    // target -> occurrences; doubles as context frequency.
    freq: BTreeMap<TokenKey, u64>,
    // (target, context) -> windowed co-occurrences.
    pair: BTreeMap<(TokenKey, TokenKey), u64>,
    total: u64,
}

impl Counts {
    fn absorb(mut self, other: Counts) -> Counts {
        for (k, v) in other.freq {
            *self.freq.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.pair {
            *self.pair.entry(k).or_insert(0) += v;
        }
        self.total += other.total;
        self
    }
}

fn count_sentence(sentence: &[Token], config: &SpaceConfig) -> Counts {
    let content = content_positions(sentence, &config.stop);
    let mut counts = Counts { total: content.len() as u64, ..Counts::default() };
    for (_, key) in &content {
        *counts.freq.entry(key.clone()).or_insert(0) += 1;
    }
    for (a, (pos_t, target)) in content.iter().enumerate() {
        for (b, (pos_c, context)) in content.iter().enumerate() {
            if a == b {
                continue;
            }
            if pos_t.abs_diff(*pos_c) <= config.window {
                *counts.pair.entry((target.clone(), context.clone())).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Builds the space. Counting runs in parallel over sentences; integer
/// counts merge associatively, so the result is independent of thread
/// scheduling.
pub fn build_space(corpus: &Corpus, config: &SpaceConfig) -> Result<VectorSpace, SpaceError> {
    if config.window == 0 {
        return Err(SpaceError::ZeroWindow);
    }
    if config.basis_size == 0 {
        return Err(SpaceError::ZeroBasis);
    }
    let counts = corpus
        .sentences()
        .par_iter()
        .map(|s| count_sentence(s, config))
        .reduce(Counts::default, Counts::absorb);
    if counts.total == 0 {
        return Err(SpaceError::EmptyCorpus);
    }

    // Basis: most frequent first, lexicographic key on ties.
    let mut by_freq: Vec<(&TokenKey, u64)> = counts.freq.iter().map(|(k, &v)| (k, v)).collect();
    by_freq.sort_by(|(ka, va), (kb, vb)| vb.cmp(va).then(ka.cmp(kb)));
    let basis: Vec<TokenKey> =
        by_freq.iter().take(config.basis_size).map(|(k, _)| (*k).clone()).collect();
    let basis_index: BTreeMap<&TokenKey, usize> = basis.iter().zip(0..).collect();

    let total = counts.total as f64;
    let mut vectors: BTreeMap<TokenKey, Vec<f64>> = counts
        .freq
        .keys()
        .map(|k| (k.clone(), vec![0.0; basis.len()]))
        .collect();
    for ((target, context), &n) in &counts.pair {
        let Some(&i) = basis_index.get(context) else { continue };
        let t_freq = counts.freq[target] as f64;
        let c_freq = counts.freq[context] as f64;
        let row = vectors.get_mut(target).expect("target counted");
        row[i] = n as f64 * total / (t_freq * c_freq);
    }
    Ok(VectorSpace::new(basis, vectors))
}

/// Mean of the space vectors of the other content words in the sentence.
/// Words without vectors (raw, stop-listed, unseen) are skipped; if nothing
/// remains the occurrence has no usable context.
pub fn context_vector(
    space: &VectorSpace,
    sentence: &[Token],
    target_position: usize,
) -> Result<Vec<f64>, SpaceError> {
    if target_position >= sentence.len() {
        return Err(SpaceError::BadPosition { sentence: 0, position: target_position });
    }
    let mut sum = vec![0.0; space.dim()];
    let mut n = 0usize;
    for (i, token) in sentence.iter().enumerate() {
        if i == target_position {
            continue;
        }
        let Some(v) = token.key().and_then(|k| space.vector(k)) else { continue };
        for (acc, x) in sum.iter_mut().zip(v) {
            *acc += x;
        }
        n += 1;
    }
    if n == 0 {
        return Err(SpaceError::NoContext);
    }
    for x in &mut sum {
        *x /= n as f64;
    }
    Ok(sum)
}
