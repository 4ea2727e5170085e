//! Word senses from clustered contexts.
//!
//! A target's occurrences yield one context vector each; clustering those
//! vectors groups the occurrences into senses. Each sense is represented by
//! the unit-normalized centroid of its member contexts, weighted by the
//! share of occurrences it covers, and the weighted senses feed a density
//! matrix through the core ensemble constructor.

use std::collections::BTreeMap;

use discocat_core::density::{from_ensemble, DensityMatrix, SenseEnsemble};
use discocat_core::RealTensor;

use crate::cluster::{agglomerate, ClusterConfig, ClusterError};
use crate::corpus::{Corpus, TokenKey};
use crate::space::{context_vector, SpaceError, VectorSpace};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SenseError {
    #[error("`{key}` does not occur in the corpus")]
    NoOccurrences { key: TokenKey },
    #[error("no occurrence of `{key}` has a usable context")]
    NoUsableContexts { key: TokenKey },
    #[error("a sense centroid has zero norm")]
    ZeroCentroid,
    #[error("sense tensor needs at least one context")]
    NoContexts,
    #[error("context {context} supplies {got} arguments, expected {expected}")]
    MissingArgument { context: usize, expected: usize, got: usize },
    #[error("argument vectors must share one dimension")]
    MixedDims,
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("density construction failed: {0}")]
    Density(#[from] discocat_core::density::DensityError),
}

/// The induced senses of one word.
#[derive(Clone, Debug, PartialEq)]
pub struct SenseInduction {
    /// Share of occurrences per sense; sums to 1 exactly.
    pub probabilities: Vec<f64>,
    /// Unit-normalized centroid per sense, over the space basis.
    pub centroids: Vec<Vec<f64>>,
    /// Occurrence count per sense.
    pub cluster_sizes: Vec<usize>,
    /// Sense index of each used occurrence, in scan order.
    pub assignments: Vec<usize>,
    /// Indices into the word's occurrence list that had usable contexts.
    pub used_occurrences: Vec<usize>,
}

impl SenseInduction {
    pub fn sense_count(&self) -> usize {
        self.probabilities.len()
    }
}

fn unit_normalize(v: &[f64]) -> Result<Vec<f64>, SenseError> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(SenseError::ZeroCentroid);
    }
    Ok(v.iter().map(|x| x / norm).collect())
}

fn mean(vectors: &[&Vec<f64>], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for v in vectors {
        for (acc, x) in out.iter_mut().zip(v.iter()) {
            *acc += x;
        }
    }
    for x in &mut out {
        *x /= vectors.len() as f64;
    }
    out
}

/// Probabilities from integer cluster sizes. The last entry absorbs any
/// rounding so the figures sum to 1 exactly.
fn exact_probabilities(sizes: &[usize]) -> Vec<f64> {
    let total: usize = sizes.iter().sum();
    let mut probs: Vec<f64> = sizes.iter().map(|&s| s as f64 / total as f64).collect();
    if let Some(last) = probs.last_mut() {
        let head: f64 = sizes[..sizes.len() - 1]
            .iter()
            .map(|&s| s as f64 / total as f64)
            .sum();
        *last = 1.0 - head;
    }
    probs
}

/// Clusters every usable occurrence of `key` into senses. Occurrences whose
/// sentence offers no known context word are skipped; if all are skipped the
/// word cannot be induced.
pub fn induce_senses(
    corpus: &Corpus,
    space: &VectorSpace,
    key: &TokenKey,
    config: &ClusterConfig,
) -> Result<SenseInduction, SenseError> {
    let occurrences = corpus.occurrences(key);
    if occurrences.is_empty() {
        return Err(SenseError::NoOccurrences { key: key.clone() });
    }
    let mut contexts: Vec<Vec<f64>> = Vec::new();
    let mut used_occurrences = Vec::new();
    for (i, &(s, p)) in occurrences.iter().enumerate() {
        match context_vector(space, &corpus.sentences()[s], p) {
            Ok(v) => {
                contexts.push(v);
                used_occurrences.push(i);
            }
            Err(SpaceError::NoContext) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if contexts.is_empty() {
        return Err(SenseError::NoUsableContexts { key: key.clone() });
    }

    let clusters = agglomerate(&contexts, config)?;
    let mut centroids = Vec::with_capacity(clusters.len());
    let mut cluster_sizes = Vec::with_capacity(clusters.len());
    let mut assignments = vec![0usize; contexts.len()];
    for (sense, members) in clusters.iter().enumerate() {
        let member_vecs: Vec<&Vec<f64>> = members.iter().map(|&i| &contexts[i]).collect();
        centroids.push(unit_normalize(&mean(&member_vecs, space.dim()))?);
        cluster_sizes.push(members.len());
        for &i in members {
            assignments[i] = sense;
        }
    }
    let probabilities = exact_probabilities(&cluster_sizes);
    Ok(SenseInduction { probabilities, centroids, cluster_sizes, assignments, used_occurrences })
}

/// Pooled meaning of a word that is not sense-split: the unit-normalized
/// mean of all its context vectors. Used for modifiers, whose job in the
/// fixtures is to disambiguate rather than to be disambiguated.
pub fn single_sense_centroid(
    corpus: &Corpus,
    space: &VectorSpace,
    key: &TokenKey,
) -> Result<Vec<f64>, SenseError> {
    let occurrences = corpus.occurrences(key);
    if occurrences.is_empty() {
        return Err(SenseError::NoOccurrences { key: key.clone() });
    }
    let mut contexts = Vec::new();
    for &(s, p) in &occurrences {
        match context_vector(space, &corpus.sentences()[s], p) {
            Ok(v) => contexts.push(v),
            Err(SpaceError::NoContext) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if contexts.is_empty() {
        return Err(SenseError::NoUsableContexts { key: key.clone() });
    }
    let refs: Vec<&Vec<f64>> = contexts.iter().collect();
    unit_normalize(&mean(&refs, space.dim()))
}

/// Weighted pure senses, ready for density construction.
pub fn make_ensemble(induction: &SenseInduction) -> Result<SenseEnsemble, SenseError> {
    let entries = induction
        .probabilities
        .iter()
        .zip(&induction.centroids)
        .map(|(&p, c)| (p, RealTensor::vector(c)))
        .collect();
    Ok(SenseEnsemble::new(entries)?)
}

/// Density matrix of a word from its induced senses.
pub fn word_density(induction: &SenseInduction) -> Result<DensityMatrix, SenseError> {
    Ok(from_ensemble(&make_ensemble(induction)?)?)
}

/// Sum over contexts of the n-fold tensor product of that context's
/// argument vectors: the rank-n sense tensor of a relational word. Each
/// inner slice holds the `arity` argument vectors of one context.
pub fn sense_tensor(arity: usize, contexts: &[Vec<Vec<f64>>]) -> Result<RealTensor, SenseError> {
    if contexts.is_empty() {
        return Err(SenseError::NoContexts);
    }
    let dim = contexts
        .first()
        .and_then(|c| c.first())
        .map(Vec::len)
        .ok_or(SenseError::MissingArgument { context: 0, expected: arity, got: 0 })?;
    for (i, args) in contexts.iter().enumerate() {
        if args.len() != arity {
            return Err(SenseError::MissingArgument {
                context: i,
                expected: arity,
                got: args.len(),
            });
        }
        if args.iter().any(|a| a.len() != dim) {
            return Err(SenseError::MixedDims);
        }
    }
    let mut out = RealTensor::zeros(vec![dim; arity]);
    let mut index = vec![0usize; arity];
    for args in contexts {
        loop {
            let mut product = 1.0;
            for (k, &i) in index.iter().enumerate() {
                product *= args[k][i];
            }
            out.set(&index, out.get(&index) + product);
            if !next_index(&mut index, dim) {
                break;
            }
        }
    }
    Ok(out)
}

/// Advances a row-major index over a `[dim; rank]` cube; false on wrap.
fn next_index(index: &mut [usize], dim: usize) -> bool {
    for i in (0..index.len()).rev() {
        index[i] += 1;
        if index[i] < dim {
            return true;
        }
        index[i] = 0;
    }
    false
}

/// Union of each vector's `k` heaviest coordinates, ascending. Ties prefer
/// the lower index, so the choice is reproducible.
pub fn top_k_union(vectors: &[&[f64]], k: usize) -> Vec<usize> {
    let mut chosen = std::collections::BTreeSet::new();
    for v in vectors {
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap().then(a.cmp(&b)));
        for &i in order.iter().take(k) {
            chosen.insert(i);
        }
    }
    chosen.into_iter().collect()
}

/// Restriction of a vector to the given coordinates, in their order.
pub fn restrict(v: &[f64], coords: &[usize]) -> Vec<f64> {
    coords.iter().map(|&i| v[i]).collect()
}

/// Restriction of every axis of a tensor to the given coordinates.
pub fn restrict_tensor(t: &RealTensor, coords: &[usize]) -> RealTensor {
    let rank = t.rank();
    let mut out = RealTensor::zeros(vec![coords.len(); rank]);
    if coords.is_empty() && rank > 0 {
        return out;
    }
    let mut index = vec![0usize; rank];
    loop {
        let source: Vec<usize> = index.iter().map(|&i| coords[i]).collect();
        out.set(&index, t.get(&source));
        if !next_index(&mut index, coords.len()) {
            return out;
        }
    }
}

/// Maps cluster assignments back to sense labels per used occurrence and
/// scores them against planted labels; helper shared by tests and reports.
pub fn assignment_map(induction: &SenseInduction) -> BTreeMap<usize, usize> {
    induction
        .used_occurrences
        .iter()
        .zip(&induction.assignments)
        .map(|(&occ, &sense)| (occ, sense))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Pos;
    use crate::space::{build_space, SpaceConfig};

    fn key(lemma: &str, pos: Pos) -> TokenKey {
        TokenKey::new(lemma, pos)
    }

    fn space_for(text: &str) -> (Corpus, VectorSpace) {
        let corpus = Corpus::parse(text);
        let config = SpaceConfig { window: 5, basis_size: 50, ..SpaceConfig::default() };
        let space = build_space(&corpus, &config).unwrap();
        (corpus, space)
    }

    #[test]
    fn two_planted_topics_come_back_as_two_senses() {
        // Three topic words per sentence keep cross-topic contexts past the
        // merge threshold; the shared `bank` coordinate alone is not enough
        // to pull the topics together.
        let mut text = String::new();
        for _ in 0..6 {
            text.push_str("bank_N loan_N vault_N teller_N\n");
        }
        for _ in 0..6 {
            text.push_str("bank_N river_N mud_N reed_N\n");
        }
        let (corpus, space) = space_for(&text);
        let config = ClusterConfig { tau: 0.8, min_clusters: 1, min_size: 2 };
        let induced = induce_senses(&corpus, &space, &key("bank", Pos::Noun), &config).unwrap();
        assert_eq!(induced.sense_count(), 2);
        assert_eq!(induced.cluster_sizes, vec![6, 6]);
        assert_eq!(induced.probabilities, vec![0.5, 0.5]);
        assert_eq!(induced.assignments[..6], [0; 6]);
        assert_eq!(induced.assignments[6..], [1; 6]);
        for c in &induced.centroids {
            let norm: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn probabilities_sum_to_one_exactly_even_for_thirds() {
        assert_eq!(exact_probabilities(&[1, 1, 1]).iter().sum::<f64>(), 1.0);
        assert_eq!(exact_probabilities(&[30, 10]), vec![0.75, 0.25]);
    }

    #[test]
    fn occurrences_without_context_are_skipped_not_fatal() {
        let text = "bank_N loan_N vault_N\nbank_N loan_N vault_N\nbank_N the of\n";
        let (corpus, space) = space_for(text);
        let config = ClusterConfig { tau: 0.8, min_clusters: 1, min_size: 1 };
        let induced = induce_senses(&corpus, &space, &key("bank", Pos::Noun), &config).unwrap();
        assert_eq!(induced.used_occurrences, vec![0, 1]);
        assert_eq!(induced.cluster_sizes, vec![2]);
    }

    #[test]
    fn missing_words_and_contextless_words_error_distinctly() {
        let (corpus, space) = space_for("bank_N loan_N\n");
        let config = ClusterConfig::default();
        let ghost = key("ghost", Pos::Noun);
        assert!(matches!(
            induce_senses(&corpus, &space, &ghost, &config),
            Err(SenseError::NoOccurrences { .. })
        ));
        let lonely_corpus = Corpus::parse("bank_N loan_N\nsolo_N the\n");
        let solo = key("solo", Pos::Noun);
        let space2 = build_space(
            &lonely_corpus,
            &SpaceConfig { window: 5, basis_size: 50, ..SpaceConfig::default() },
        )
        .unwrap();
        assert!(matches!(
            induce_senses(&lonely_corpus, &space2, &solo, &ClusterConfig::default()),
            Err(SenseError::NoUsableContexts { .. })
        ));
    }

    #[test]
    fn ensemble_and_density_flow_through_core_types() {
        let mut text = String::new();
        for _ in 0..6 {
            text.push_str("bank_N loan_N vault_N teller_N\n");
        }
        for _ in 0..2 {
            text.push_str("bank_N river_N mud_N reed_N\n");
        }
        let (corpus, space) = space_for(&text);
        let config = ClusterConfig { tau: 0.8, min_clusters: 1, min_size: 2 };
        let induced = induce_senses(&corpus, &space, &key("bank", Pos::Noun), &config).unwrap();
        assert_eq!(induced.probabilities, vec![0.75, 0.25]);
        let density = word_density(&induced).unwrap();
        let entropy = density.von_neumann_entropy().unwrap();
        assert!(entropy > 0.0 && entropy <= f64::ln(2.0) + 1e-12, "entropy {entropy}");
    }

    #[test]
    fn sense_tensor_sums_argument_products() {
        let e1 = vec![1.0, 0.0];
        let e2 = vec![0.0, 1.0];
        let t = sense_tensor(2, &[vec![e1.clone(), e2.clone()], vec![e2, e1]]).unwrap();
        assert_eq!(t.shape(), &[2, 2]);
        assert_eq!(t.get(&[0, 1]), 1.0);
        assert_eq!(t.get(&[1, 0]), 1.0);
        assert_eq!(t.get(&[0, 0]), 0.0);

        let single = sense_tensor(1, &[vec![vec![0.3, 0.7]]]).unwrap();
        assert_eq!(single.data(), &[0.3, 0.7]);
    }

    #[test]
    fn sense_tensor_matches_the_verb_matrix_construction() {
        let pairs = [
            (vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]),
            (vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]),
            (vec![0.5, 0.5, 0.0], vec![1.0, 0.0, 1.0]),
        ];
        let contexts: Vec<Vec<Vec<f64>>> =
            pairs.iter().map(|(s, o)| vec![s.clone(), o.clone()]).collect();
        let t = sense_tensor(2, &contexts).unwrap();
        let core_pairs: Vec<(RealTensor, RealTensor)> = pairs
            .iter()
            .map(|(s, o)| (RealTensor::vector(s), RealTensor::vector(o)))
            .collect();
        let v = discocat_core::compose::build_verb_matrix(&core_pairs).unwrap();
        assert_eq!(t, v);
    }

    #[test]
    fn sense_tensor_rejects_short_contexts() {
        let err = sense_tensor(2, &[vec![vec![1.0, 0.0]]]).unwrap_err();
        assert!(matches!(err, SenseError::MissingArgument { expected: 2, got: 1, .. }));
    }

    #[test]
    fn top_k_union_prefers_heavy_then_low_coordinates() {
        let a = [0.1, 0.9, 0.3, 0.0];
        let b = [0.0, 0.0, 0.5, 0.5];
        assert_eq!(top_k_union(&[&a, &b], 2), vec![1, 2, 3]);
        // Ties inside one vector go to the lower index.
        let tied = [0.5, 0.5, 0.5];
        assert_eq!(top_k_union(&[&tied], 2), vec![0, 1]);
    }

    #[test]
    fn restriction_slices_vectors_and_tensors_consistently() {
        let v = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(restrict(&v, &[1, 3]), vec![1.0, 3.0]);
        let m = RealTensor::new(vec![3, 3], (0..9).map(|x| x as f64).collect()).unwrap();
        let r = restrict_tensor(&m, &[0, 2]);
        assert_eq!(r.shape(), &[2, 2]);
        assert_eq!(r.data(), &[0.0, 2.0, 6.0, 8.0]);
    }
}
