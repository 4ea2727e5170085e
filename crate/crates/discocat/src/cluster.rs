//! Bottom-up average-linkage clustering of context vectors.
//!
//! Merging continues while the closest pair of clusters sits at cosine
//! distance at most `tau` and more than `min_clusters` clusters remain.
//! All ties break deterministically toward the lowest involved member
//! index, so a fixed input yields a fixed partition on every run and any
//! thread count. A post-pass folds clusters smaller than `min_size` into
//! their nearest neighbour: a handful of stray contexts is noise, not a
//! word sense.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ClusterError {
    #[error("clustering needs at least one vector")]
    NoVectors,
    #[error("vectors must share one dimension")]
    MixedDims,
}

/// Knobs for sense clustering.
#[derive(Clone, Copy, Debug)]
pub struct ClusterConfig {
    /// Merge clusters while the closest pair is at most this far apart.
    pub tau: f64,
    /// Never merge below this many clusters.
    pub min_clusters: usize,
    /// Clusters smaller than this are folded into their nearest neighbour.
    pub min_size: usize,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig { tau: 0.8, min_clusters: 1, min_size: 5 }
    }
}

/// Cosine distance `1 - cos(a, b)`; a zero-norm vector is maximally far
/// from everything.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    1.0 - dot / (na.sqrt() * nb.sqrt())
}

/// A cluster is its member indices, ascending. Clusters are keyed and
/// ordered by their smallest member.
type Clusters = BTreeMap<usize, Vec<usize>>;

struct Linkage {
    // Pairwise average-linkage distances between live clusters, keyed by
    // (low key, high key).
    dist: BTreeMap<(usize, usize), f64>,
    clusters: Clusters,
}

impl Linkage {
    fn new(vectors: &[Vec<f64>]) -> Linkage {
        let mut dist = BTreeMap::new();
        for i in 0..vectors.len() {
            for j in i + 1..vectors.len() {
                dist.insert((i, j), cosine_distance(&vectors[i], &vectors[j]));
            }
        }
        let clusters = (0..vectors.len()).map(|i| (i, vec![i])).collect();
        Linkage { dist, clusters }
    }

    fn len(&self) -> usize {
        self.clusters.len()
    }

    /// Closest pair; ties fall to the pair with the lowest keys.
    fn closest(&self) -> Option<((usize, usize), f64)> {
        let mut best: Option<((usize, usize), f64)> = None;
        for (&pair, &d) in &self.dist {
            match best {
                Some((_, bd)) if d >= bd => {}
                _ => best = Some((pair, d)),
            }
        }
        best
    }

    /// Merges cluster `b` into cluster `a` (keys), updating all distances by
    /// the size-weighted average-linkage rule.
    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (a.min(b), a.max(b));
        let na = self.clusters[&a].len() as f64;
        let nb = self.clusters[&b].len() as f64;
        let keys: Vec<usize> = self.clusters.keys().copied().collect();
        for c in keys {
            if c == a || c == b {
                continue;
            }
            let dac = self.dist[&ordered(a, c)];
            let dbc = self.dist[&ordered(b, c)];
            let merged = (na * dac + nb * dbc) / (na + nb);
            self.dist.insert(ordered(a, c), merged);
            self.dist.remove(&ordered(b, c));
        }
        self.dist.remove(&(a, b));
        let members = self.clusters.remove(&b).expect("live cluster");
        let target = self.clusters.get_mut(&a).expect("live cluster");
        target.extend(members);
        target.sort_unstable();
    }

    /// Smallest cluster under `min_size`, by (size, key).
    fn undersized(&self, min_size: usize) -> Option<usize> {
        self.clusters
            .iter()
            .filter(|(_, members)| members.len() < min_size)
            .min_by_key(|(key, members)| (members.len(), **key))
            .map(|(key, _)| *key)
    }

    /// Nearest neighbour of cluster `key`; ties fall to the lowest key.
    fn nearest(&self, key: usize) -> Option<usize> {
        self.clusters
            .keys()
            .filter(|&&c| c != key)
            .map(|&c| (self.dist[&ordered(key, c)], c))
            .min_by(|(da, ca), (db, cb)| da.partial_cmp(db).unwrap().then(ca.cmp(cb)))
            .map(|(_, c)| c)
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Clusters the vectors; returns member lists sorted ascending, ordered by
/// smallest member.
pub fn agglomerate(
    vectors: &[Vec<f64>],
    config: &ClusterConfig,
) -> Result<Vec<Vec<usize>>, ClusterError> {
    if vectors.is_empty() {
        return Err(ClusterError::NoVectors);
    }
    let dim = vectors[0].len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(ClusterError::MixedDims);
    }
    let floor = config.min_clusters.max(1);
    let mut linkage = Linkage::new(vectors);
    while linkage.len() > floor {
        let Some(((a, b), d)) = linkage.closest() else { break };
        if d > config.tau {
            break;
        }
        linkage.merge(a, b);
    }
    // Fold stray clusters into their nearest neighbour.
    while linkage.len() > 1 {
        let Some(small) = linkage.undersized(config.min_size) else { break };
        let Some(target) = linkage.nearest(small) else { break };
        linkage.merge(small, target);
    }
    Ok(linkage.clusters.into_values().collect())
}

/// Fraction of items whose cluster's dominant label matches their own.
/// Used to score recovered partitions against planted ones.
pub fn purity(clusters: &[Vec<usize>], labels: &[usize]) -> f64 {
    let total: usize = clusters.iter().map(Vec::len).sum();
    if total == 0 {
        return 0.0;
    }
    let mut agree = 0usize;
    for cluster in clusters {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &i in cluster {
            *counts.entry(labels[i]).or_insert(0) += 1;
        }
        agree += counts.values().copied().max().unwrap_or(0);
    }
    agree as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loose() -> ClusterConfig {
        ClusterConfig { tau: 0.8, min_clusters: 1, min_size: 1 }
    }

    #[test]
    fn identical_vectors_collapse_to_one_cluster() {
        let vectors = vec![vec![1.0, 0.0]; 5];
        let clusters = agglomerate(&vectors, &loose()).unwrap();
        assert_eq!(clusters, vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn a_single_vector_is_a_singleton_cluster() {
        let clusters = agglomerate(&[vec![0.3, 0.4]], &loose()).unwrap();
        assert_eq!(clusters, vec![vec![0]]);
    }

    #[test]
    fn orthogonal_bundles_split_into_two_pure_clusters() {
        let mut vectors = Vec::new();
        for i in 0..10 {
            vectors.push(vec![1.0, 0.001 * i as f64, 0.0]);
        }
        for i in 0..10 {
            vectors.push(vec![0.0, 0.001 * i as f64, 1.0]);
        }
        let clusters = agglomerate(&vectors, &loose()).unwrap();
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0], (0..10).collect::<Vec<_>>());
        assert_eq!(clusters[1], (10..20).collect::<Vec<_>>());
        let labels: Vec<usize> = (0..20).map(|i| i / 10).collect();
        assert_eq!(purity(&clusters, &labels), 1.0);
    }

    #[test]
    fn threshold_stops_merging_distant_bundles() {
        let vectors = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![-1.0, 0.0]];
        // Opposite vectors are at distance 2 > tau.
        let clusters = agglomerate(&vectors, &loose()).unwrap();
        assert_eq!(clusters, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn min_clusters_floor_halts_merging_early() {
        let vectors = vec![vec![1.0, 0.0]; 4];
        let config = ClusterConfig { tau: 0.8, min_clusters: 2, min_size: 1 };
        let clusters = agglomerate(&vectors, &config).unwrap();
        assert_eq!(clusters.len(), 2);
    }

    #[test]
    fn small_clusters_fold_into_their_nearest_neighbour() {
        let mut vectors = vec![vec![1.0, 0.0, 0.0]; 6];
        vectors.extend(vec![vec![0.0, 0.0, 1.0]; 6]);
        // The stray is 0.4 from the first bundle and 1.0 from the second:
        // too far to merge under tau, close enough to fold afterwards.
        vectors.push(vec![0.6, 0.8, 0.0]);
        let config = ClusterConfig { tau: 0.3, min_clusters: 1, min_size: 2 };
        let clusters = agglomerate(&vectors, &config).unwrap();
        assert_eq!(clusters, vec![vec![0, 1, 2, 3, 4, 5, 12], vec![6, 7, 8, 9, 10, 11]]);
    }

    #[test]
    fn shuffling_input_order_relabels_but_preserves_the_partition() {
        let vectors = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.98, 0.02],
            vec![0.02, 0.98],
        ];
        let clusters = agglomerate(&vectors, &loose()).unwrap();
        assert_eq!(clusters, vec![vec![0, 2], vec![1, 3]]);

        let shuffled = vec![
            vectors[1].clone(),
            vectors[2].clone(),
            vectors[3].clone(),
            vectors[0].clone(),
        ];
        let clusters = agglomerate(&shuffled, &loose()).unwrap();
        assert_eq!(clusters, vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn zero_norm_vectors_sit_at_maximal_distance() {
        assert_eq!(cosine_distance(&[0.0, 0.0], &[1.0, 0.0]), 1.0);
        assert!((cosine_distance(&[1.0, 0.0], &[1.0, 0.0])).abs() < 1e-15);
        assert!((cosine_distance(&[1.0, 0.0], &[-1.0, 0.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn empty_input_and_mixed_dims_are_errors() {
        assert_eq!(agglomerate(&[], &loose()), Err(ClusterError::NoVectors));
        assert_eq!(
            agglomerate(&[vec![1.0], vec![1.0, 2.0]], &loose()),
            Err(ClusterError::MixedDims)
        );
    }
}
