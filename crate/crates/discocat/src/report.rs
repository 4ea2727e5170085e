//! The end-to-end ambiguity report: from a raw corpus to a table of
//! Von Neumann entropies showing how modifiers sharpen two-sense nouns.
//!
//! For each fixture noun the table lists the entropy of the bare noun's
//! induced density matrix, of the adjective-modified noun, and of the
//! noun restricted by a subject relative clause built from its rarer
//! sense's verb ("noun that verb object").

use std::fmt::Write as _;

use discocat_core::compose::{closed_adjective_noun, closed_subject_relative_clause, ComposeError};
use discocat_core::density::{from_ensemble, lift_pure, DensityError, DensityMatrix,
    SenseEnsemble};
use discocat_core::RealTensor;

use crate::cluster::ClusterConfig;
use crate::corpus::{Corpus, Pos, TokenKey};
use crate::senses::{induce_senses, restrict, sense_tensor, single_sense_centroid, top_k_union,
    SenseError};
use crate::space::{build_space, SpaceConfig, SpaceError, VectorSpace};
use crate::synthetic::FIXTURES;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("verb `{verb}` never occurs with both a subject and an object")]
    NoVerbArguments { verb: TokenKey },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Senses(#[from] SenseError),
    #[error(transparent)]
    Compose(#[from] ComposeError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Repair(#[from] crate::repair::RepairError),
}

/// One noun's entropies: bare, adjective-modified, clause-restricted.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub noun: String,
    pub adjective: String,
    pub verb: String,
    pub noun_entropy: f64,
    pub adjective_entropy: f64,
    pub clause_entropy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportTable {
    pub rows: Vec<ReportRow>,
}

impl ReportTable {
    /// `noun: adjective/verb  S(noun)  S(adj noun)  S(noun that verb obj)`.
    pub fn render(&self) -> String {
        let mut out =
            String::from("# noun: adjective/verb  bare  adjective-modified  clause-restricted\n");
        for row in &self.rows {
            writeln!(
                out,
                "{}: {}/{} {:.9} {:.9} {:.9}",
                row.noun,
                row.adjective,
                row.verb,
                row.noun_entropy,
                row.adjective_entropy,
                row.clause_entropy
            )
            .expect("string write");
        }
        out
    }
}

/// Space vectors of a verb occurrence's subject and object.
type ArgumentPair = (Vec<f64>, Vec<f64>);

/// The space vector of the nearest tagged noun before `pos`, then after.
fn verb_argument_pair(
    space: &VectorSpace,
    sentence: &[crate::corpus::Token],
    pos: usize,
) -> Option<ArgumentPair> {
    let noun_vector = |token: &crate::corpus::Token| {
        let key = token.key()?;
        if key.pos != Pos::Noun {
            return None;
        }
        space.vector(key).map(<[f64]>::to_vec)
    };
    let subject = sentence[..pos].iter().rev().find_map(noun_vector)?;
    let object = sentence[pos + 1..].iter().find_map(noun_vector)?;
    Some((subject, object))
}

/// All (subject, object) space-vector pairs of a verb's occurrences.
/// Occurrences missing either argument are skipped.
fn verb_arguments(
    corpus: &Corpus,
    space: &VectorSpace,
    verb: &TokenKey,
) -> Result<Vec<ArgumentPair>, ReportError> {
    let mut pairs = Vec::new();
    for (s, p) in corpus.occurrences(verb) {
        if let Some(pair) = verb_argument_pair(space, &corpus.sentences()[s], p) {
            pairs.push(pair);
        }
    }
    if pairs.is_empty() {
        return Err(ReportError::NoVerbArguments { verb: verb.clone() });
    }
    Ok(pairs)
}

fn mean(vectors: &[Vec<f64>]) -> Vec<f64> {
    let dim = vectors.first().map_or(0, Vec::len);
    let mut out = vec![0.0; dim];
    for v in vectors {
        for (o, x) in out.iter_mut().zip(v) {
            *o += x;
        }
    }
    let n = vectors.len() as f64;
    out.iter_mut().for_each(|o| *o /= n);
    out
}

fn entropy_of(operator: RealTensor) -> Result<f64, ReportError> {
    // Conjugation by large verb matrices leaves relative-rounding-sized
    // asymmetries; anything beyond that is a real bug and still errors.
    Ok(crate::repair::to_density(&operator, 1e-9)?.von_neumann_entropy()?)
}

/// Entropies for one ambiguous noun given its helper words.
fn noun_row(
    corpus: &Corpus,
    space: &VectorSpace,
    cluster: &ClusterConfig,
    top_k: usize,
    noun: &TokenKey,
    adjective: &TokenKey,
    verb: &TokenKey,
) -> Result<(f64, f64, f64), ReportError> {
    let induction = induce_senses(corpus, space, noun, cluster)?;
    let adj_centroid = single_sense_centroid(corpus, space, adjective)?;
    let arguments = verb_arguments(corpus, space, verb)?;
    let subjects: Vec<Vec<f64>> = arguments.iter().map(|(s, _)| s.clone()).collect();
    let objects: Vec<Vec<f64>> = arguments.iter().map(|(_, o)| o.clone()).collect();
    let subject_mean = mean(&subjects);
    let object_mean = mean(&objects);

    // Work in the union of the participants' strongest coordinates so a
    // large corpus does not force full-basis density matrices.
    let mut participants: Vec<&[f64]> = vec![&adj_centroid, &subject_mean, &object_mean];
    participants.extend(induction.centroids.iter().map(Vec::as_slice));
    let coords = top_k_union(&participants, top_k);

    let ensemble = SenseEnsemble::new(
        induction
            .probabilities
            .iter()
            .zip(&induction.centroids)
            .map(|(&p, c)| (p, RealTensor::vector(&restrict(c, &coords))))
            .collect(),
    )?;
    let rho_noun = from_ensemble(&ensemble)?;
    let noun_entropy = rho_noun.von_neumann_entropy()?;

    let rho_adj = lift_pure(&RealTensor::vector(&restrict(&adj_centroid, &coords)))?;
    let modified = closed_adjective_noun(rho_adj.matrix(), rho_noun.matrix())?;
    let adjective_entropy = entropy_of(modified)?;

    let contexts: Vec<Vec<Vec<f64>>> = arguments
        .iter()
        .map(|(s, o)| vec![restrict(s, &coords), restrict(o, &coords)])
        .collect();
    let verb_matrix = sense_tensor(2, &contexts)?;
    let rho_obj = lift_pure(&RealTensor::vector(&restrict(&object_mean, &coords)))?;
    let restricted = closed_subject_relative_clause(rho_noun.matrix(), &verb_matrix, rho_obj.matrix())?;
    let clause_entropy = entropy_of(restricted)?;

    Ok((noun_entropy, adjective_entropy, clause_entropy))
}

/// Runs the full pipeline over the fixture nouns of `corpus`.
pub fn fixture_report(
    corpus: &Corpus,
    space_config: &SpaceConfig,
    cluster_config: &ClusterConfig,
    top_k: usize,
) -> Result<ReportTable, ReportError> {
    let space = build_space(corpus, space_config)?;
    let mut rows = Vec::new();
    for f in &FIXTURES {
        let (noun_entropy, adjective_entropy, clause_entropy) = noun_row(
            corpus,
            &space,
            cluster_config,
            top_k,
            &f.noun_key(),
            &f.adjective_key(),
            &f.verb_b_key(),
        )?;
        rows.push(ReportRow {
            noun: f.noun.to_string(),
            adjective: f.adjective_a.to_string(),
            verb: f.verb_b.to_string(),
            noun_entropy,
            adjective_entropy,
            clause_entropy,
        });
    }
    Ok(ReportTable { rows })
}

/// Density matrix of one word induced straight from a corpus, restricted
/// to its own strongest coordinates. Convenience for tests and the CLI.
pub fn induced_density(
    corpus: &Corpus,
    space: &VectorSpace,
    cluster: &ClusterConfig,
    top_k: usize,
    key: &TokenKey,
) -> Result<(DensityMatrix, Vec<usize>), ReportError> {
    let induction = induce_senses(corpus, space, key, cluster)?;
    let participants: Vec<&[f64]> = induction.centroids.iter().map(Vec::as_slice).collect();
    let coords = top_k_union(&participants, top_k);
    let ensemble = SenseEnsemble::new(
        induction
            .probabilities
            .iter()
            .zip(&induction.centroids)
            .map(|(&p, c)| (p, RealTensor::vector(&restrict(c, &coords))))
            .collect(),
    )?;
    Ok((from_ensemble(&ensemble)?, coords))
}
