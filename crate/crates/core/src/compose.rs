//! Grammar-driven composition of word meanings.
//!
//! A phrase is a list of typed words. Reducing the concatenated pregroup
//! types yields a pairing of atoms, and each pairing becomes a tensor
//! contraction: the phrase meaning is the wiring of all word tensors with
//! cups on the reduction pairs and open wires on the residual atoms.
//!
//! Words enter a phrase in one of two regimes.
//!
//! * **Pure**: each word is a single tensor on its type's space, and the
//!   result is again a tensor ([`compose_pure`]).
//! * **Doubled**: each word is an operator, carried as a tensor with one ket
//!   leg and one bra leg per atom. Every reduction pair contracts twice,
//!   once on each layer, and the result is an operator on the residual
//!   space ([`compose_doubled`]). Density matrices compose this way, as do
//!   Boolean truth-valued relations.
//!
//! Besides plain typed tensors ([`ConstructionTag::Given`]) a word can be a
//! Frobenius construction that manufactures its tensor from smaller data:
//! adjectives from a single vector by copying, transitive verbs from a
//! subject-object matrix by copying one argument into the sentence wire,
//! and relative pronouns from nothing at all. For those constructions the
//! doubled diagrams collapse to short closed forms (`closed_*` functions);
//! both routes are kept and must agree.

use alloc::vec;
use alloc::vec::Vec;

use crate::frobenius::{self, FrobeniusError};
use crate::pregroup::{PregroupError, PregroupGrammar, PregroupType, Reduction};
use crate::semiring::Semiring;
use crate::tensor::{apply_wiring, IndexWiring, RealTensor, Tensor, TensorError};

#[derive(Clone, Debug, PartialEq)]
pub enum ComposeError {
    /// A phrase needs at least one word.
    EmptyPhrase,
    /// This construction requires payload data and none was given.
    MissingData,
    /// This construction takes no payload data.
    UnexpectedData,
    /// Payload tensor shape does not fit the word type.
    BadDataShape,
    /// The word type does not have the arity the construction requires.
    BadTypeShape,
    /// Copying an argument into the sentence wire needs the sentence space
    /// to share the argument's dimension.
    CopyDimMismatch { argument: usize, sentence: usize },
    /// A basic type has no assigned dimension.
    UnknownBasic { base: usize },
    /// Space dimensions must be at least 1.
    ZeroDim,
    /// A merge plan must visit each operator exactly once.
    BadPlan,
    /// Adjacent operators in a merge chain have incompatible shapes.
    ChainMismatch,
    /// A doubled result must have matching ket and bra shapes.
    NotAnOperator,
    Reduction(PregroupError),
    Wiring(TensorError),
    Frobenius(FrobeniusError),
}

impl core::fmt::Display for ComposeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ComposeError::EmptyPhrase => write!(f, "phrase has no words"),
            ComposeError::MissingData => write!(f, "construction requires payload data"),
            ComposeError::UnexpectedData => write!(f, "construction takes no payload data"),
            ComposeError::BadDataShape => write!(f, "payload shape does not fit the word type"),
            ComposeError::BadTypeShape => {
                write!(f, "word type does not fit the construction")
            }
            ComposeError::CopyDimMismatch { argument, sentence } => write!(
                f,
                "copying needs matching dimensions, got argument {argument} and sentence {sentence}"
            ),
            ComposeError::UnknownBasic { base } => {
                write!(f, "basic type {base} has no assigned dimension")
            }
            ComposeError::ZeroDim => write!(f, "space dimensions must be at least 1"),
            ComposeError::BadPlan => write!(f, "merge plan must visit each operator exactly once"),
            ComposeError::ChainMismatch => {
                write!(f, "adjacent operators in the merge chain do not compose")
            }
            ComposeError::NotAnOperator => {
                write!(f, "doubled tensor does not have matching ket and bra shapes")
            }
            ComposeError::Reduction(e) => write!(f, "type reduction failed: {e}"),
            ComposeError::Wiring(e) => write!(f, "contraction failed: {e}"),
            ComposeError::Frobenius(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ComposeError {}

impl From<PregroupError> for ComposeError {
    fn from(e: PregroupError) -> Self {
        ComposeError::Reduction(e)
    }
}

impl From<TensorError> for ComposeError {
    fn from(e: TensorError) -> Self {
        ComposeError::Wiring(e)
    }
}

impl From<FrobeniusError> for ComposeError {
    fn from(e: FrobeniusError) -> Self {
        ComposeError::Frobenius(e)
    }
}

/// How word meanings are carried and merged during composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompositionMode {
    /// Single vectors and tensors on one wire layer.
    Pure,
    /// Density operators on doubled wires, composed by the doubled diagram.
    Density,
    /// Density operators with Frobenius constructions evaluated through
    /// their closed forms.
    DensityFrobenius,
    /// Density operators merged by operator composition in a given order.
    Noncommutative,
}

/// How a word's tensor is constructed from its payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionTag {
    /// The payload is the word's full tensor.
    Given,
    /// An adjective built by copying: pure payload is a vector on the noun
    /// space, doubled payload an operator on it.
    AdjectiveDelta,
    /// A transitive verb built from an argument matrix, with the subject
    /// copied into the sentence wire.
    VerbCopySubject,
    /// As above with the object copied into the sentence wire.
    VerbCopyObject,
    /// A relative pronoun: a basis spider across its noun wires and a
    /// uniform state on its sentence wires. No payload.
    RelPron,
}

/// Dimension assignment for the basic types of a grammar, indexed in step
/// with [`PregroupGrammar::basics`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceAssignment {
    dims: Vec<usize>,
}

impl SpaceAssignment {
    pub fn new(dims: Vec<usize>) -> Result<Self, ComposeError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(ComposeError::ZeroDim);
        }
        Ok(SpaceAssignment { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension of the space an atom lives in; adjoints do not change it.
    pub fn dim_of_base(&self, base: usize) -> Result<usize, ComposeError> {
        self.dims
            .get(base)
            .copied()
            .ok_or(ComposeError::UnknownBasic { base })
    }

    /// One dimension per atom of the type, in order.
    pub fn type_shape(&self, t: &PregroupType) -> Result<Vec<usize>, ComposeError> {
        t.atoms().iter().map(|a| self.dim_of_base(a.base)).collect()
    }
}

/// A typed word inside a phrase. The payload's meaning depends on the tag
/// and on whether the phrase is composed pure or doubled; see
/// [`expand_pure`] and [`expand_doubled`].
#[derive(Clone, Debug, PartialEq)]
pub struct PhraseWord<S: Semiring> {
    word_type: PregroupType,
    tag: ConstructionTag,
    data: Option<Tensor<S>>,
}

impl<S: Semiring> PhraseWord<S> {
    /// A word whose tensor is supplied directly.
    pub fn given(word_type: PregroupType, tensor: Tensor<S>) -> Self {
        PhraseWord { word_type, tag: ConstructionTag::Given, data: Some(tensor) }
    }

    /// An adjective built by copying from noun-space data.
    pub fn adjective_delta(word_type: PregroupType, data: Tensor<S>) -> Self {
        PhraseWord { word_type, tag: ConstructionTag::AdjectiveDelta, data: Some(data) }
    }

    /// A transitive verb built from an argument matrix, subject copied.
    pub fn verb_copy_subject(word_type: PregroupType, matrix: Tensor<S>) -> Self {
        PhraseWord { word_type, tag: ConstructionTag::VerbCopySubject, data: Some(matrix) }
    }

    /// A transitive verb built from an argument matrix, object copied.
    pub fn verb_copy_object(word_type: PregroupType, matrix: Tensor<S>) -> Self {
        PhraseWord { word_type, tag: ConstructionTag::VerbCopyObject, data: Some(matrix) }
    }

    /// A relative pronoun; purely structural.
    pub fn relative_pronoun(word_type: PregroupType) -> Self {
        PhraseWord { word_type, tag: ConstructionTag::RelPron, data: None }
    }

    pub fn word_type(&self) -> &PregroupType {
        &self.word_type
    }

    pub fn tag(&self) -> ConstructionTag {
        self.tag
    }

    pub fn data(&self) -> Option<&Tensor<S>> {
        self.data.as_ref()
    }
}

fn require_data<S: Semiring>(w: &PhraseWord<S>) -> Result<&Tensor<S>, ComposeError> {
    w.data.as_ref().ok_or(ComposeError::MissingData)
}

/// Shared layout checks for the copy-verb constructions. Returns
/// (argument dim, sentence dim).
fn copy_verb_dims<S: Semiring>(
    w: &PhraseWord<S>,
    spaces: &SpaceAssignment,
) -> Result<(usize, usize), ComposeError> {
    let atoms = w.word_type.atoms();
    if atoms.len() != 3 || atoms[0].base != atoms[2].base {
        return Err(ComposeError::BadTypeShape);
    }
    let n = spaces.dim_of_base(atoms[0].base)?;
    let s = spaces.dim_of_base(atoms[1].base)?;
    if s != n {
        return Err(ComposeError::CopyDimMismatch { argument: n, sentence: s });
    }
    Ok((n, s))
}

/// The pure spider tensor of a relative pronoun: one wire layer, entry one
/// exactly when all atoms sharing the first atom's base carry equal indices,
/// uniform over every other atom.
fn relpron_tensor<S: Semiring>(
    word_type: &PregroupType,
    spaces: &SpaceAssignment,
) -> Result<Tensor<S>, ComposeError> {
    let atoms = word_type.atoms();
    if atoms.len() < 2 {
        return Err(ComposeError::BadTypeShape);
    }
    let spider_base = atoms[0].base;
    let shape = spaces.type_shape(word_type)?;
    let mut t = Tensor::zeros(shape.clone());
    let mut idx = vec![0usize; shape.len()];
    loop {
        let mut spider_value: Option<usize> = None;
        let mut all_equal = true;
        for (k, atom) in atoms.iter().enumerate() {
            if atom.base == spider_base {
                match spider_value {
                    None => spider_value = Some(idx[k]),
                    Some(v) if v == idx[k] => {}
                    Some(_) => {
                        all_equal = false;
                        break;
                    }
                }
            }
        }
        if all_equal {
            t.set(&idx, S::one());
        }
        // Row-major odometer over the shape.
        let mut k = shape.len();
        loop {
            if k == 0 {
                return Ok(t);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Expands a word to its single-layer tensor, shaped by its type.
///
/// Payload conventions: `Given` carries the full tensor; `AdjectiveDelta` a
/// vector on the noun space; the copy verbs an argument matrix; `RelPron`
/// nothing.
pub fn expand_pure<S: Semiring>(
    w: &PhraseWord<S>,
    spaces: &SpaceAssignment,
) -> Result<Tensor<S>, ComposeError> {
    let shape = spaces.type_shape(&w.word_type)?;
    match w.tag {
        ConstructionTag::Given => {
            let t = require_data(w)?;
            if t.shape() != shape.as_slice() {
                return Err(ComposeError::BadDataShape);
            }
            Ok(t.clone())
        }
        ConstructionTag::AdjectiveDelta => {
            let atoms = w.word_type.atoms();
            if atoms.len() != 2 || atoms[0].base != atoms[1].base {
                return Err(ComposeError::BadTypeShape);
            }
            let v = require_data(w)?;
            if v.rank() != 1 || v.dim(0) != shape[0] {
                return Err(ComposeError::BadDataShape);
            }
            Ok(frobenius::delta(v)?)
        }
        ConstructionTag::VerbCopySubject | ConstructionTag::VerbCopyObject => {
            let (n, _s) = copy_verb_dims(w, spaces)?;
            let m = require_data(w)?;
            if m.rank() != 2 || m.dim(0) != n || m.dim(1) != n {
                return Err(ComposeError::BadDataShape);
            }
            let mut t = Tensor::zeros(vec![n, n, n]);
            for i in 0..n {
                for j in 0..n {
                    let x = m.get(&[i, j]);
                    match w.tag {
                        ConstructionTag::VerbCopySubject => t.set(&[i, i, j], x),
                        _ => t.set(&[i, j, j], x),
                    }
                }
            }
            Ok(t)
        }
        ConstructionTag::RelPron => {
            if w.data.is_some() {
                return Err(ComposeError::UnexpectedData);
            }
            relpron_tensor(&w.word_type, spaces)
        }
    }
}

/// Expands a word to its doubled tensor: ket legs for each atom followed by
/// bra legs for each atom.
///
/// Payload conventions: `Given` carries the full doubled tensor (an
/// operator on the type's space); `AdjectiveDelta` an operator on the noun
/// space; the copy verbs a *pure* argument matrix, doubled here; `RelPron`
/// nothing.
pub fn expand_doubled<S: Semiring>(
    w: &PhraseWord<S>,
    spaces: &SpaceAssignment,
) -> Result<Tensor<S>, ComposeError> {
    let shape = spaces.type_shape(&w.word_type)?;
    match w.tag {
        ConstructionTag::Given => {
            let t = require_data(w)?;
            let mut doubled = shape.clone();
            doubled.extend_from_slice(&shape);
            if t.shape() != doubled.as_slice() {
                return Err(ComposeError::BadDataShape);
            }
            Ok(t.clone())
        }
        ConstructionTag::AdjectiveDelta => {
            let atoms = w.word_type.atoms();
            if atoms.len() != 2 || atoms[0].base != atoms[1].base {
                return Err(ComposeError::BadTypeShape);
            }
            let n = shape[0];
            let rho = require_data(w)?;
            if rho.rank() != 2 || rho.dim(0) != n || rho.dim(1) != n {
                return Err(ComposeError::BadDataShape);
            }
            // Copying on both layers: D[i, w, i', w'] = rho[i, i'] when
            // w == i and w' == i'.
            let mut t = Tensor::zeros(vec![n, n, n, n]);
            for i in 0..n {
                for i2 in 0..n {
                    t.set(&[i, i, i2, i2], rho.get(&[i, i2]));
                }
            }
            Ok(t)
        }
        ConstructionTag::VerbCopySubject | ConstructionTag::VerbCopyObject | ConstructionTag::RelPron => {
            // Pure constructions double as two copies of the single-layer
            // tensor.
            let pure = expand_pure(w, spaces)?;
            Ok(pure.tensor_product(&pure))
        }
    }
}

/// Result of composing a phrase: the contracted tensor and the reduction
/// that drove it, for tracing which atoms were paired.
#[derive(Clone, Debug, PartialEq)]
pub struct Composition<S: Semiring> {
    pub tensor: Tensor<S>,
    pub reduction: Reduction,
}

fn reduce_phrase<S: Semiring>(
    grammar: &PregroupGrammar,
    words: &[PhraseWord<S>],
    target: &PregroupType,
) -> Result<Reduction, ComposeError> {
    if words.is_empty() {
        return Err(ComposeError::EmptyPhrase);
    }
    let types: Vec<PregroupType> = words.iter().map(|w| w.word_type.clone()).collect();
    Ok(grammar.reduce(&types, target)?)
}

/// Composes a phrase of single-layer tensors along its type reduction.
pub fn compose_pure<S: Semiring>(
    grammar: &PregroupGrammar,
    spaces: &SpaceAssignment,
    words: &[PhraseWord<S>],
    target: &PregroupType,
) -> Result<Composition<S>, ComposeError> {
    let reduction = reduce_phrase(grammar, words, target)?;
    let factors: Vec<Tensor<S>> = words
        .iter()
        .map(|w| expand_pure(w, spaces))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&Tensor<S>> = factors.iter().collect();

    let pairs: Vec<(usize, usize)> = reduction
        .contractions()
        .iter()
        .map(|c| (c.left, c.right))
        .collect();
    let output = reduction.residual_positions().to_vec();
    let wiring = IndexWiring::new(pairs, output)?;
    let tensor = apply_wiring(&wiring, &refs)?;
    Ok(Composition { tensor, reduction })
}

/// Composes a phrase of doubled tensors: every reduction pair contracts the
/// ket legs and the bra legs of its two atoms. The result carries the
/// residual ket legs followed by the residual bra legs.
pub fn compose_doubled<S: Semiring>(
    grammar: &PregroupGrammar,
    spaces: &SpaceAssignment,
    words: &[PhraseWord<S>],
    target: &PregroupType,
) -> Result<Composition<S>, ComposeError> {
    let reduction = reduce_phrase(grammar, words, target)?;
    let factors: Vec<Tensor<S>> = words
        .iter()
        .map(|w| expand_doubled(w, spaces))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&Tensor<S>> = factors.iter().collect();

    // Atom position -> (global ket index, global bra index). Word w with k
    // atoms occupies 2k global indices: kets first, bras second.
    let mut ket_of = Vec::with_capacity(reduction.total_atoms());
    let mut bra_of = Vec::with_capacity(reduction.total_atoms());
    let mut offset = 0usize;
    for w in words {
        let k = w.word_type.len();
        for a in 0..k {
            ket_of.push(offset + a);
            bra_of.push(offset + k + a);
        }
        offset += 2 * k;
    }

    let mut pairs = Vec::with_capacity(2 * reduction.contractions().len());
    for c in reduction.contractions() {
        pairs.push((ket_of[c.left], ket_of[c.right]));
        pairs.push((bra_of[c.left], bra_of[c.right]));
    }
    let mut output = Vec::with_capacity(2 * reduction.residual_positions().len());
    for &r in reduction.residual_positions() {
        output.push(ket_of[r]);
    }
    for &r in reduction.residual_positions() {
        output.push(bra_of[r]);
    }
    let wiring = IndexWiring::new(pairs, output)?;
    let tensor = apply_wiring(&wiring, &refs)?;
    Ok(Composition { tensor, reduction })
}

/// Reshapes a doubled result (ket legs then matching bra legs) into a square
/// matrix on the flattened residual space.
pub fn operator_matrix<S: Semiring>(t: &Tensor<S>) -> Result<Tensor<S>, ComposeError> {
    if !t.rank().is_multiple_of(2) {
        return Err(ComposeError::NotAnOperator);
    }
    let m = t.rank() / 2;
    let (kets, bras) = t.shape().split_at(m);
    if kets != bras {
        return Err(ComposeError::NotAnOperator);
    }
    let d: usize = kets.iter().product();
    Ok(t.clone().reshape(vec![d, d])?)
}

/// Sums outer products of argument pairs into a verb matrix: the corpus
/// estimate of a transitive verb's subject-object correlation.
pub fn build_verb_matrix(pairs: &[(RealTensor, RealTensor)]) -> Result<RealTensor, ComposeError> {
    let (s0, o0) = pairs.first().ok_or(ComposeError::EmptyPhrase)?;
    if s0.rank() != 1 || o0.rank() != 1 {
        return Err(ComposeError::BadDataShape);
    }
    let (n, m) = (s0.dim(0), o0.dim(0));
    let mut v = RealTensor::zeros(vec![n, m]);
    for (s, o) in pairs {
        if s.shape() != [n] || o.shape() != [m] {
            return Err(ComposeError::BadDataShape);
        }
        for i in 0..n {
            for j in 0..m {
                v.set(&[i, j], v.get(&[i, j]) + s.get(&[i]) * o.get(&[j]));
            }
        }
    }
    Ok(v)
}

// Closed forms for the doubled Frobenius constructions. Each one is the
// collapsed contraction of the corresponding diagram; the diagram route
// stays available through `compose_doubled` and the two must agree.

/// Adjective applied to a noun: entrywise product of the two operators.
pub fn closed_adjective_noun(
    rho_adj: &RealTensor,
    rho_noun: &RealTensor,
) -> Result<RealTensor, ComposeError> {
    Ok(frobenius::hadamard_double(rho_adj, rho_noun)?)
}

/// Copy-subject transitive sentence: the verb matrix conjugates the object
/// and the result meets the subject entrywise.
pub fn closed_verb_copy_subject(
    verb: &RealTensor,
    rho_subj: &RealTensor,
    rho_obj: &RealTensor,
) -> Result<RealTensor, ComposeError> {
    let vt = transpose(verb)?;
    let conjugated = frobenius::mu_noncomm(&frobenius::mu_noncomm(verb, rho_obj)?, &vt)?;
    Ok(frobenius::hadamard_double(&conjugated, rho_subj)?)
}

/// Copy-object transitive sentence: the transposed verb matrix conjugates
/// the subject and the result meets the object entrywise.
pub fn closed_verb_copy_object(
    verb: &RealTensor,
    rho_subj: &RealTensor,
    rho_obj: &RealTensor,
) -> Result<RealTensor, ComposeError> {
    let vt = transpose(verb)?;
    let conjugated = frobenius::mu_noncomm(&frobenius::mu_noncomm(&vt, rho_subj)?, verb)?;
    Ok(frobenius::hadamard_double(&conjugated, rho_obj)?)
}

/// Subject relative clause "noun that verbs object": the head noun meets the
/// verb's action on the object entrywise.
pub fn closed_subject_relative_clause(
    rho_noun: &RealTensor,
    verb: &RealTensor,
    rho_obj: &RealTensor,
) -> Result<RealTensor, ComposeError> {
    closed_verb_copy_subject(verb, rho_noun, rho_obj)
}

/// Object relative clause "noun that subject verbs": the head noun meets the
/// transposed verb's action on the subject entrywise.
pub fn closed_object_relative_clause(
    rho_noun: &RealTensor,
    verb: &RealTensor,
    rho_subj: &RealTensor,
) -> Result<RealTensor, ComposeError> {
    closed_verb_copy_object(verb, rho_subj, rho_noun)
}

fn transpose(m: &RealTensor) -> Result<RealTensor, ComposeError> {
    if m.rank() != 2 {
        return Err(ComposeError::BadDataShape);
    }
    Ok(m.clone().permute(&[1, 0])?)
}

/// Order in which [`compose_noncomm`] multiplies its operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMergePlan {
    order: Vec<usize>,
}

impl OperatorMergePlan {
    /// Multiply in the given order; must be a permutation of `0..n`.
    pub fn new(order: Vec<usize>) -> Result<Self, ComposeError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || seen[i] {
                return Err(ComposeError::BadPlan);
            }
            seen[i] = true;
        }
        Ok(OperatorMergePlan { order })
    }

    /// Left-to-right phrase order.
    pub fn chain(n: usize) -> Self {
        OperatorMergePlan { order: (0..n).collect() }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Merges operators by matrix product in plan order. Operator composition
/// is associative but order-sensitive; the plan makes the order explicit.
pub fn compose_noncomm(
    operators: &[RealTensor],
    plan: &OperatorMergePlan,
) -> Result<RealTensor, ComposeError> {
    if operators.is_empty() {
        return Err(ComposeError::EmptyPhrase);
    }
    if plan.order.len() != operators.len() {
        return Err(ComposeError::BadPlan);
    }
    let mut acc = operators[plan.order[0]].clone();
    if acc.rank() != 2 {
        return Err(ComposeError::BadDataShape);
    }
    for &i in &plan.order[1..] {
        let next = &operators[i];
        if next.rank() != 2 {
            return Err(ComposeError::BadDataShape);
        }
        if acc.dim(1) != next.dim(0) {
            return Err(ComposeError::ChainMismatch);
        }
        acc = frobenius::mu_noncomm(&acc, next)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{mu, mu_noncomm};
    use crate::pregroup::PregroupGrammar;
    use crate::semiring::Real;
    use crate::tensor::BoolTensor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn english() -> (PregroupGrammar, SpaceAssignment) {
        let g = PregroupGrammar::english();
        // n has dimension 3, s dimension 3 so copy constructions apply.
        let spaces = SpaceAssignment::new(vec![3, 3]).unwrap();
        (g, spaces)
    }

    fn rand_vec(rng: &mut ChaCha8Rng, d: usize) -> RealTensor {
        RealTensor::new(vec![d], (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    }

    fn rand_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> RealTensor {
        RealTensor::new(
            vec![r, c],
            (0..r * c).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap()
    }

    fn rand_sym(rng: &mut ChaCha8Rng, d: usize) -> RealTensor {
        let mut m = RealTensor::zeros(vec![d, d]);
        for i in 0..d {
            for j in i..d {
                let x = rng.random_range(-1.0..1.0);
                m.set(&[i, j], x);
                m.set(&[j, i], x);
            }
        }
        m
    }

    fn max_diff(a: &RealTensor, b: &RealTensor) -> f64 {
        assert_eq!(a.shape(), b.shape());
        a.data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn adjective_expansion_is_the_diagonal() {
        let (g, spaces) = english();
        let t = g.parse_type("n.n^l").unwrap();
        let v = RealTensor::vector(&[1.0, 2.0, 3.0]);
        let adj = PhraseWord::adjective_delta(t, v.clone());
        let expanded = expand_pure(&adj, &spaces).unwrap();
        assert_eq!(expanded, frobenius::delta(&v).unwrap());
    }

    #[test]
    fn copy_verb_expansions_place_the_sentence_wire() {
        let (g, spaces) = english();
        let t = g.parse_type("n^r.s.n^l").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = rand_mat(&mut rng, 3, 3);
        let subj = expand_pure(&PhraseWord::verb_copy_subject(t.clone(), v.clone()), &spaces).unwrap();
        let obj = expand_pure(&PhraseWord::verb_copy_object(t, v.clone()), &spaces).unwrap();
        for i in 0..3 {
            for w in 0..3 {
                for j in 0..3 {
                    let vs = if w == i { v.get(&[i, j]) } else { 0.0 };
                    let vo = if w == j { v.get(&[i, j]) } else { 0.0 };
                    assert_eq!(subj.get(&[i, w, j]), vs);
                    assert_eq!(obj.get(&[i, w, j]), vo);
                }
            }
        }
    }

    #[test]
    fn copy_verb_needs_matching_sentence_dimension() {
        let g = PregroupGrammar::english();
        let spaces = SpaceAssignment::new(vec![3, 2]).unwrap();
        let t = g.parse_type("n^r.s.n^l").unwrap();
        let word = PhraseWord::verb_copy_subject(t, RealTensor::zeros(vec![3, 3]));
        assert!(matches!(
            expand_pure(&word, &spaces),
            Err(ComposeError::CopyDimMismatch { argument: 3, sentence: 2 })
        ));
    }

    #[test]
    fn relative_pronoun_spiders_noun_wires_uniformly_over_sentence() {
        let g = PregroupGrammar::english();
        let spaces = SpaceAssignment::new(vec![2, 3]).unwrap();
        let subj = g.parse_type("n^r.n.s^l.n").unwrap();
        let t: RealTensor =
            relpron_tensor(&PhraseWord::<Real>::relative_pronoun(subj).word_type, &spaces).unwrap();
        assert_eq!(t.shape(), &[2, 2, 3, 2]);
        for a in 0..2 {
            for b in 0..2 {
                for s in 0..3 {
                    for c in 0..2 {
                        let want = if a == b && b == c { 1.0 } else { 0.0 };
                        assert_eq!(t.get(&[a, b, s, c]), want);
                    }
                }
            }
        }
        let obj = g.parse_type("n^r.n.n^l^l.s^l").unwrap();
        let t: RealTensor = relpron_tensor(&obj, &spaces).unwrap();
        assert_eq!(t.shape(), &[2, 2, 2, 3]);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for s in 0..3 {
                        let want = if a == b && b == c { 1.0 } else { 0.0 };
                        assert_eq!(t.get(&[a, b, c, s]), want);
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_validates_payloads() {
        let (g, spaces) = english();
        let nt = g.parse_type("n").unwrap();
        let missing = PhraseWord::<Real> {
            word_type: nt.clone(),
            tag: ConstructionTag::Given,
            data: None,
        };
        assert!(matches!(expand_pure(&missing, &spaces), Err(ComposeError::MissingData)));
        let bad = PhraseWord::given(nt.clone(), RealTensor::zeros(vec![4]));
        assert!(matches!(expand_pure(&bad, &spaces), Err(ComposeError::BadDataShape)));
        let relpron = PhraseWord::<Real> {
            word_type: g.parse_type("n^r.n.s^l.n").unwrap(),
            tag: ConstructionTag::RelPron,
            data: Some(RealTensor::zeros(vec![3])),
        };
        assert!(matches!(expand_pure(&relpron, &spaces), Err(ComposeError::UnexpectedData)));
    }

    #[test]
    fn pure_svo_matches_triple_loop() {
        let g = PregroupGrammar::english();
        let spaces = SpaceAssignment::new(vec![3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let subj = rand_vec(&mut rng, 3);
        let obj = rand_vec(&mut rng, 3);
        let verb = RealTensor::new(
            vec![3, 2, 3],
            (0..18).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        let words = [
            PhraseWord::given(g.parse_type("n").unwrap(), subj.clone()),
            PhraseWord::given(g.parse_type("n^r.s.n^l").unwrap(), verb.clone()),
            PhraseWord::given(g.parse_type("n").unwrap(), obj.clone()),
        ];
        let target = g.parse_type("s").unwrap();
        let got = compose_pure(&g, &spaces, &words, &target).unwrap();
        assert_eq!(got.tensor.shape(), &[2]);
        for w in 0..2 {
            let mut want = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    want += subj.get(&[i]) * verb.get(&[i, w, j]) * obj.get(&[j]);
                }
            }
            assert!((got.tensor.get(&[w]) - want).abs() < 1e-12);
        }
        assert_eq!(got.reduction.contractions().len(), 2);
    }

    #[test]
    fn pure_adjective_noun_is_the_pointwise_merge() {
        let (g, spaces) = english();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = rand_vec(&mut rng, 3);
        let n = rand_vec(&mut rng, 3);
        let words = [
            PhraseWord::adjective_delta(g.parse_type("n.n^l").unwrap(), a.clone()),
            PhraseWord::given(g.parse_type("n").unwrap(), n.clone()),
        ];
        let target = g.parse_type("n").unwrap();
        let got = compose_pure(&g, &spaces, &words, &target).unwrap();
        assert!(max_diff(&got.tensor, &mu(&a, &n).unwrap()) < 1e-12);
    }

    #[test]
    fn pure_copy_verbs_have_their_closed_forms() {
        let (g, spaces) = english();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = rand_vec(&mut rng, 3);
        let o = rand_vec(&mut rng, 3);
        let v = rand_mat(&mut rng, 3, 3);
        let target = g.parse_type("s").unwrap();

        let words = [
            PhraseWord::given(g.parse_type("n").unwrap(), s.clone()),
            PhraseWord::verb_copy_subject(g.parse_type("n^r.s.n^l").unwrap(), v.clone()),
            PhraseWord::given(g.parse_type("n").unwrap(), o.clone()),
        ];
        let got = compose_pure(&g, &spaces, &words, &target).unwrap();
        // Copy-subject: s meets V applied to o.
        let vo = mu_noncomm(&v, &o.clone().reshape(vec![3, 1]).unwrap()).unwrap();
        let want = mu(&s, &vo.reshape(vec![3]).unwrap()).unwrap();
        assert!(max_diff(&got.tensor, &want) < 1e-12);

        let words = [
            PhraseWord::given(g.parse_type("n").unwrap(), s.clone()),
            PhraseWord::verb_copy_object(g.parse_type("n^r.s.n^l").unwrap(), v.clone()),
            PhraseWord::given(g.parse_type("n").unwrap(), o.clone()),
        ];
        let got = compose_pure(&g, &spaces, &words, &target).unwrap();
        // Copy-object: V^T applied to s meets o.
        let vts = mu_noncomm(&transpose(&v).unwrap(), &s.clone().reshape(vec![3, 1]).unwrap()).unwrap();
        let want = mu(&vts.reshape(vec![3]).unwrap(), &o).unwrap();
        assert!(max_diff(&got.tensor, &want) < 1e-12);
    }

    #[test]
    fn pure_relative_clauses_collapse_to_closed_forms() {
        let g = PregroupGrammar::english();
        let spaces = SpaceAssignment::new(vec![3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let noun = rand_vec(&mut rng, 3);
        let arg = rand_vec(&mut rng, 3);
        let verb = RealTensor::new(
            vec![3, 2, 3],
            (0..18).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        // Deleting the sentence wire leaves the verb's argument matrix.
        let mut v_flat = RealTensor::zeros(vec![3, 3]);
        for i in 0..3 {
            for j in 0..3 {
                let x = (0..2).map(|w| verb.get(&[i, w, j])).sum::<f64>();
                v_flat.set(&[i, j], x);
            }
        }
        let nt = g.parse_type("n").unwrap();
        let vt = g.parse_type("n^r.s.n^l").unwrap();

        // "noun that verbs arg"
        let words = [
            PhraseWord::given(nt.clone(), noun.clone()),
            PhraseWord::relative_pronoun(g.parse_type("n^r.n.s^l.n").unwrap()),
            PhraseWord::given(vt.clone(), verb.clone()),
            PhraseWord::given(nt.clone(), arg.clone()),
        ];
        let got = compose_pure(&g, &spaces, &words, &nt).unwrap();
        let va = mu_noncomm(&v_flat, &arg.clone().reshape(vec![3, 1]).unwrap()).unwrap();
        let want = mu(&noun, &va.reshape(vec![3]).unwrap()).unwrap();
        assert!(max_diff(&got.tensor, &want) < 1e-12);

        // "noun that arg verbs"
        let words = [
            PhraseWord::given(nt.clone(), noun.clone()),
            PhraseWord::relative_pronoun(g.parse_type("n^r.n.n^l^l.s^l").unwrap()),
            PhraseWord::given(nt.clone(), arg.clone()),
            PhraseWord::given(vt, verb.clone()),
        ];
        let got = compose_pure(&g, &spaces, &words, &nt).unwrap();
        let vta = mu_noncomm(&transpose(&v_flat).unwrap(), &arg.clone().reshape(vec![3, 1]).unwrap())
            .unwrap();
        let want = mu(&noun, &vta.reshape(vec![3]).unwrap()).unwrap();
        assert!(max_diff(&got.tensor, &want) < 1e-12);
    }

    #[test]
    fn doubling_pure_words_doubles_the_composition() {
        // Composing doubled pure states equals doubling the pure
        // composition: the doubled diagram is the pure diagram applied to
        // each layer.
        let g = PregroupGrammar::english();
        let spaces = SpaceAssignment::new(vec![3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let subj = rand_vec(&mut rng, 3);
        let obj = rand_vec(&mut rng, 3);
        let verb = RealTensor::new(
            vec![3, 2, 3],
            (0..18).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        let nt = g.parse_type("n").unwrap();
        let vt = g.parse_type("n^r.s.n^l").unwrap();
        let st = g.parse_type("s").unwrap();

        let pure_words = [
            PhraseWord::given(nt.clone(), subj.clone()),
            PhraseWord::given(vt.clone(), verb.clone()),
            PhraseWord::given(nt.clone(), obj.clone()),
        ];
        let pure = compose_pure(&g, &spaces, &pure_words, &st).unwrap().tensor;

        let doubled_words = [
            PhraseWord::given(nt.clone(), subj.tensor_product(&subj)),
            PhraseWord::given(vt, verb.tensor_product(&verb)),
            PhraseWord::given(nt, obj.tensor_product(&obj)),
        ];
        let doubled = compose_doubled(&g, &spaces, &doubled_words, &st).unwrap().tensor;
        assert!(max_diff(&doubled, &pure.tensor_product(&pure)) < 1e-12);
    }

    #[test]
    fn doubled_composition_is_linear_in_each_word() {
        let (g, spaces) = english();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let nt = g.parse_type("n").unwrap();
        let at = g.parse_type("n.n^l").unwrap();
        let rho_n = rand_sym(&mut rng, 3);
        let rho_a1 = rand_sym(&mut rng, 3);
        let rho_a2 = rand_sym(&mut rng, 3);
        let mix = {
            let mut m = RealTensor::zeros(vec![3, 3]);
            for i in 0..9 {
                m.data_mut()[i] = 0.3 * rho_a1.data()[i] + 0.7 * rho_a2.data()[i];
            }
            m
        };
        let run = |rho_a: &RealTensor| {
            let words = [
                PhraseWord::adjective_delta(at.clone(), rho_a.clone()),
                PhraseWord::given(nt.clone(), rho_n.clone().reshape(vec![3, 3]).unwrap()),
            ];
            compose_doubled(&g, &spaces, &words, &nt).unwrap().tensor
        };
        let lhs = run(&mix);
        let r1 = run(&rho_a1);
        let r2 = run(&rho_a2);
        let mut rhs = RealTensor::zeros(vec![3, 3]);
        for i in 0..9 {
            rhs.data_mut()[i] = 0.3 * r1.data()[i] + 0.7 * r2.data()[i];
        }
        assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn doubled_adjective_noun_matches_closed_form() {
        let (g, spaces) = english();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let rho_a = rand_sym(&mut rng, 3);
        let rho_n = rand_sym(&mut rng, 3);
        let words = [
            PhraseWord::adjective_delta(g.parse_type("n.n^l").unwrap(), rho_a.clone()),
            PhraseWord::given(g.parse_type("n").unwrap(), rho_n.clone()),
        ];
        let nt = g.parse_type("n").unwrap();
        let diagram = compose_doubled(&g, &spaces, &words, &nt).unwrap().tensor;
        let closed = closed_adjective_noun(&rho_a, &rho_n).unwrap();
        assert!(max_diff(&operator_matrix(&diagram).unwrap(), &closed) < 1e-12);
    }

    #[test]
    fn doubled_copy_verbs_match_closed_forms() {
        let (g, spaces) = english();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rho_s = rand_sym(&mut rng, 3);
        let rho_o = rand_sym(&mut rng, 3);
        let v = rand_mat(&mut rng, 3, 3);
        let nt = g.parse_type("n").unwrap();
        let vt = g.parse_type("n^r.s.n^l").unwrap();
        let st = g.parse_type("s").unwrap();

        let words = [
            PhraseWord::given(nt.clone(), rho_s.clone()),
            PhraseWord::verb_copy_subject(vt.clone(), v.clone()),
            PhraseWord::given(nt.clone(), rho_o.clone()),
        ];
        let diagram = compose_doubled(&g, &spaces, &words, &st).unwrap().tensor;
        let closed = closed_verb_copy_subject(&v, &rho_s, &rho_o).unwrap();
        assert!(max_diff(&operator_matrix(&diagram).unwrap(), &closed) < 1e-12);

        let words = [
            PhraseWord::given(nt.clone(), rho_s.clone()),
            PhraseWord::verb_copy_object(vt, v.clone()),
            PhraseWord::given(nt, rho_o.clone()),
        ];
        let diagram = compose_doubled(&g, &spaces, &words, &st).unwrap().tensor;
        let closed = closed_verb_copy_object(&v, &rho_s, &rho_o).unwrap();
        assert!(max_diff(&operator_matrix(&diagram).unwrap(), &closed) < 1e-12);
    }

    #[test]
    fn doubled_relative_clauses_match_closed_forms() {
        let g = PregroupGrammar::english();
        let spaces = SpaceAssignment::new(vec![3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let rho_noun = rand_sym(&mut rng, 3);
        let rho_arg = rand_sym(&mut rng, 3);
        let verb = RealTensor::new(
            vec![3, 2, 3],
            (0..18).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        let mut v_flat = RealTensor::zeros(vec![3, 3]);
        for i in 0..3 {
            for j in 0..3 {
                v_flat.set(&[i, j], (0..2).map(|w| verb.get(&[i, w, j])).sum());
            }
        }
        let nt = g.parse_type("n").unwrap();
        let vt = g.parse_type("n^r.s.n^l").unwrap();

        let words = [
            PhraseWord::given(nt.clone(), rho_noun.clone()),
            PhraseWord::relative_pronoun(g.parse_type("n^r.n.s^l.n").unwrap()),
            PhraseWord::given(vt.clone(), verb.tensor_product(&verb)),
            PhraseWord::given(nt.clone(), rho_arg.clone()),
        ];
        let diagram = compose_doubled(&g, &spaces, &words, &nt).unwrap().tensor;
        let closed = closed_subject_relative_clause(&rho_noun, &v_flat, &rho_arg).unwrap();
        assert!(max_diff(&operator_matrix(&diagram).unwrap(), &closed) < 1e-10);

        let words = [
            PhraseWord::given(nt.clone(), rho_noun.clone()),
            PhraseWord::relative_pronoun(g.parse_type("n^r.n.n^l^l.s^l").unwrap()),
            PhraseWord::given(nt.clone(), rho_arg.clone()),
            PhraseWord::given(vt, verb.tensor_product(&verb)),
        ];
        let diagram = compose_doubled(&g, &spaces, &words, &nt).unwrap().tensor;
        let closed = closed_object_relative_clause(&rho_noun, &v_flat, &rho_arg).unwrap();
        assert!(max_diff(&operator_matrix(&diagram).unwrap(), &closed) < 1e-10);
    }

    #[test]
    fn boolean_doubled_composition_runs_relations() {
        // Boolean subject-verb-object: truth iff the verb relation links
        // the subject and object basis states on both layers.
        let g = PregroupGrammar::english();
        let spaces = SpaceAssignment::new(vec![2, 1]).unwrap();
        let nt = g.parse_type("n").unwrap();
        let vt = g.parse_type("n^r.s.n^l").unwrap();
        let st = g.parse_type("s").unwrap();
        // Relation: 0 relates to 1 only.
        let mut verb = BoolTensor::zeros(vec![2, 1, 2]);
        verb.set(&[0, 0, 1], true);
        let doubled_verb = verb.tensor_product(&verb);
        let e = |i: usize| {
            let mut v = BoolTensor::zeros(vec![2]);
            v.set(&[i], true);
            v.tensor_product(&v)
        };
        for (s, o, want) in [(0, 1, true), (0, 0, false), (1, 1, false)] {
            let words = [
                PhraseWord::given(nt.clone(), e(s)),
                PhraseWord::given(vt.clone(), doubled_verb.clone()),
                PhraseWord::given(nt.clone(), e(o)),
            ];
            let got = compose_doubled(&g, &spaces, &words, &st).unwrap().tensor;
            assert_eq!(got.get(&[0, 0]), want, "s={s} o={o}");
        }
    }

    #[test]
    fn verb_matrix_sums_argument_outer_products() {
        let pairs = vec![
            (RealTensor::vector(&[1.0, 0.0]), RealTensor::vector(&[0.0, 2.0])),
            (RealTensor::vector(&[0.0, 1.0]), RealTensor::vector(&[3.0, 0.0])),
        ];
        let v = build_verb_matrix(&pairs).unwrap();
        assert_eq!(v.data(), &[0.0, 2.0, 3.0, 0.0]);
        assert!(matches!(build_verb_matrix(&[]), Err(ComposeError::EmptyPhrase)));
    }

    #[test]
    fn merge_plans_validate_and_order_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = rand_mat(&mut rng, 2, 3);
        let b = rand_mat(&mut rng, 3, 3);
        let c = rand_mat(&mut rng, 3, 4);
        let ops = [a.clone(), b.clone(), c.clone()];
        let chained = compose_noncomm(&ops, &OperatorMergePlan::chain(3)).unwrap();
        let want = mu_noncomm(&mu_noncomm(&a, &b).unwrap(), &c).unwrap();
        assert!(max_diff(&chained, &want) < 1e-12);
        // Same chain, associated differently.
        let want2 = mu_noncomm(&a, &mu_noncomm(&b, &c).unwrap()).unwrap();
        assert!(max_diff(&chained, &want2) < 1e-12);

        assert!(matches!(OperatorMergePlan::new(vec![0, 0]), Err(ComposeError::BadPlan)));
        assert!(matches!(OperatorMergePlan::new(vec![0, 2]), Err(ComposeError::BadPlan)));
        let reordered = OperatorMergePlan::new(vec![1, 0]).unwrap();
        let sq = [rand_mat(&mut rng, 2, 2), rand_mat(&mut rng, 2, 2)];
        let got = compose_noncomm(&sq, &reordered).unwrap();
        let want = mu_noncomm(&sq[1], &sq[0]).unwrap();
        assert!(max_diff(&got, &want) < 1e-12);
        assert!(matches!(
            compose_noncomm(&[c, a], &OperatorMergePlan::chain(2)),
            Err(ComposeError::ChainMismatch)
        ));
    }

    #[test]
    fn noncommutative_merge_agrees_with_the_algebra() {
        use crate::frobenius::{FrobeniusAlgebra, FrobeniusKind};
        let alg = FrobeniusAlgebra::new(FrobeniusKind::OperatorComposition, 2).unwrap();
        let maps = alg.maps::<Real>();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let p = rand_mat(&mut rng, 2, 2);
        let q = rand_mat(&mut rng, 2, 2);
        let via_alg = maps
            .apply_mul(
                &p.clone().reshape(vec![4]).unwrap(),
                &q.clone().reshape(vec![4]).unwrap(),
            )
            .unwrap();
        let via_plan = compose_noncomm(&[p, q], &OperatorMergePlan::chain(2))
            .unwrap()
            .reshape(vec![4])
            .unwrap();
        assert!(max_diff(&via_alg, &via_plan) < 1e-12);
    }

    #[test]
    fn failed_reductions_surface_the_type_error() {
        let (g, spaces) = english();
        let nt = g.parse_type("n").unwrap();
        let st = g.parse_type("s").unwrap();
        let words = [
            PhraseWord::given(nt.clone(), RealTensor::vector(&[1.0, 0.0, 0.0])),
            PhraseWord::given(nt, RealTensor::vector(&[0.0, 1.0, 0.0])),
        ];
        assert!(matches!(
            compose_pure(&g, &spaces, &words, &st),
            Err(ComposeError::Reduction(PregroupError::NoReduction { .. }))
        ));
        assert!(matches!(
            compose_pure::<Real>(&g, &spaces, &[], &st),
            Err(ComposeError::EmptyPhrase)
        ));
    }

    #[test]
    fn operator_matrix_requires_paired_legs() {
        let t = RealTensor::zeros(vec![2, 3, 2, 3]);
        assert_eq!(operator_matrix(&t).unwrap().shape(), &[6, 6]);
        assert!(matches!(
            operator_matrix(&RealTensor::zeros(vec![2, 3, 2])),
            Err(ComposeError::NotAnOperator)
        ));
        assert!(matches!(
            operator_matrix(&RealTensor::zeros(vec![2, 3])),
            Err(ComposeError::NotAnOperator)
        ));
    }
}
