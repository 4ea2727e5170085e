//! Truth-theoretic semantics over the Boolean semiring.
//!
//! Swapping the reals for `{0, 1}` with OR and AND turns the composition
//! machinery into relational model theory. Entities span the noun space,
//! the sentence space has two basis states (true and false), and a verb is
//! a relation: a rank-3 Boolean tensor linking subjects through a truth
//! value to objects. Individuals are basis vectors, groups are
//! superpositions, and an ambiguous word is a Boolean density: the OR of
//! its sense projections.
//!
//! Sentences compose through the same doubled diagrams as real-valued
//! densities and come out as operators on the truth space. Four operators
//! have readings:
//!
//! * `|t><t|`: definitely true.
//! * `|f><f|`: definitely false.
//! * the all-ones operator: a superposition, one individual under two
//!   descriptions.
//! * the identity `1_S`: a genuine ambiguity, distinct senses disagreeing.
//!
//! Anything else (in particular the zero operator, from predicating
//! something the model has no fact about) is reported as an error rather
//! than forced into a reading.
//!
//! [`RoyalCourt`] ships a tiny fixture: two musicians forming a band, a
//! monarch, a board game, and a country, with one verb. The word "queen"
//! names all three senses at once, and the fixture reproduces the signature
//! judgements: "queen rules" is ambiguous while "queen rules england" is
//! definitely true.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::compose::{compose_doubled, ComposeError, PhraseWord, SpaceAssignment};
use crate::pregroup::{PregroupGrammar, PregroupType};
use crate::semiring::{Boolean, Semiring};
use crate::tensor::BoolTensor;

/// Index of "true" in the sentence space.
pub const TRUE_IDX: usize = 0;
/// Index of "false" in the sentence space.
pub const FALSE_IDX: usize = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum RelError {
    /// Entity names must be nonempty and distinct.
    BadEntityList,
    /// A name is not in the model's entity list.
    UnknownEntity(String),
    /// A noun needs at least one entity, a density at least one sense.
    EmptyNoun,
    /// Operand shape does not match the model's spaces.
    BadShape,
    /// The sentence operator is none of the four readable values.
    UnreadableOperator,
    Compose(ComposeError),
}

impl core::fmt::Display for RelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RelError::BadEntityList => write!(f, "entity names must be nonempty and distinct"),
            RelError::UnknownEntity(name) => write!(f, "unknown entity: {name}"),
            RelError::EmptyNoun => write!(f, "noun needs at least one entity or sense"),
            RelError::BadShape => write!(f, "operand shape does not match the model"),
            RelError::UnreadableOperator => {
                write!(f, "sentence operator has no truth reading")
            }
            RelError::Compose(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RelError {}

impl From<ComposeError> for RelError {
    fn from(e: ComposeError) -> Self {
        RelError::Compose(e)
    }
}

/// The four readable sentence operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SentenceValue {
    /// `|t><t|`: pure truth.
    True,
    /// `|f><f|`: pure falsity.
    False,
    /// All-ones: a superposition rather than a mixture.
    Superposed,
    /// The identity on the truth space: senses genuinely disagree.
    Ambiguous,
}

impl core::fmt::Display for SentenceValue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SentenceValue::True => write!(f, "TRUE (pure)"),
            SentenceValue::False => write!(f, "FALSE (pure)"),
            SentenceValue::Superposed => write!(f, "SUPERPOSED"),
            SentenceValue::Ambiguous => write!(f, "AMBIGUOUS (1_S)"),
        }
    }
}

/// Reads a 2x2 Boolean sentence operator, if it is one of the four
/// recognised values.
pub fn classify_sentence_operator(op: &BoolTensor) -> Result<SentenceValue, RelError> {
    if op.shape() != [2, 2] {
        return Err(RelError::BadShape);
    }
    let tt = op.get(&[TRUE_IDX, TRUE_IDX]);
    let tf = op.get(&[TRUE_IDX, FALSE_IDX]);
    let ft = op.get(&[FALSE_IDX, TRUE_IDX]);
    let ff = op.get(&[FALSE_IDX, FALSE_IDX]);
    match (tt, tf, ft, ff) {
        (true, false, false, false) => Ok(SentenceValue::True),
        (false, false, false, true) => Ok(SentenceValue::False),
        (true, true, true, true) => Ok(SentenceValue::Superposed),
        (true, false, false, true) => Ok(SentenceValue::Ambiguous),
        _ => Err(RelError::UnreadableOperator),
    }
}

/// A relational model: named entities spanning the noun space and a
/// two-dimensional truth space, with verbs given extensionally as relation
/// tensors.
#[derive(Clone, Debug)]
pub struct TruthModel {
    grammar: PregroupGrammar,
    spaces: SpaceAssignment,
    entities: Vec<String>,
}

impl TruthModel {
    pub fn new(entities: &[&str]) -> Result<Self, RelError> {
        if entities.is_empty() {
            return Err(RelError::BadEntityList);
        }
        for (k, name) in entities.iter().enumerate() {
            if name.is_empty() || entities[..k].contains(name) {
                return Err(RelError::BadEntityList);
            }
        }
        let grammar = PregroupGrammar::english();
        let spaces = SpaceAssignment::new(vec![entities.len(), 2])
            .expect("entity list is nonempty");
        Ok(TruthModel {
            grammar,
            spaces,
            entities: entities.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn grammar(&self) -> &PregroupGrammar {
        &self.grammar
    }

    pub fn index_of(&self, name: &str) -> Result<usize, RelError> {
        self.entities
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| RelError::UnknownEntity(name.to_string()))
    }

    /// A noun vector: the superposition of the named entities.
    pub fn noun_vector(&self, names: &[&str]) -> Result<BoolTensor, RelError> {
        if names.is_empty() {
            return Err(RelError::EmptyNoun);
        }
        let mut v = BoolTensor::zeros(vec![self.entity_count()]);
        for name in names {
            v.set(&[self.index_of(name)?], true);
        }
        Ok(v)
    }

    /// A pure noun operator: the projection onto one superposition.
    pub fn noun_projection(&self, names: &[&str]) -> Result<BoolTensor, RelError> {
        let v = self.noun_vector(names)?;
        Ok(v.tensor_product(&v))
    }

    /// A Boolean density: the join of one projection per sense.
    pub fn noun_density(&self, senses: &[&[&str]]) -> Result<BoolTensor, RelError> {
        if senses.is_empty() {
            return Err(RelError::EmptyNoun);
        }
        let n = self.entity_count();
        let mut acc = BoolTensor::zeros(vec![n, n]);
        for sense in senses {
            let p = self.noun_projection(sense)?;
            for (a, b) in acc.data_mut().iter_mut().zip(p.data()) {
                *a = Boolean::add(*a, *b);
            }
        }
        Ok(acc)
    }

    /// The uniform noun operator, used to existentially close an unused
    /// argument wire.
    pub fn anything(&self) -> BoolTensor {
        let n = self.entity_count();
        BoolTensor::filled(vec![n, n], true)
    }

    /// A verb as a relation: each fact links a subject superposition
    /// through a truth value to an object superposition. The result is a
    /// rank-3 tensor on noun (x) sentence (x) noun.
    pub fn verb_from_facts(
        &self,
        facts: &[(&[&str], bool, &[&str])],
    ) -> Result<BoolTensor, RelError> {
        let n = self.entity_count();
        let mut r = BoolTensor::zeros(vec![n, 2, n]);
        for (subjects, truth, objects) in facts {
            let w = if *truth { TRUE_IDX } else { FALSE_IDX };
            let sv = self.noun_vector(subjects)?;
            let ov = self.noun_vector(objects)?;
            for i in 0..n {
                if !sv.get(&[i]) {
                    continue;
                }
                for j in 0..n {
                    if ov.get(&[j]) {
                        r.set(&[i, w, j], true);
                    }
                }
            }
        }
        Ok(r)
    }

    fn noun_type(&self) -> PregroupType {
        self.grammar.parse_type("n").expect("built-in type")
    }

    fn verb_type(&self) -> PregroupType {
        self.grammar.parse_type("n^r.s.n^l").expect("built-in type")
    }

    /// Evaluates subject-verb-object through the doubled diagram and reads
    /// off the truth operator. Subject and object are noun operators
    /// (`[n, n]`), the verb a relation (`[n, 2, n]`).
    pub fn evaluate_transitive(
        &self,
        subject: &BoolTensor,
        verb: &BoolTensor,
        object: &BoolTensor,
    ) -> Result<SentenceValue, RelError> {
        let n = self.entity_count();
        if subject.shape() != [n, n] || object.shape() != [n, n] || verb.shape() != [n, 2, n] {
            return Err(RelError::BadShape);
        }
        let words = [
            PhraseWord::given(self.noun_type(), subject.clone()),
            PhraseWord::given(self.verb_type(), verb.tensor_product(verb)),
            PhraseWord::given(self.noun_type(), object.clone()),
        ];
        let target = self.grammar.parse_type("s").expect("built-in type");
        let composed = compose_doubled::<Boolean>(&self.grammar, &self.spaces, &words, &target)?;
        classify_sentence_operator(&composed.tensor)
    }

    /// Evaluates subject-verb with the object wire deleted: the uniform
    /// operator stands in for "anything".
    pub fn evaluate_intransitive(
        &self,
        subject: &BoolTensor,
        verb: &BoolTensor,
    ) -> Result<SentenceValue, RelError> {
        self.evaluate_transitive(subject, verb, &self.anything())
    }
}

/// The shipped fixture: freddy and brian form a band; elisabeth is a
/// monarch; chess is a board game; the dummy entity `eps` closes facts that
/// have no object of their own.
///
/// Facts: the band rules (as musicians), chess does not rule, and elisabeth
/// rules england. The word "queen" is three-ways ambiguous between the
/// band, the monarch, and the chess piece.
#[derive(Clone, Debug)]
pub struct RoyalCourt {
    model: TruthModel,
    rule: BoolTensor,
    queen: BoolTensor,
}

impl RoyalCourt {
    pub fn new() -> Self {
        let model = TruthModel::new(&["freddy", "brian", "elisabeth", "chess", "england", "eps"])
            .expect("fixture entities are valid");
        let rule = model
            .verb_from_facts(&[
                (&["freddy", "brian"], true, &["eps"]),
                (&["chess"], false, &["eps"]),
                (&["elisabeth"], true, &["england"]),
            ])
            .expect("fixture facts are valid");
        let queen = model
            .noun_density(&[&["elisabeth"], &["freddy", "brian"], &["chess"]])
            .expect("fixture senses are valid");
        RoyalCourt { model, rule, queen }
    }

    pub fn model(&self) -> &TruthModel {
        &self.model
    }

    pub fn rule_verb(&self) -> &BoolTensor {
        &self.rule
    }

    pub fn queen_density(&self) -> &BoolTensor {
        &self.queen
    }

    /// "queen rules": ambiguous, because the senses disagree.
    pub fn queen_rules(&self) -> Result<SentenceValue, RelError> {
        self.model.evaluate_intransitive(&self.queen, &self.rule)
    }

    /// "queen rules england": only the monarch sense applies, and it holds.
    pub fn queen_rules_england(&self) -> Result<SentenceValue, RelError> {
        let england = self.model.noun_projection(&["england"])?;
        self.model.evaluate_transitive(&self.queen, &self.rule, &england)
    }
}

impl Default for RoyalCourt {
    fn default() -> Self {
        RoyalCourt::new()
    }
}
