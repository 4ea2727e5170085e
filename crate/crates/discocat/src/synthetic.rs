//! A deterministic synthetic corpus with five two-sense nouns.
//!
//! Each ambiguous noun owns two disjoint topic vocabularies: a dominant
//! sense A (24 occurrences, half of them right after a disambiguating
//! adjective) and a rarer sense B (8 occurrences). Support sentences give
//! the two verbs argument statistics of their own. The corpus is built so
//! that:
//!
//! - every planted occurrence has three or more topic content words in
//!   its sentence, which keeps cross-topic contexts dissimilar enough for
//!   the default merge threshold;
//! - in sense-B occurrences the ambiguous noun is separated from the verb
//!   by another noun, so verb argument extraction (nearest noun on either
//!   side) never feeds the mixed ambiguous-noun vector into the verb's
//!   argument statistics.
//!
//! Expected sense proportions are therefore 24:8, i.e. 0.75 and 0.25.

use crate::corpus::{Pos, TokenKey};

/// One ambiguous noun with its two topic vocabularies.
pub struct NounFixture {
    pub noun: &'static str,
    pub adjective_a: &'static str,
    pub verb_a: &'static str,
    pub nouns_a: [&'static str; 6],
    pub verb_b: &'static str,
    pub nouns_b: [&'static str; 6],
}

impl NounFixture {
    pub fn noun_key(&self) -> TokenKey {
        TokenKey::new(self.noun, Pos::Noun)
    }

    pub fn adjective_key(&self) -> TokenKey {
        TokenKey::new(self.adjective_a, Pos::Adjective)
    }

    pub fn verb_b_key(&self) -> TokenKey {
        TokenKey::new(self.verb_b, Pos::Verb)
    }
}

pub const SENSE_A_OCCURRENCES: usize = 24;
pub const SENSE_B_OCCURRENCES: usize = 8;
const A_SUPPORT: usize = 6;
const B_SUPPORT: usize = 12;

pub const FIXTURES: [NounFixture; 5] = [
    NounFixture {
        noun: "bank",
        adjective_a: "commercial",
        verb_a: "lend",
        nouns_a: ["loan", "vault", "teller", "deposit", "ledger", "cashier"],
        verb_b: "flood",
        nouns_b: ["levee", "meadow", "stream", "mud", "heron", "reed"],
    },
    NounFixture {
        noun: "bat",
        adjective_a: "nocturnal",
        verb_a: "roost",
        nouns_a: ["cave", "wing", "insect", "echo", "dusk", "colony"],
        verb_b: "swing",
        nouns_b: ["inning", "dugout", "umpire", "helmet", "bleacher", "mound"],
    },
    NounFixture {
        noun: "organ",
        adjective_a: "electric",
        verb_a: "resound",
        nouns_a: ["choir", "chapel", "hymn", "pedal", "pipe", "loft"],
        verb_b: "fail",
        nouns_b: ["patient", "surgeon", "tissue", "donor", "ward", "transplant"],
    },
    NounFixture {
        noun: "cell",
        adjective_a: "microscopic",
        verb_a: "divide",
        nouns_a: ["nucleus", "membrane", "protein", "microscope", "culture", "enzyme"],
        verb_b: "confine",
        nouns_b: ["inmate", "warden", "corridor", "gate", "cot", "yard"],
    },
    NounFixture {
        noun: "pitch",
        adjective_a: "perfect",
        verb_a: "tune",
        nouns_a: ["melody", "singer", "note", "scale", "chord", "octave"],
        verb_b: "host",
        nouns_b: ["match", "crowd", "turf", "goalpost", "referee", "whistle"],
    },
];

fn push_group(out: &mut String, f: &NounFixture, group: usize) {
    use std::fmt::Write as _;
    let w = f.noun;
    // A per-group pairing stride varies the cooccurrence statistics, so
    // each noun's entropies come out distinct rather than template-equal.
    let stride = 2 + group % 3;
    // Sense A: the ambiguous noun as subject of its A verb, adjective on
    // every second occurrence.
    for i in 0..SENSE_A_OCCURRENCES {
        let a = f.nouns_a[i % 6];
        let b = f.nouns_a[(i + stride) % 6];
        if i % 2 == 0 {
            writeln!(
                out,
                "the {}_J {w}_N {}_V the {a}_N near the {b}_N",
                f.adjective_a, f.verb_a
            )
            .expect("string write");
        } else {
            writeln!(out, "the {w}_N {}_V the {a}_N near the {b}_N", f.verb_a)
                .expect("string write");
        }
    }
    // Sense B: another noun sits between the ambiguous noun and the verb,
    // so argument extraction picks the topic noun, not the mixed one.
    for j in 0..SENSE_B_OCCURRENCES {
        let a = f.nouns_b[j % 6];
        let b = f.nouns_b[(j + stride) % 6];
        writeln!(out, "the {w}_N near the {a}_N {}_V the {b}_N", f.verb_b)
            .expect("string write");
    }
    // Support sentences flesh out each topic's internal cooccurrence.
    for k in 0..A_SUPPORT {
        let s = f.nouns_a[k % 6];
        let o = f.nouns_a[(k + 1) % 6];
        let extra = f.nouns_a[(k + 3) % 6];
        writeln!(out, "the {s}_N {}_V the {o}_N near the {extra}_N", f.verb_a)
            .expect("string write");
    }
    for m in 0..B_SUPPORT {
        let s = f.nouns_b[m % 6];
        let o = f.nouns_b[(m + 1) % 6];
        let extra = f.nouns_b[(m + 3) % 6];
        writeln!(out, "the {s}_N {}_V the {o}_N near the {extra}_N", f.verb_b)
            .expect("string write");
    }
}

/// The whole corpus, one sentence per line, deterministic byte for byte.
pub fn fixture_corpus() -> String {
    let mut out = String::new();
    for (g, f) in FIXTURES.iter().enumerate() {
        push_group(&mut out, f, g);
    }
    out
}

/// Planted sense labels for one ambiguous noun's occurrences in corpus
/// scan order: sense A first, then sense B.
pub fn planted_labels() -> Vec<usize> {
    let mut labels = vec![0; SENSE_A_OCCURRENCES];
    labels.extend(vec![1; SENSE_B_OCCURRENCES]);
    labels
}

/// Planted sense probabilities, largest first.
pub fn planted_probabilities() -> [f64; 2] {
    let total = (SENSE_A_OCCURRENCES + SENSE_B_OCCURRENCES) as f64;
    [SENSE_A_OCCURRENCES as f64 / total, SENSE_B_OCCURRENCES as f64 / total]
}
