//! Property tests for the text formats: one write-read cycle is a
//! projection, after which files are a byte-stable fixed point. That is
//! the contract behind the CLI's idempotent re-runs.

use std::collections::BTreeMap;

use proptest::collection::{btree_map, vec};
use proptest::prelude::*;

use discocat::corpus::{Pos, TokenKey};
use discocat::formats::{
    read_lexicon, read_matrix, read_senses, read_space, read_tensor, write_lexicon, write_matrix,
    write_senses, write_space, write_tensor, LexEntry, LexTag, PayloadKind, SenseFile,
};
use discocat::space::VectorSpace;
use discocat_core::RealTensor;

fn value() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::ZERO
}

fn tensor() -> impl Strategy<Value = RealTensor> {
    vec(1..=4usize, 0..=3)
        .prop_flat_map(|shape| {
            let volume = shape.iter().product();
            (Just(shape), vec(value(), volume..=volume))
        })
        .prop_map(|(shape, data)| RealTensor::new(shape, data).expect("consistent volume"))
}

fn matrix() -> impl Strategy<Value = RealTensor> {
    (1..=5usize)
        .prop_flat_map(|d| (Just(d), vec(value(), d * d..=d * d)))
        .prop_map(|(d, data)| RealTensor::new(vec![d, d], data).expect("consistent volume"))
}

fn token_key() -> impl Strategy<Value = TokenKey> {
    ("[a-z]{1,8}", prop_oneof![
        Just(Pos::Noun),
        Just(Pos::Verb),
        Just(Pos::Adjective),
        Just(Pos::Adverb)
    ])
        .prop_map(|(lemma, pos)| TokenKey::new(&lemma, pos))
}

proptest! {
    #[test]
    fn tensor_files_are_byte_stable_after_one_cycle(t in tensor()) {
        let text = write_tensor(&t);
        let back = read_tensor(&text).expect("own output parses");
        prop_assert_eq!(back.shape(), t.shape());
        for (a, b) in back.data().iter().zip(t.data()) {
            // 13 significant digits: relative error stays below 1e-12.
            prop_assert!((a - b).abs() <= 1e-12 * b.abs());
        }
        prop_assert_eq!(write_tensor(&back), text);
        prop_assert_eq!(read_tensor(&write_tensor(&back)).unwrap(), back);
    }

    #[test]
    fn matrix_files_are_byte_stable_after_one_cycle(m in matrix()) {
        let text = write_matrix(&m).expect("square matrix writes");
        let back = read_matrix(&text).expect("own output parses");
        prop_assert_eq!(write_matrix(&back).unwrap(), text);
        prop_assert_eq!(read_matrix(&write_matrix(&back).unwrap()).unwrap(), back);
    }

    #[test]
    fn space_files_are_byte_stable_after_one_cycle(
        basis in vec(token_key(), 1..6),
        rows in btree_map(token_key(), vec(value(), 0..6), 0..5),
    ) {
        let dim = basis.len();
        let rows: BTreeMap<TokenKey, Vec<f64>> = rows
            .into_iter()
            .map(|(k, mut v)| {
                v.resize(dim, 0.0);
                (k, v)
            })
            .collect();
        let space = VectorSpace::new(dedup(basis), rows);
        let text = write_space(&space).expect("space writes");
        let back = read_space(&text).expect("own output parses");
        prop_assert_eq!(write_space(&back).unwrap(), text);
    }

    #[test]
    fn sense_files_are_byte_stable_after_one_cycle(
        senses in btree_map(
            token_key(),
            vec((0.0f64..1.0, vec(value(), 3..=3)), 1..3),
            0..4,
        ),
    ) {
        let senses: SenseFile = senses;
        let text = write_senses(3, &senses).expect("senses write");
        let (dim, back) = read_senses(&text).expect("own output parses");
        prop_assert_eq!(dim, 3);
        prop_assert_eq!(write_senses(3, &back).unwrap(), text);
    }

    #[test]
    fn lexicon_files_round_trip_exactly(words in vec("[a-z]{1,8}", 1..6)) {
        let entries: Vec<LexEntry> = words
            .iter()
            .enumerate()
            .map(|(i, w)| match i % 3 {
                0 => LexEntry {
                    word: w.clone(),
                    type_text: "n".to_string(),
                    tag: LexTag::Given,
                    kind: PayloadKind::Pure,
                    path: Some(format!("{w}.tnsr")),
                },
                1 => LexEntry {
                    word: w.clone(),
                    type_text: "n.n^l".to_string(),
                    tag: LexTag::AdjectiveDelta,
                    kind: PayloadKind::Density,
                    path: Some(format!("{w}.dmat")),
                },
                _ => LexEntry {
                    word: w.clone(),
                    type_text: "n^r.n.s^l.n".to_string(),
                    tag: LexTag::RelPron,
                    kind: PayloadKind::None,
                    path: None,
                },
            })
            .collect();
        let text = write_lexicon(&entries);
        let back = read_lexicon(&text).expect("own output parses");
        prop_assert_eq!(back, entries);
    }
}

fn dedup(keys: Vec<TokenKey>) -> Vec<TokenKey> {
    let mut seen = std::collections::BTreeSet::new();
    keys.into_iter().filter(|k| seen.insert(k.clone())).collect()
}

#[test]
fn malformed_inputs_error_instead_of_panicking() {
    assert!(read_tensor("").is_err());
    assert!(read_tensor("TNSR1 2\n2 2\n1 2 3\n").is_err(), "truncated data");
    assert!(read_tensor("BOGUS 1\n2\n1 2\n").is_err());
    assert!(read_matrix("DMAT1 2\n1 0\n0\n").is_err(), "ragged row");
    assert!(read_matrix("DMAT1 2\n1 0\n0 1\n0 0\n").is_err(), "trailing row");
    assert!(read_space("SPACE1 2\na|N\n").is_err(), "basis shorter than header");
    assert!(read_senses("SENSE1 x\n").is_err());
    assert!(read_lexicon("LEX1\nw\tn\tgiven\tpure\t-\n").is_err(), "pure without a path");
    assert!(read_lexicon("LEX1\nw\tn\trelpron\tnone\tw.tnsr\n").is_err(), "payload on relpron");
}
