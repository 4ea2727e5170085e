//! Plain-text file formats: TNSR1 (tensors), DMAT1 (square matrices),
//! SPACE1 (distributional spaces), SENSE1 (induced senses), LEX1 (lexica),
//! and flat key=value configs.
//!
//! Writers are deterministic down to the byte: fixed scientific notation
//! with 12 fractional digits, entries in key order, no trailing whitespace.
//! Rewriting the same data therefore yields an identical file.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use discocat_core::RealTensor;

use crate::corpus::TokenKey;
use crate::space::VectorSpace;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("expected `{expected}` header, found `{found}`")]
    WrongHeader { expected: &'static str, found: String },
    #[error("file is empty")]
    Empty,
    #[error("key `{key}` contains characters the format reserves")]
    UnserializableKey { key: String },
    #[error("tensor shape does not match its data")]
    ShapeMismatch,
}

fn bad(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Malformed { line: line + 1, message: message.into() }
}

fn fmt_value(x: f64) -> String {
    format!("{x:.12e}")
}

fn parse_value(text: &str, line: usize) -> Result<f64, FormatError> {
    text.parse::<f64>().map_err(|_| bad(line, format!("not a number: `{text}`")))
}

fn check_key(key: &TokenKey) -> Result<(), FormatError> {
    let reserved = |c: char| c.is_whitespace() || c == '|' || c == ':';
    if key.lemma.is_empty() || key.lemma.chars().any(reserved) {
        return Err(FormatError::UnserializableKey { key: key.to_string() });
    }
    Ok(())
}

// ---------------------------------------------------------------- TNSR1

/// `TNSR1 <rank>`, a shape line (blank for rank 0), then the row-major
/// values, whitespace-separated.
pub fn write_tensor(t: &RealTensor) -> String {
    let mut out = format!("TNSR1 {}\n", t.rank());
    let shape: Vec<String> = t.shape().iter().map(usize::to_string).collect();
    out.push_str(&shape.join(" "));
    out.push('\n');
    for &x in t.data() {
        out.push_str(&fmt_value(x));
        out.push('\n');
    }
    out
}

pub fn read_tensor(text: &str) -> Result<RealTensor, FormatError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(FormatError::Empty)?;
    let rank: usize = header
        .strip_prefix("TNSR1 ")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| FormatError::WrongHeader { expected: "TNSR1", found: header.to_string() })?;
    let shape_line = lines.next().ok_or_else(|| bad(1, "missing shape line"))?;
    let shape: Vec<usize> = shape_line
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| bad(1, format!("bad dimension `{s}`"))))
        .collect::<Result<_, _>>()?;
    if shape.len() != rank {
        return Err(bad(1, format!("rank {rank} with {} dimensions", shape.len())));
    }
    let mut data = Vec::new();
    for (i, line) in lines.enumerate() {
        for token in line.split_whitespace() {
            data.push(parse_value(token, i + 2)?);
        }
    }
    RealTensor::new(shape, data).map_err(|_| FormatError::ShapeMismatch)
}

// ---------------------------------------------------------------- DMAT1

/// `DMAT1 <d>`, then `d` lines of `d` values.
pub fn write_matrix(m: &RealTensor) -> Result<String, FormatError> {
    if m.rank() != 2 || m.dim(0) != m.dim(1) {
        return Err(FormatError::ShapeMismatch);
    }
    let d = m.dim(0);
    let mut out = format!("DMAT1 {d}\n");
    for i in 0..d {
        let row: Vec<String> = (0..d).map(|j| fmt_value(m.get(&[i, j]))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn read_matrix(text: &str) -> Result<RealTensor, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(FormatError::Empty)?;
    let d: usize = header
        .strip_prefix("DMAT1 ")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| FormatError::WrongHeader { expected: "DMAT1", found: header.to_string() })?;
    let mut data = Vec::with_capacity(d * d);
    for _ in 0..d {
        let (n, line) = lines.next().ok_or_else(|| bad(0, "matrix ends early"))?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|tok| parse_value(tok, n))
            .collect::<Result<_, _>>()?;
        if row.len() != d {
            return Err(bad(n, format!("row has {} entries, expected {d}", row.len())));
        }
        data.extend(row);
    }
    if let Some((n, line)) = lines.next() {
        if !line.trim().is_empty() {
            return Err(bad(n, "trailing content after matrix"));
        }
    }
    RealTensor::new(vec![d, d], data).map_err(|_| FormatError::ShapeMismatch)
}

// ---------------------------------------------------------------- SPACE1

/// `SPACE1 <basis-size>`, a basis line of `lemma|P` keys, then one sparse
/// row per target: `lemma|P<TAB>idx:weight ...`, zeros omitted.
pub fn write_space(space: &VectorSpace) -> Result<String, FormatError> {
    let mut out = format!("SPACE1 {}\n", space.dim());
    for key in space.basis() {
        check_key(key)?;
    }
    let basis: Vec<String> = space.basis().iter().map(TokenKey::to_string).collect();
    out.push_str(&basis.join(" "));
    out.push('\n');
    for key in space.targets() {
        check_key(key)?;
        let row = space.vector(key).expect("targets have vectors");
        write!(out, "{key}").expect("string write");
        let mut first = true;
        for (i, &w) in row.iter().enumerate() {
            if w != 0.0 {
                write!(out, "{}{}:{}", if first { "\t" } else { " " }, i, fmt_value(w))
                    .expect("string write");
                first = false;
            }
        }
        // Keep the separator even for all-zero rows so parsing is uniform.
        if first {
            out.push('\t');
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn read_space(text: &str) -> Result<VectorSpace, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(FormatError::Empty)?;
    let dim: usize = header
        .strip_prefix("SPACE1 ")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| FormatError::WrongHeader { expected: "SPACE1", found: header.to_string() })?;
    let (n, basis_line) = lines.next().ok_or_else(|| bad(0, "missing basis line"))?;
    let basis: Vec<TokenKey> = basis_line
        .split_whitespace()
        .map(|tok| TokenKey::parse(tok).ok_or_else(|| bad(n, format!("bad basis key `{tok}`"))))
        .collect::<Result<_, _>>()?;
    if basis.len() != dim {
        return Err(bad(n, format!("basis has {} keys, header says {dim}", basis.len())));
    }
    let mut vectors = BTreeMap::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (key_text, rest) = line
            .split_once('\t')
            .ok_or_else(|| bad(n, "target line is missing its tab separator"))?;
        let key = TokenKey::parse(key_text)
            .ok_or_else(|| bad(n, format!("bad target key `{key_text}`")))?;
        let mut row = vec![0.0; dim];
        for entry in rest.split_whitespace() {
            let (idx, value) = entry
                .split_once(':')
                .ok_or_else(|| bad(n, format!("bad sparse entry `{entry}`")))?;
            let i: usize =
                idx.parse().map_err(|_| bad(n, format!("bad coordinate `{idx}`")))?;
            if i >= dim {
                return Err(bad(n, format!("coordinate {i} outside basis of {dim}")));
            }
            row[i] = parse_value(value, n)?;
        }
        vectors.insert(key, row);
    }
    Ok(VectorSpace::new(basis, vectors))
}

// ---------------------------------------------------------------- SENSE1

/// One word's senses: probability-weighted centroid rows.
pub type WordSenses = Vec<(f64, Vec<f64>)>;

/// Senses of many words over a shared basis dimension.
pub type SenseFile = BTreeMap<TokenKey, WordSenses>;

/// `SENSE1 <dim>`, then per sense: `lemma|P<TAB>p<TAB>idx:val ...`. A
/// word's senses sit on consecutive lines.
pub fn write_senses(dim: usize, senses: &SenseFile) -> Result<String, FormatError> {
    let mut out = format!("SENSE1 {dim}\n");
    for (key, entries) in senses {
        check_key(key)?;
        for (p, vector) in entries {
            if vector.len() != dim {
                return Err(FormatError::ShapeMismatch);
            }
            write!(out, "{key}\t{}\t", fmt_value(*p)).expect("string write");
            let mut first = true;
            for (i, &x) in vector.iter().enumerate() {
                if x != 0.0 {
                    if !first {
                        out.push(' ');
                    }
                    write!(out, "{}:{}", i, fmt_value(x)).expect("string write");
                    first = false;
                }
            }
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn read_senses(text: &str) -> Result<(usize, SenseFile), FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(FormatError::Empty)?;
    let dim: usize = header
        .strip_prefix("SENSE1 ")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| FormatError::WrongHeader { expected: "SENSE1", found: header.to_string() })?;
    let mut senses: SenseFile = BTreeMap::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, '\t');
        let key_text = parts.next().expect("splitn yields at least one");
        let key = TokenKey::parse(key_text)
            .ok_or_else(|| bad(n, format!("bad sense key `{key_text}`")))?;
        let p_text = parts.next().ok_or_else(|| bad(n, "missing probability field"))?;
        let p = parse_value(p_text, n)?;
        let rest = parts.next().unwrap_or("");
        let mut vector = vec![0.0; dim];
        for entry in rest.split_whitespace() {
            let (idx, value) = entry
                .split_once(':')
                .ok_or_else(|| bad(n, format!("bad sparse entry `{entry}`")))?;
            let i: usize =
                idx.parse().map_err(|_| bad(n, format!("bad coordinate `{idx}`")))?;
            if i >= dim {
                return Err(bad(n, format!("coordinate {i} outside dimension {dim}")));
            }
            vector[i] = parse_value(value, n)?;
        }
        senses.entry(key).or_default().push((p, vector));
    }
    Ok((dim, senses))
}

// ---------------------------------------------------------------- LEX1

/// How a lexicon entry's payload file is to be interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PayloadKind {
    /// A TNSR1 tensor on single wires.
    Pure,
    /// A DMAT1 operator on doubled wires.
    Density,
    /// No payload; the word is purely structural.
    None,
}

/// Construction recipe named in a lexicon entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexTag {
    Given,
    AdjectiveDelta,
    VerbCopySubject,
    VerbCopyObject,
    RelPron,
}

impl LexTag {
    pub fn name(self) -> &'static str {
        match self {
            LexTag::Given => "given",
            LexTag::AdjectiveDelta => "adjective-delta",
            LexTag::VerbCopySubject => "verb-copy-subject",
            LexTag::VerbCopyObject => "verb-copy-object",
            LexTag::RelPron => "relpron",
        }
    }

    pub fn parse(text: &str) -> Option<LexTag> {
        match text {
            "given" => Some(LexTag::Given),
            "adjective-delta" => Some(LexTag::AdjectiveDelta),
            "verb-copy-subject" => Some(LexTag::VerbCopySubject),
            "verb-copy-object" => Some(LexTag::VerbCopyObject),
            "relpron" => Some(LexTag::RelPron),
            _ => None,
        }
    }
}

/// One lexicon line: surface word, pregroup type text, construction tag,
/// payload kind, payload path relative to the lexicon file.
#[derive(Clone, Debug, PartialEq)]
pub struct LexEntry {
    pub word: String,
    pub type_text: String,
    pub tag: LexTag,
    pub kind: PayloadKind,
    pub path: Option<String>,
}

/// `LEX1`, then `word<TAB>type<TAB>tag<TAB>kind<TAB>path-or-dash` lines.
/// `#` comments and blank lines are allowed.
pub fn write_lexicon(entries: &[LexEntry]) -> String {
    let mut out = String::from("LEX1\n");
    for e in entries {
        let kind = match e.kind {
            PayloadKind::Pure => "pure",
            PayloadKind::Density => "density",
            PayloadKind::None => "none",
        };
        let path = e.path.as_deref().unwrap_or("-");
        writeln!(out, "{}\t{}\t{}\t{}\t{}", e.word, e.type_text, e.tag.name(), kind, path)
            .expect("string write");
    }
    out
}

pub fn read_lexicon(text: &str) -> Result<Vec<LexEntry>, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(FormatError::Empty)?;
    if header.trim() != "LEX1" {
        return Err(FormatError::WrongHeader { expected: "LEX1", found: header.to_string() });
    }
    let mut entries = Vec::new();
    for (n, line) in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(bad(n, format!("expected 5 tab-separated fields, got {}", fields.len())));
        }
        let tag = LexTag::parse(fields[2])
            .ok_or_else(|| bad(n, format!("unknown construction tag `{}`", fields[2])))?;
        let kind = match fields[3] {
            "pure" => PayloadKind::Pure,
            "density" => PayloadKind::Density,
            "none" => PayloadKind::None,
            other => return Err(bad(n, format!("unknown payload kind `{other}`"))),
        };
        let path = match fields[4] {
            "-" => None,
            p => Some(p.to_string()),
        };
        if (kind == PayloadKind::None) != path.is_none() {
            return Err(bad(n, "payload kind and path disagree"));
        }
        entries.push(LexEntry {
            word: fields[0].to_string(),
            type_text: fields[1].to_string(),
            tag,
            kind,
            path,
        });
    }
    Ok(entries)
}

// ---------------------------------------------------------------- config

/// Flat `key=value` lines with `#` comments, order-insensitive.
pub fn read_key_values(text: &str) -> Result<BTreeMap<String, String>, FormatError> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| bad(n, format!("expected key=value, got `{trimmed}`")))?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Pos;

    #[test]
    fn tensor_round_trips_including_rank_zero() {
        let t = RealTensor::new(vec![2, 3], vec![1.0, -0.5, 0.0, 2.25, 1e-30, 3.0]).unwrap();
        let text = write_tensor(&t);
        assert_eq!(read_tensor(&text).unwrap(), t);

        let s = RealTensor::scalar(4.5);
        let text = write_tensor(&s);
        assert!(text.starts_with("TNSR1 0\n\n"));
        assert_eq!(read_tensor(&text).unwrap(), s);
    }

    #[test]
    fn matrix_round_trips_and_rejects_ragged_rows() {
        let m = RealTensor::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let text = write_matrix(&m).unwrap();
        assert_eq!(read_matrix(&text).unwrap(), m);
        assert!(read_matrix("DMAT1 2\n1 0 0\n0 1\n").is_err());
        assert!(read_matrix("TNSR1 2\n").is_err());
    }

    #[test]
    fn writers_are_idempotent_byte_for_byte() {
        let m = RealTensor::new(vec![2, 2], vec![1.0 / 3.0, 0.0, 0.0, 2.0 / 3.0]).unwrap();
        assert_eq!(write_matrix(&m).unwrap(), write_matrix(&m).unwrap());
        let t = RealTensor::vector(&[0.1, 0.2]);
        assert_eq!(write_tensor(&t), write_tensor(&t));
    }

    #[test]
    fn space_round_trips_sparsely() {
        let basis = vec![TokenKey::new("loan", Pos::Noun), TokenKey::new("mud", Pos::Noun)];
        let mut vectors = BTreeMap::new();
        vectors.insert(TokenKey::new("bank", Pos::Noun), vec![3.5, 0.0]);
        vectors.insert(TokenKey::new("empty", Pos::Noun), vec![0.0, 0.0]);
        // The leading coordinate is zero: the tab must still come before
        // the first entry actually written.
        vectors.insert(TokenKey::new("mud", Pos::Noun), vec![0.0, 1.25]);
        let space = VectorSpace::new(basis, vectors);
        let text = write_space(&space).unwrap();
        assert!(text.contains("bank|N\t0:3.500000000000e0"));
        assert!(text.contains("mud|N\t1:1.250000000000e0"));
        let back = read_space(&text).unwrap();
        assert_eq!(back, space);
    }

    #[test]
    fn senses_round_trip_with_multiple_senses_per_word() {
        let mut senses: SenseFile = BTreeMap::new();
        senses.insert(
            TokenKey::new("bank", Pos::Noun),
            vec![(0.75, vec![1.0, 0.0, 0.0]), (0.25, vec![0.0, 0.8, 0.6])],
        );
        let text = write_senses(3, &senses).unwrap();
        let (dim, back) = read_senses(&text).unwrap();
        assert_eq!(dim, 3);
        assert_eq!(back, senses);
    }

    #[test]
    fn lexicon_round_trips_and_validates_fields() {
        let entries = vec![
            LexEntry {
                word: "queen".to_string(),
                type_text: "n".to_string(),
                tag: LexTag::Given,
                kind: PayloadKind::Density,
                path: Some("queen.dmat".to_string()),
            },
            LexEntry {
                word: "who".to_string(),
                type_text: "n^r.n.s^l.n".to_string(),
                tag: LexTag::RelPron,
                kind: PayloadKind::None,
                path: None,
            },
        ];
        let text = write_lexicon(&entries);
        assert_eq!(read_lexicon(&text).unwrap(), entries);
        assert!(read_lexicon("LEX1\nword\tn\tgiven\tnone\tfile\n").is_err());
        assert!(read_lexicon("LEX1\nword\tn\tbogus\tpure\tf\n").is_err());
        assert!(read_lexicon("NOPE\n").is_err());
    }

    #[test]
    fn key_values_parse_with_comments_and_spacing() {
        let kv = read_key_values("# setup\nwindow = 5\ntau=0.8\n\n").unwrap();
        assert_eq!(kv["window"], "5");
        assert_eq!(kv["tau"], "0.8");
        assert!(read_key_values("no equals here\n").is_err());
    }

    #[test]
    fn reserved_characters_in_keys_are_rejected_on_write() {
        let basis = vec![TokenKey::new("a:b", Pos::Noun)];
        let mut vectors = BTreeMap::new();
        vectors.insert(TokenKey::new("a:b", Pos::Noun), vec![1.0]);
        let space = VectorSpace::new(basis, vectors);
        assert!(matches!(write_space(&space), Err(FormatError::UnserializableKey { .. })));
    }
}
