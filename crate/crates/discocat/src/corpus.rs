//! Corpus text: one sentence per line, tokens separated by whitespace.
//!
//! A token is either a tagged content word `lemma_P` with `P` one of `N`
//! (noun), `V` (verb), `J` (adjective), `R` (adverb), or raw text. Raw
//! tokens and stop-listed lemmas still occupy window positions; they just
//! never receive counts or vectors of their own.

use std::collections::BTreeSet;
use std::fmt;

/// Content-word part of speech.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Pos {
    pub fn letter(self) -> char {
        match self {
            Pos::Noun => 'N',
            Pos::Verb => 'V',
            Pos::Adjective => 'J',
            Pos::Adverb => 'R',
        }
    }

    pub fn from_letter(c: char) -> Option<Pos> {
        match c {
            'N' => Some(Pos::Noun),
            'V' => Some(Pos::Verb),
            'J' => Some(Pos::Adjective),
            'R' => Some(Pos::Adverb),
            _ => None,
        }
    }
}

/// Identity of a content word: lemma plus part of speech. Serialized as
/// `lemma|P` in space and sense files.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenKey {
    pub lemma: String,
    pub pos: Pos,
}

impl TokenKey {
    pub fn new(lemma: &str, pos: Pos) -> Self {
        TokenKey { lemma: lemma.to_string(), pos }
    }

    /// Parses the `lemma|P` serialization used by the file formats.
    pub fn parse(text: &str) -> Option<TokenKey> {
        let (lemma, tag) = text.rsplit_once('|')?;
        if lemma.is_empty() {
            return None;
        }
        let mut chars = tag.chars();
        let pos = Pos::from_letter(chars.next()?)?;
        if chars.next().is_some() {
            return None;
        }
        Some(TokenKey::new(lemma, pos))
    }
}

impl fmt::Display for TokenKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.lemma, self.pos.letter())
    }
}

/// One corpus token. Raw covers untagged words and unknown tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Tagged(TokenKey),
    Raw(String),
}

impl Token {
    pub fn parse(text: &str) -> Token {
        if let Some((lemma, tag)) = text.rsplit_once('_') {
            if !lemma.is_empty() && tag.len() == 1 {
                if let Some(pos) = Pos::from_letter(tag.chars().next().expect("len checked")) {
                    return Token::Tagged(TokenKey::new(lemma, pos));
                }
            }
        }
        Token::Raw(text.to_string())
    }

    pub fn key(&self) -> Option<&TokenKey> {
        match self {
            Token::Tagged(k) => Some(k),
            Token::Raw(_) => None,
        }
    }
}

/// A parsed corpus: sentences of tokens, in file order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Vec<Token>>,
}

impl Corpus {
    /// Parses sentence-per-line text. Blank lines are skipped.
    pub fn parse(text: &str) -> Corpus {
        let sentences = text
            .lines()
            .filter(|line| !line.trim().is_empty())
            .map(|line| line.split_whitespace().map(Token::parse).collect())
            .collect();
        Corpus { sentences }
    }

    pub fn sentences(&self) -> &[Vec<Token>] {
        &self.sentences
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Positions of every occurrence of `key`, in scan order.
    pub fn occurrences(&self, key: &TokenKey) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (s, sentence) in self.sentences.iter().enumerate() {
            for (p, token) in sentence.iter().enumerate() {
                if token.key() == Some(key) {
                    out.push((s, p));
                }
            }
        }
        out
    }
}

/// Lemmas too grammaticalized to describe a topic; they keep their window
/// positions but never become targets or basis words.
pub const DEFAULT_STOP_WORDS: &[&str] = &[
    "also", "always", "be", "come", "do", "even", "get", "give", "go", "have", "just", "know",
    "let", "make", "mean", "much", "never", "often", "only", "put", "quite", "rather", "really",
    "say", "see", "so", "something", "still", "take", "tell", "thing", "too", "use", "very",
    "want",
];

/// The default stop list as a set.
pub fn default_stop_set() -> BTreeSet<String> {
    DEFAULT_STOP_WORDS.iter().map(|w| w.to_string()).collect()
}

/// Parses a stop-list file: one lemma per line, `#` comments allowed.
pub fn parse_stop_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(str::to_string)
        .collect()
}
