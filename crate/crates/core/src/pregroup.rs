//! Pregroup types, adjoints, and grammatical reduction.
//!
//! A pregroup grammar assigns every word a type: a sequence of atomic types,
//! each an iterated left or right adjoint of a basic type. We write the basic
//! type with its adjoint order, so `n` is `(n, 0)`, `n^l` is `(n, -1)`,
//! `n^r` is `(n, +1)`, and `n^l^l` is `(n, -2)`. A transitive verb in the
//! `{n, s}` grammar gets `n^r.s.n^l`: it wants a noun on its left, a noun on
//! its right, and yields a sentence.
//!
//! Reduction cancels adjacent atoms `(b, z).(b, z+1)`; a sentence is
//! grammatical when repeated cancellation leaves exactly the target type.
//! [`PregroupGrammar::reduce`] performs contraction-only reduction with a
//! greedy stack: each incoming atom either cancels the top of the stack or is
//! pushed. The matched pairs are automatically non-crossing, which is what
//! lets them be read as planar caps wiring word tensors together.
//!
//! ```
//! use discocat_core::pregroup::PregroupGrammar;
//!
//! let g = PregroupGrammar::english();
//! let types = [
//!     g.parse_type("n").unwrap(),
//!     g.parse_type("n^r.s.n^l").unwrap(),
//!     g.parse_type("n").unwrap(),
//! ];
//! let s = g.parse_type("s").unwrap();
//! let r = g.reduce(&types, &s).unwrap();
//! assert_eq!(r.contractions().len(), 2);
//! assert_eq!(r.residual_positions(), &[2]);
//! ```

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

/// Which adjoint: left decrements the adjoint order, right increments it.
///
/// Doubles as the direction label on a contraction: a pair `(b, z).(b, z+1)`
/// with `z >= 0` is a right cap (`p.p^r`), with `z < 0` a left cap
/// (`p^l.p`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A basic type raised to an iterated adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AtomicType {
    /// Index into the grammar's basic-type list.
    pub base: usize,
    /// 0 for the plain type, negative for left adjoints, positive for right.
    pub adjoint_order: i32,
}

impl AtomicType {
    pub fn new(base: usize, adjoint_order: i32) -> Self {
        AtomicType { base, adjoint_order }
    }
}

/// A (possibly empty) sequence of atomic types. The empty sequence is the
/// pregroup unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PregroupType {
    atoms: Vec<AtomicType>,
}

impl PregroupType {
    pub fn unit() -> Self {
        PregroupType { atoms: Vec::new() }
    }

    pub fn from_atoms(atoms: Vec<AtomicType>) -> Self {
        PregroupType { atoms }
    }

    /// Plain basic type `(base, 0)`.
    pub fn basic(base: usize) -> Self {
        PregroupType { atoms: vec![AtomicType::new(base, 0)] }
    }

    pub fn atoms(&self) -> &[AtomicType] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Concatenation (the pregroup monoid operation).
    pub fn concat(&self, other: &PregroupType) -> PregroupType {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        PregroupType { atoms }
    }

    /// The left or right adjoint: reverses the sequence and shifts every
    /// adjoint order by one. `adjoint(adjoint(t, Left), Right)` is `t` again.
    pub fn adjoint(&self, side: Side) -> PregroupType {
        let delta = match side {
            Side::Left => -1,
            Side::Right => 1,
        };
        PregroupType {
            atoms: self
                .atoms
                .iter()
                .rev()
                .map(|a| AtomicType::new(a.base, a.adjoint_order + delta))
                .collect(),
        }
    }
}

/// One cancelled pair in a reduction. `left` and `right` are positions in the
/// flattened atom sequence of the whole sentence; `direction` says whether
/// the cap is a right or a left adjoint cancellation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub left: usize,
    pub right: usize,
    pub direction: Side,
}

/// A successful contraction-only reduction to a target type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    contractions: Vec<Contraction>,
    residual: PregroupType,
    residual_positions: Vec<usize>,
    total_atoms: usize,
}

impl Reduction {
    pub fn contractions(&self) -> &[Contraction] {
        &self.contractions
    }

    /// Atoms left over after cancellation; equals the reduction target.
    pub fn residual(&self) -> &PregroupType {
        &self.residual
    }

    /// Flattened positions of the residual atoms, in order.
    pub fn residual_positions(&self) -> &[usize] {
        &self.residual_positions
    }

    /// Number of atoms across all word types.
    pub fn total_atoms(&self) -> usize {
        self.total_atoms
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PregroupError {
    /// Grammar declared with no basic types.
    EmptyGrammar,
    /// The same basic symbol declared twice.
    DuplicateBasic(String),
    /// Symbol is empty or uses characters outside `[A-Za-z][A-Za-z0-9_]*`.
    BadSymbol(String),
    /// Type expression mentions a symbol the grammar does not declare.
    UnknownBasic(String),
    /// Type expression does not match the grammar `atom ('^l'|'^r')* ('.' ...)*`.
    Malformed(String),
    /// Greedy cancellation left a residual different from the target.
    NoReduction { residual: String, target: String },
}

impl core::fmt::Display for PregroupError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PregroupError::EmptyGrammar => write!(f, "grammar needs at least one basic type"),
            PregroupError::DuplicateBasic(s) => write!(f, "duplicate basic type `{s}`"),
            PregroupError::BadSymbol(s) => write!(f, "bad basic-type symbol `{s}`"),
            PregroupError::UnknownBasic(s) => write!(f, "unknown basic type `{s}`"),
            PregroupError::Malformed(s) => write!(f, "malformed type expression `{s}`"),
            PregroupError::NoReduction { residual, target } => {
                write!(f, "no reduction: residual `{residual}` does not match target `{target}`")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PregroupError {}

/// A free pregroup over a declared set of basic types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PregroupGrammar {
    basics: Vec<String>,
}

impl PregroupGrammar {
    pub fn new(basics: &[&str]) -> Result<Self, PregroupError> {
        if basics.is_empty() {
            return Err(PregroupError::EmptyGrammar);
        }
        let mut seen: Vec<&str> = Vec::with_capacity(basics.len());
        for &b in basics {
            if !symbol_ok(b) {
                return Err(PregroupError::BadSymbol(b.to_string()));
            }
            if seen.contains(&b) {
                return Err(PregroupError::DuplicateBasic(b.to_string()));
            }
            seen.push(b);
        }
        Ok(PregroupGrammar { basics: basics.iter().map(|&b| b.to_string()).collect() })
    }

    /// The two-type grammar `{n, s}` used throughout: `n` for noun phrases,
    /// `s` for sentences.
    pub fn english() -> Self {
        PregroupGrammar::new(&["n", "s"]).expect("static grammar is well formed")
    }

    pub fn basics(&self) -> &[String] {
        &self.basics
    }

    pub fn basic_index(&self, symbol: &str) -> Option<usize> {
        self.basics.iter().position(|b| b == symbol)
    }

    /// # Panics
    /// Panics if `index` is not a declared basic type.
    pub fn basic_symbol(&self, index: usize) -> &str {
        &self.basics[index]
    }

    /// Parses `atom ('^l'|'^r')* ('.' atom ('^l'|'^r')*)*`, for example
    /// `n^r.s.n^l` or `n^r.n.s^l.n`.
    pub fn parse_type(&self, text: &str) -> Result<PregroupType, PregroupError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(PregroupError::Malformed(text.to_string()));
        }
        let mut atoms = Vec::new();
        for part in trimmed.split('.') {
            let mut pieces = part.split('^');
            let symbol = match pieces.next() {
                Some(s) if !s.is_empty() => s,
                _ => return Err(PregroupError::Malformed(text.to_string())),
            };
            let base = self
                .basic_index(symbol)
                .ok_or_else(|| PregroupError::UnknownBasic(symbol.to_string()))?;
            let mut order: i32 = 0;
            for marker in pieces {
                match marker {
                    "l" => order -= 1,
                    "r" => order += 1,
                    _ => return Err(PregroupError::Malformed(text.to_string())),
                }
            }
            atoms.push(AtomicType::new(base, order));
        }
        Ok(PregroupType::from_atoms(atoms))
    }

    /// Renders a type back into the expression syntax.
    pub fn format_type(&self, t: &PregroupType) -> String {
        if t.is_empty() {
            return String::new();
        }
        let rendered: Vec<String> = t
            .atoms()
            .iter()
            .map(|a| {
                let mut s = self.basics[a.base].clone();
                let marker = if a.adjoint_order < 0 { "^l" } else { "^r" };
                for _ in 0..a.adjoint_order.unsigned_abs() {
                    s.push_str(marker);
                }
                s
            })
            .collect();
        rendered.join(".")
    }

    /// Contraction-only reduction of a sequence of word types to a target.
    ///
    /// Greedy stack matching: scan the flattened atoms left to right, and
    /// whenever the incoming atom is `(b, z+1)` against a stack top `(b, z)`,
    /// cancel the pair. Succeeds when the surviving atoms equal the target.
    /// The pairs come out planar by construction, and identical inputs always
    /// produce the identical [`Reduction`].
    pub fn reduce(
        &self,
        types: &[PregroupType],
        target: &PregroupType,
    ) -> Result<Reduction, PregroupError> {
        let mut stack: Vec<(usize, AtomicType)> = Vec::new();
        let mut contractions = Vec::new();
        let mut total = 0;
        for t in types {
            for &atom in t.atoms() {
                let pos = total;
                total += 1;
                if let Some(&(top_pos, top)) = stack.last() {
                    if top.base == atom.base && atom.adjoint_order == top.adjoint_order + 1 {
                        stack.pop();
                        let direction =
                            if top.adjoint_order >= 0 { Side::Right } else { Side::Left };
                        contractions.push(Contraction { left: top_pos, right: pos, direction });
                        continue;
                    }
                }
                stack.push((pos, atom));
            }
        }
        let residual_positions: Vec<usize> = stack.iter().map(|&(p, _)| p).collect();
        let residual = PregroupType::from_atoms(stack.iter().map(|&(_, a)| a).collect());
        if &residual != target {
            return Err(PregroupError::NoReduction {
                residual: self.format_type(&residual),
                target: self.format_type(target),
            });
        }
        debug_assert!(pairs_are_planar(&contractions));
        Ok(Reduction { contractions, residual, residual_positions, total_atoms: total })
    }
}

fn symbol_ok(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn pairs_are_planar(pairs: &[Contraction]) -> bool {
    for (k, p) in pairs.iter().enumerate() {
        for q in &pairs[k + 1..] {
            let (a, b) = (p.left, p.right);
            let (c, d) = (q.left, q.right);
            let crossing = (a < c && c < b && b < d) || (c < a && a < d && d < b);
            if crossing {
                return false;
            }
        }
    }
    true
}
