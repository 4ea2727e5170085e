//! Compositional distributional semantics over pregroup grammars.
//!
//! Word meanings live in finite-dimensional semimodule spaces, grammatical
//! types live in a free pregroup, and a sentence's meaning is obtained by
//! contracting the word tensors along the wires of the grammatical reduction.
//! Two scalar backends are provided: `f64` for quantitative corpus-derived
//! meanings and `bool` for truth-theoretic relational models.
//!
//! On top of the pure-state calculus, word meanings can be promoted to
//! density matrices (convex mixtures of pure meanings, one component per word
//! sense). Composition then runs the same reduction on doubled wires, and the
//! Von Neumann entropy of a composed state measures how much ambiguity
//! survives composition.
//!
//! The crate is organised bottom-up:
//!
//! * [`semiring`]: scalar backends ([`Real`], [`Boolean`]).
//! * [`tensor`]: dense row-major tensors, contraction, wiring plans.
//! * [`pregroup`]: grammatical types, adjoints, stack-based reduction.
//! * [`frobenius`]: copying/merging maps and Frobenius algebra law checks.
//! * [`density`]: positive operators, entropy, complete positivity, and
//!   second-order (double density) states.
//! * [`compose`]: sentence composition in pure, density, Frobenius, and
//!   non-commutative modes.
//! * [`rel`]: a small relational (Boolean) model with a mixed "queen".
//!
//! ```
//! use discocat_core::pregroup::{PregroupGrammar, Side};
//!
//! let g = PregroupGrammar::english();
//! let n = g.parse_type("n").unwrap();
//! let tv = g.parse_type("n^r.s.n^l").unwrap();
//! let s = g.parse_type("s").unwrap();
//! let r = g.reduce(&[n.clone(), tv, n], &s).unwrap();
//! assert_eq!(r.contractions().len(), 2);
//! let _ = Side::Left;
//! ```
//!
//! The crate is `no_std`-compatible: disable default features and enable
//! `libm` to build against `core` + `alloc` only.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("discocat-core needs either the `std` or the `libm` feature");

mod math;

pub mod compose;
pub mod density;
pub mod frobenius;
pub mod pregroup;
pub mod rel;
pub mod semiring;
pub mod tensor;

pub use semiring::{Boolean, Real, Semiring};
pub use tensor::{BoolTensor, IndexWiring, RealTensor, Tensor};
