//! Scalar backends for tensor arithmetic.

use crate::math;

/// A commutative semiring of scalars.
///
/// Tensor operations only ever need `zero`, `one`, `add`, and `mul`, so the
/// same contraction code serves quantitative (`f64`) and relational (`bool`)
/// models. `conj` is the involution applied by `dagger`; it is the identity
/// for both shipped backends and is the single hook a complex backend would
/// override.
pub trait Semiring: 'static {
    type Elem: Copy + PartialEq + core::fmt::Debug;

    fn zero() -> Self::Elem;
    fn one() -> Self::Elem;
    fn add(a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(a: Self::Elem, b: Self::Elem) -> Self::Elem;

    #[inline]
    fn conj(a: Self::Elem) -> Self::Elem {
        a
    }

    /// How far apart two scalars are, as an `f64`.
    ///
    /// Law checks and oracle comparisons report a single numeric deviation
    /// regardless of backend: absolute difference over the reals, 0/1 over
    /// the Booleans (where equality is exact or broken, never approximate).
    fn deviation(a: Self::Elem, b: Self::Elem) -> f64;
}

/// The real field on `f64`. Subtraction and ordering exist here on top of
/// the semiring interface; Boolean tensors get neither.
pub struct Real;

impl Semiring for Real {
    type Elem = f64;

    #[inline]
    fn zero() -> f64 {
        0.0
    }

    #[inline]
    fn one() -> f64 {
        1.0
    }

    #[inline]
    fn add(a: f64, b: f64) -> f64 {
        a + b
    }

    #[inline]
    fn mul(a: f64, b: f64) -> f64 {
        a * b
    }

    #[inline]
    fn deviation(a: f64, b: f64) -> f64 {
        math::abs(a - b)
    }
}

/// The Boolean semiring: `add` is disjunction, `mul` is conjunction.
pub struct Boolean;

impl Semiring for Boolean {
    type Elem = bool;

    #[inline]
    fn zero() -> bool {
        false
    }

    #[inline]
    fn one() -> bool {
        true
    }

    #[inline]
    fn add(a: bool, b: bool) -> bool {
        a || b
    }

    #[inline]
    fn mul(a: bool, b: bool) -> bool {
        a && b
    }

    #[inline]
    fn deviation(a: bool, b: bool) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }
}
