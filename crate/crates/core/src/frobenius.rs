//! Frobenius algebras on meaning spaces: copying, merging, deleting.
//!
//! A basis `{e_i}` of a space `W` induces a commutative Frobenius algebra:
//! `delta` copies along the basis (a vector becomes the diagonal matrix),
//! `mu` merges pointwise, `iota` deletes by summing coordinates, and `zeta`
//! inserts the uniform all-ones state. These four maps are what let one wire
//! be shared between several grammatical roles, e.g. a noun feeding both an
//! adjective and a verb.
//!
//! Operator-valued (doubled) states get two merges. [`hadamard_double`] is
//! the basis merge applied to both wire layers at once: an entrywise product
//! of operators. [`mu_noncomm`] is the other canonical merge, plain operator
//! composition; it is associative but not commutative, and its merge of two
//! projections behaves like a non-orthogonal projection.
//!
//! [`check_frobenius_laws`] materialises an algebra's structure maps as
//! tensors and evaluates (co)associativity, the (co)unit laws, and the
//! Frobenius condition on caller-supplied sample states, reporting the worst
//! deviation. Over the Booleans every law is exact; over the reals the
//! deviations sit at rounding level.

use alloc::vec;

use crate::semiring::Semiring;
use crate::tensor::{apply_wiring, IndexWiring, Tensor, TensorError};

/// Largest algebra dimension accepted by the law checker. The checker
/// materialises rank-3 structure tensors on the carrier, which for the
/// doubled algebras has dimension `dim^2`.
pub const MAX_LAW_CHECK_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrobeniusError {
    /// Operation needs a rank-1 tensor.
    NotAVector { rank: usize },
    /// Operation needs a rank-2 tensor.
    NotAMatrix { rank: usize },
    /// Operand shapes are incompatible.
    ShapeMismatch,
    /// Law check requested beyond [`MAX_LAW_CHECK_DIM`].
    DimTooLarge { dim: usize, max: usize },
    /// Law check needs at least one sample state.
    NoSamples,
    /// Law check sample has the wrong shape for the algebra's carrier.
    BadSample { expected: usize },
    /// Algebra dimension must be at least 1.
    ZeroDim,
    /// Internal wiring failure while evaluating a law.
    Wiring(TensorError),
}

impl core::fmt::Display for FrobeniusError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FrobeniusError::NotAVector { rank } => write!(f, "expected rank 1, got rank {rank}"),
            FrobeniusError::NotAMatrix { rank } => write!(f, "expected rank 2, got rank {rank}"),
            FrobeniusError::ShapeMismatch => write!(f, "operand shapes are incompatible"),
            FrobeniusError::DimTooLarge { dim, max } => {
                write!(f, "law check dimension {dim} exceeds the maximum {max}")
            }
            FrobeniusError::NoSamples => write!(f, "law check needs at least one sample state"),
            FrobeniusError::BadSample { expected } => {
                write!(f, "law check samples must be vectors of dimension {expected}")
            }
            FrobeniusError::ZeroDim => write!(f, "algebra dimension must be at least 1"),
            FrobeniusError::Wiring(e) => write!(f, "wiring failure in law evaluation: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FrobeniusError {}

impl From<TensorError> for FrobeniusError {
    fn from(e: TensorError) -> Self {
        FrobeniusError::Wiring(e)
    }
}

/// Copy a vector along the basis: `delta(v)` is the diagonal matrix with `v`
/// on the diagonal.
pub fn delta<S: Semiring>(v: &Tensor<S>) -> Result<Tensor<S>, FrobeniusError> {
    if v.rank() != 1 {
        return Err(FrobeniusError::NotAVector { rank: v.rank() });
    }
    let d = v.dim(0);
    let mut out = Tensor::zeros(vec![d, d]);
    for i in 0..d {
        out.set(&[i, i], v.get(&[i]));
    }
    Ok(out)
}

/// Merge two vectors pointwise. Merging distinct basis states gives the zero
/// vector: the basis merge keeps only agreements.
pub fn mu<S: Semiring>(a: &Tensor<S>, b: &Tensor<S>) -> Result<Tensor<S>, FrobeniusError> {
    if a.rank() != 1 {
        return Err(FrobeniusError::NotAVector { rank: a.rank() });
    }
    if a.shape() != b.shape() {
        return Err(FrobeniusError::ShapeMismatch);
    }
    let data = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| S::mul(x, y))
        .collect();
    Ok(Tensor::new(vec![a.dim(0)], data).expect("shape matches data"))
}

/// Delete a vector: the sum of its coordinates.
pub fn iota<S: Semiring>(v: &Tensor<S>) -> Result<S::Elem, FrobeniusError> {
    if v.rank() != 1 {
        return Err(FrobeniusError::NotAVector { rank: v.rank() });
    }
    let mut acc = S::zero();
    for &x in v.data() {
        acc = S::add(acc, x);
    }
    Ok(acc)
}

/// The uniform state: all-ones vector of dimension `d`.
pub fn zeta<S: Semiring>(d: usize) -> Tensor<S> {
    Tensor::filled(vec![d], S::one())
}

/// The basis merge doubled onto operators: entrywise product of two
/// equally-shaped matrices.
pub fn hadamard_double<S: Semiring>(
    p: &Tensor<S>,
    q: &Tensor<S>,
) -> Result<Tensor<S>, FrobeniusError> {
    if p.rank() != 2 {
        return Err(FrobeniusError::NotAMatrix { rank: p.rank() });
    }
    if p.shape() != q.shape() {
        return Err(FrobeniusError::ShapeMismatch);
    }
    let data = p
        .data()
        .iter()
        .zip(q.data())
        .map(|(&x, &y)| S::mul(x, y))
        .collect();
    Ok(Tensor::new(p.shape().to_vec(), data).expect("shape matches data"))
}

/// The non-commutative merge on operators: the matrix product `p . q`.
pub fn mu_noncomm<S: Semiring>(
    p: &Tensor<S>,
    q: &Tensor<S>,
) -> Result<Tensor<S>, FrobeniusError> {
    if p.rank() != 2 {
        return Err(FrobeniusError::NotAMatrix { rank: p.rank() });
    }
    if q.rank() != 2 {
        return Err(FrobeniusError::NotAMatrix { rank: q.rank() });
    }
    let (m, k) = (p.dim(0), p.dim(1));
    let (k2, n) = (q.dim(0), q.dim(1));
    if k != k2 {
        return Err(FrobeniusError::ShapeMismatch);
    }
    let mut out = Tensor::zeros(vec![m, n]);
    for i in 0..m {
        for j in 0..n {
            let mut acc = S::zero();
            for t in 0..k {
                acc = S::add(acc, S::mul(p.get(&[i, t]), q.get(&[t, j])));
            }
            out.set(&[i, j], acc);
        }
    }
    Ok(out)
}

/// The three algebra families the law checker knows how to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrobeniusKind {
    /// Basis copying on `W`: carrier dimension `dim`.
    CommutativeBasis,
    /// Basis copying applied to both layers of doubled wires: carrier
    /// dimension `dim^2`, acting on vectorised operators as the entrywise
    /// product.
    DoubledBasis,
    /// Operator composition on doubled wires: carrier dimension `dim^2`,
    /// acting on vectorised operators as the matrix product. Associative and
    /// unital but not commutative.
    OperatorComposition,
}

/// An algebra family instantiated at a space dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    kind: FrobeniusKind,
    dim: usize,
}

impl FrobeniusAlgebra {
    pub fn new(kind: FrobeniusKind, dim: usize) -> Result<Self, FrobeniusError> {
        if dim == 0 {
            return Err(FrobeniusError::ZeroDim);
        }
        Ok(FrobeniusAlgebra { kind, dim })
    }

    pub fn kind(&self) -> FrobeniusKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the space the structure maps act on.
    pub fn carrier_dim(&self) -> usize {
        match self.kind {
            FrobeniusKind::CommutativeBasis => self.dim,
            FrobeniusKind::DoubledBasis | FrobeniusKind::OperatorComposition => self.dim * self.dim,
        }
    }

    /// Materialises the structure maps as tensors over any semiring.
    pub fn maps<S: Semiring>(&self) -> FrobeniusMaps<S> {
        let d = self.dim;
        match self.kind {
            FrobeniusKind::CommutativeBasis => {
                let m = d;
                let mut mul = Tensor::zeros(vec![m, m, m]);
                for i in 0..m {
                    mul.set(&[i, i, i], S::one());
                }
                let comul = mul.clone();
                FrobeniusMaps {
                    mul,
                    comul,
                    unit: Tensor::filled(vec![m], S::one()),
                    counit: Tensor::filled(vec![m], S::one()),
                }
            }
            FrobeniusKind::DoubledBasis => {
                let m = d * d;
                let mut mul = Tensor::zeros(vec![m, m, m]);
                for i in 0..d {
                    for i2 in 0..d {
                        let c = i * d + i2;
                        mul.set(&[c, c, c], S::one());
                    }
                }
                let comul = mul.clone();
                FrobeniusMaps {
                    mul,
                    comul,
                    unit: Tensor::filled(vec![m], S::one()),
                    counit: Tensor::filled(vec![m], S::one()),
                }
            }
            FrobeniusKind::OperatorComposition => {
                let m = d * d;
                // mul[(a,b), (c,e), (f,g)] = [a==f][b==c][e==g]; the merge of
                // vectorised operators P, Q is vec(P.Q).
                let mut mul = Tensor::zeros(vec![m, m, m]);
                for a in 0..d {
                    for b in 0..d {
                        for e in 0..d {
                            mul.set(&[a * d + b, b * d + e, a * d + e], S::one());
                        }
                    }
                }
                // The comultiplication is the dagger of the multiplication:
                // comul[i, j, k] = mul[j, k, i].
                let mut comul = Tensor::zeros(vec![m, m, m]);
                for j in 0..m {
                    for k in 0..m {
                        for i in 0..m {
                            comul.set(&[i, j, k], S::conj(mul.get(&[j, k, i])));
                        }
                    }
                }
                // Unit is the (unnormalised) identity operator; counit its
                // dagger, the trace effect.
                let mut unit = Tensor::zeros(vec![m]);
                for a in 0..d {
                    unit.set(&[a * d + a], S::one());
                }
                let counit = unit.clone();
                FrobeniusMaps { mul, comul, unit, counit }
            }
        }
    }
}

/// Structure maps of a Frobenius algebra on a carrier of dimension `m`,
/// materialised as tensors. `mul[i, j, k]` is the `k` component of merging
/// `e_i` with `e_j`; `comul[i, j, k]` the `(j, k)` component of copying
/// `e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusMaps<S: Semiring> {
    pub mul: Tensor<S>,
    pub comul: Tensor<S>,
    pub unit: Tensor<S>,
    pub counit: Tensor<S>,
}

impl<S: Semiring> FrobeniusMaps<S> {
    pub fn carrier_dim(&self) -> usize {
        self.mul.dim(0)
    }

    /// Merge of two carrier states through `mul`.
    pub fn apply_mul(&self, x: &Tensor<S>, y: &Tensor<S>) -> Result<Tensor<S>, FrobeniusError> {
        let w = IndexWiring::new(vec![(0, 2), (1, 3)], vec![4])?;
        Ok(apply_wiring(&w, &[x, y, &self.mul])?)
    }

    /// Copy of a carrier state through `comul`.
    pub fn apply_comul(&self, x: &Tensor<S>) -> Result<Tensor<S>, FrobeniusError> {
        let w = IndexWiring::new(vec![(0, 1)], vec![2, 3])?;
        Ok(apply_wiring(&w, &[x, &self.comul])?)
    }
}

/// Outcome of a law check: the largest deviation seen across all laws and
/// samples, and which law produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct LawReport {
    pub max_deviation: f64,
    pub worst_law: &'static str,
    pub passed: bool,
}

/// Checks the monoid, comonoid, and Frobenius laws of an algebra on sample
/// states. Samples must be rank-1 tensors on the algebra's carrier; triples
/// for associativity are formed by sliding a cyclic window over the sample
/// list, so `n` samples yield `n` evaluations of every law.
pub fn check_frobenius_laws<S: Semiring>(
    algebra: &FrobeniusAlgebra,
    samples: &[Tensor<S>],
    tolerance: f64,
) -> Result<LawReport, FrobeniusError> {
    if algebra.dim() > MAX_LAW_CHECK_DIM {
        return Err(FrobeniusError::DimTooLarge { dim: algebra.dim(), max: MAX_LAW_CHECK_DIM });
    }
    check_frobenius_maps(&algebra.maps::<S>(), samples, tolerance)
}

/// Law check against explicitly given structure maps. Useful for probing
/// corrupted maps, which must be reported as violations.
pub fn check_frobenius_maps<S: Semiring>(
    maps: &FrobeniusMaps<S>,
    samples: &[Tensor<S>],
    tolerance: f64,
) -> Result<LawReport, FrobeniusError> {
    if samples.is_empty() {
        return Err(FrobeniusError::NoSamples);
    }
    let m = maps.carrier_dim();
    for s in samples {
        if s.rank() != 1 || s.dim(0) != m {
            return Err(FrobeniusError::BadSample { expected: m });
        }
    }

    let mut report = LawReport { max_deviation: 0.0, worst_law: "none", passed: true };
    let n = samples.len();
    for k in 0..n {
        let x = &samples[k];
        let y = &samples[(k + 1) % n];
        let z = &samples[(k + 2) % n];

        // mul(mul(x, y), z) = mul(x, mul(y, z)). Factors are ordered so each
        // merge is fully wired the moment it is absorbed, keeping every
        // intermediate no larger than the carrier squared.
        let assoc_l = {
            let w = IndexWiring::new(vec![(0, 2), (1, 3), (4, 6), (5, 7)], vec![8])?;
            apply_wiring(&w, &[x, y, &maps.mul, z, &maps.mul])?
        };
        let assoc_r = {
            let w = IndexWiring::new(vec![(0, 2), (1, 3), (5, 6), (4, 7)], vec![8])?;
            apply_wiring(&w, &[y, z, &maps.mul, x, &maps.mul])?
        };
        record(&mut report, "associativity", &assoc_l, &assoc_r);

        // mul(unit, x) = x = mul(x, unit)
        let unit_l = {
            let w = IndexWiring::new(vec![(0, 2), (1, 3)], vec![4])?;
            apply_wiring(&w, &[&maps.unit, x, &maps.mul])?
        };
        record(&mut report, "left unit", &unit_l, x);
        let unit_r = {
            let w = IndexWiring::new(vec![(0, 3), (1, 2)], vec![4])?;
            apply_wiring(&w, &[&maps.unit, x, &maps.mul])?
        };
        record(&mut report, "right unit", &unit_r, x);

        // (comul x 1) comul(x) = (1 x comul) comul(x)
        let coassoc_l = {
            let w = IndexWiring::new(vec![(0, 1), (2, 4)], vec![5, 6, 3])?;
            apply_wiring(&w, &[x, &maps.comul, &maps.comul])?
        };
        let coassoc_r = {
            let w = IndexWiring::new(vec![(0, 1), (3, 4)], vec![2, 5, 6])?;
            apply_wiring(&w, &[x, &maps.comul, &maps.comul])?
        };
        record(&mut report, "coassociativity", &coassoc_l, &coassoc_r);

        // (counit x 1) comul(x) = x = (1 x counit) comul(x)
        let counit_l = {
            let w = IndexWiring::new(vec![(0, 1), (2, 4)], vec![3])?;
            apply_wiring(&w, &[x, &maps.comul, &maps.counit])?
        };
        record(&mut report, "left counit", &counit_l, x);
        let counit_r = {
            let w = IndexWiring::new(vec![(0, 1), (3, 4)], vec![2])?;
            apply_wiring(&w, &[x, &maps.comul, &maps.counit])?
        };
        record(&mut report, "right counit", &counit_r, x);

        // comul(mul(x, y)) = (mul x 1)(1 x comul)(x, y)
        let frob_l = {
            let w = IndexWiring::new(vec![(0, 2), (1, 3), (4, 5)], vec![6, 7])?;
            apply_wiring(&w, &[x, y, &maps.mul, &maps.comul])?
        };
        let frob_r = {
            let w = IndexWiring::new(vec![(0, 1), (4, 5), (2, 6)], vec![7, 3])?;
            apply_wiring(&w, &[y, &maps.comul, x, &maps.mul])?
        };
        record(&mut report, "frobenius condition", &frob_l, &frob_r);
    }
    report.passed = report.max_deviation <= tolerance;
    Ok(report)
}

fn record<S: Semiring>(
    report: &mut LawReport,
    law: &'static str,
    got: &Tensor<S>,
    want: &Tensor<S>,
) {
    debug_assert_eq!(got.shape(), want.shape());
    for (&a, &b) in got.data().iter().zip(want.data()) {
        let dev = S::deviation(a, b);
        if dev > report.max_deviation {
            report.max_deviation = dev;
            report.worst_law = law;
        }
    }
}
