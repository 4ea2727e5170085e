//! Density matrices, superoperators, and entropy-based ambiguity measures.
//!
//! A word whose usage splits into discrete senses is represented not by one
//! vector but by a probability-weighted ensemble of sense vectors. The
//! ensemble is packaged as a density matrix: a symmetric positive
//! semidefinite operator of trace one. Pure states (rank-one projections)
//! are unambiguous; mixing raises the Von Neumann entropy, which is the
//! quantitative ambiguity score reported by the library.
//!
//! Composition acts on density matrices through superoperators, stored here
//! as matrices on vectorised operators. [`SuperOperator::is_completely_positive`]
//! checks the Choi matrix for positivity, which is the admissibility
//! criterion for meaning maps: doubling a linear map always passes, the
//! transpose map and the operator-composition merge do not.
//!
//! [`DoubleDensity`] adds one more layer: a density matrix over doubled
//! wires, whose two partial traces separate *ambiguity* (outer mixing,
//! traced over the inner system) from *generality* (inner mixing, traced
//! over the outer system).
//!
//! All eigenvalue work runs through a cyclic Jacobi solver; no linear
//! algebra backend is required.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::tensor::{partial_trace, RealTensor, Subsystem, TensorError};

/// Maximum allowed deviation from symmetry, `|a_ij - a_ji|`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;
/// Most negative eigenvalue accepted as "positive semidefinite".
pub const PSD_TOLERANCE: f64 = 1e-9;
/// Maximum allowed deviation of a density matrix trace from one, and of a
/// probability sum from one.
pub const TRACE_TOLERANCE: f64 = 1e-9;
/// Jacobi sweeps stop once the off-diagonal Frobenius mass falls below this
/// (relative to the matrix norm).
pub const EIGEN_CONVERGENCE: f64 = 1e-12;
/// Upper bound on Jacobi sweeps before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;
/// Largest Choi matrix dimension the complete-positivity check will
/// eigendecompose.
pub const MAX_CHOI_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum DensityError {
    /// Operation needs a square rank-2 tensor.
    NotSquare,
    /// Matrix dimension must be at least 1.
    ZeroDim,
    /// Symmetry deviation exceeded [`SYMMETRY_TOLERANCE`].
    NotSymmetric { deviation: f64 },
    /// Eigenvalue below `-`[`PSD_TOLERANCE`].
    NotPositive { min_eigenvalue: f64 },
    /// Trace differs from one by more than [`TRACE_TOLERANCE`].
    BadTrace { trace: f64 },
    /// Cannot normalise an operator with vanishing trace.
    ZeroTrace,
    /// Cannot lift or normalise the zero vector.
    ZeroVector,
    /// Ensembles and mixtures need at least one entry.
    EmptyEnsemble,
    /// Probabilities must lie in `(0, 1]`.
    BadProbability { p: f64 },
    /// Probabilities must sum to one within [`TRACE_TOLERANCE`].
    BadProbabilitySum { sum: f64 },
    /// Operands must share a shape.
    ShapeMismatch,
    /// Jacobi failed to converge within [`MAX_JACOBI_SWEEPS`].
    EigenNotConverged { off_mass: f64 },
    /// An eigenvalue fell outside `[0, 1]` by more than the clip margin.
    EntropyOutOfRange { eigenvalue: f64 },
    /// Choi matrix larger than [`MAX_CHOI_DIM`].
    DimTooLarge { dim: usize, max: usize },
    /// Underlying tensor failure.
    Tensor(TensorError),
}

impl core::fmt::Display for DensityError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DensityError::NotSquare => write!(f, "expected a square rank-2 tensor"),
            DensityError::ZeroDim => write!(f, "matrix dimension must be at least 1"),
            DensityError::NotSymmetric { deviation } => {
                write!(f, "matrix is not symmetric (deviation {deviation:e})")
            }
            DensityError::NotPositive { min_eigenvalue } => {
                write!(f, "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
            DensityError::BadTrace { trace } => write!(f, "trace {trace} is not one"),
            DensityError::ZeroTrace => write!(f, "cannot normalise a zero-trace operator"),
            DensityError::ZeroVector => write!(f, "cannot normalise the zero vector"),
            DensityError::EmptyEnsemble => write!(f, "ensemble has no entries"),
            DensityError::BadProbability { p } => {
                write!(f, "probability {p} is outside (0, 1]")
            }
            DensityError::BadProbabilitySum { sum } => {
                write!(f, "probabilities sum to {sum}, not one")
            }
            DensityError::ShapeMismatch => write!(f, "operand shapes are incompatible"),
            DensityError::EigenNotConverged { off_mass } => {
                write!(f, "eigensolver did not converge (off-diagonal mass {off_mass:e})")
            }
            DensityError::EntropyOutOfRange { eigenvalue } => {
                write!(f, "eigenvalue {eigenvalue} is too far outside [0, 1] for entropy")
            }
            DensityError::DimTooLarge { dim, max } => {
                write!(f, "Choi dimension {dim} exceeds the maximum {max}")
            }
            DensityError::Tensor(e) => write!(f, "tensor failure: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DensityError {}

impl From<TensorError> for DensityError {
    fn from(e: TensorError) -> Self {
        DensityError::Tensor(e)
    }
}

fn square_dim(m: &RealTensor) -> Result<usize, DensityError> {
    if m.rank() != 2 || m.dim(0) != m.dim(1) {
        return Err(DensityError::NotSquare);
    }
    if m.dim(0) == 0 {
        return Err(DensityError::ZeroDim);
    }
    Ok(m.dim(0))
}

fn symmetry_deviation(m: &RealTensor) -> f64 {
    let n = m.dim(0);
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = math::abs(m.get(&[i, j]) - m.get(&[j, i]));
            if d > dev {
                dev = d;
            }
        }
    }
    dev
}

fn check_symmetric(m: &RealTensor) -> Result<(), DensityError> {
    let dev = symmetry_deviation(m);
    if dev > SYMMETRY_TOLERANCE {
        return Err(DensityError::NotSymmetric { deviation: dev });
    }
    Ok(())
}

/// Trace of a square matrix.
pub fn trace(m: &RealTensor) -> Result<f64, DensityError> {
    let n = square_dim(m)?;
    Ok((0..n).map(|i| m.get(&[i, i])).sum())
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, in no
/// particular order. Fails if the input is not square or symmetric, or if
/// the rotations do not converge.
pub fn sym_eigen(m: &RealTensor) -> Result<Vec<f64>, DensityError> {
    let n = square_dim(m)?;
    check_symmetric(m)?;
    let mut a: Vec<f64> = m.data().to_vec();

    let fro: f64 = math::sqrt(a.iter().map(|x| x * x).sum());
    let threshold = EIGEN_CONVERGENCE * (1.0 + fro);

    let off_mass = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        math::sqrt(s)
    };

    for _ in 0..MAX_JACOBI_SWEEPS {
        if off_mass(&a) < threshold {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + math::sqrt(1.0 + tau * tau))
                } else {
                    1.0 / (tau - math::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[p * n + i] = a[i * n + p];
                    a[i * n + q] = s * aip + c * aiq;
                    a[q * n + i] = a[i * n + q];
                }
            }
        }
    }
    let off = off_mass(&a);
    if off < threshold {
        return Ok((0..n).map(|i| a[i * n + i]).collect());
    }
    Err(DensityError::EigenNotConverged { off_mass: off })
}

/// A symmetric positive semidefinite operator. Construction verifies
/// symmetry and eigenvalue positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveOperator {
    matrix: RealTensor,
}

impl PositiveOperator {
    pub fn new(matrix: RealTensor) -> Result<Self, DensityError> {
        square_dim(&matrix)?;
        check_symmetric(&matrix)?;
        let eigs = sym_eigen(&matrix)?;
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOLERANCE {
            return Err(DensityError::NotPositive { min_eigenvalue: min });
        }
        Ok(PositiveOperator { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim(0)
    }

    pub fn matrix(&self) -> &RealTensor {
        &self.matrix
    }

    pub fn into_matrix(self) -> RealTensor {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).expect("validated square")
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>, DensityError> {
        sym_eigen(&self.matrix)
    }

    /// Scales the operator to trace one.
    pub fn normalized(&self) -> Result<DensityMatrix, DensityError> {
        let t = self.trace();
        if math::abs(t) < TRACE_TOLERANCE {
            return Err(DensityError::ZeroTrace);
        }
        let data = self.matrix.data().iter().map(|x| x / t).collect();
        let m = RealTensor::new(self.matrix.shape().to_vec(), data).expect("same shape");
        DensityMatrix::new(m)
    }
}

/// A trace-one positive operator: the meaning of a word or phrase with its
/// sense structure folded in.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: PositiveOperator,
}

impl DensityMatrix {
    pub fn new(matrix: RealTensor) -> Result<Self, DensityError> {
        let op = PositiveOperator::new(matrix)?;
        let t = op.trace();
        if math::abs(t - 1.0) > TRACE_TOLERANCE {
            return Err(DensityError::BadTrace { trace: t });
        }
        Ok(DensityMatrix { op })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &RealTensor {
        self.op.matrix()
    }

    pub fn into_matrix(self) -> RealTensor {
        self.op.into_matrix()
    }

    pub fn as_positive(&self) -> &PositiveOperator {
        &self.op
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>, DensityError> {
        self.op.eigenvalues()
    }

    /// `-sum(e ln e)` over the eigenvalues. Eigenvalues within
    /// [`PSD_TOLERANCE`] below zero or above one are clipped onto the
    /// boundary; anything further out is an error rather than a silent
    /// repair.
    pub fn von_neumann_entropy(&self) -> Result<f64, DensityError> {
        let mut h = 0.0;
        for e in self.eigenvalues()? {
            let e = if e < 0.0 {
                if e < -PSD_TOLERANCE {
                    return Err(DensityError::EntropyOutOfRange { eigenvalue: e });
                }
                0.0
            } else if e > 1.0 {
                if e > 1.0 + PSD_TOLERANCE {
                    return Err(DensityError::EntropyOutOfRange { eigenvalue: e });
                }
                1.0
            } else {
                e
            };
            if e > 0.0 {
                h -= e * math::ln(e);
            }
        }
        Ok(h)
    }
}

/// Normalises a vector and returns the rank-one density matrix projecting
/// onto it. The zero vector has no direction and is rejected.
pub fn lift_pure(v: &RealTensor) -> Result<DensityMatrix, DensityError> {
    if v.rank() != 1 {
        return Err(DensityError::NotSquare);
    }
    let norm2: f64 = v.data().iter().map(|x| x * x).sum();
    if norm2 == 0.0 {
        return Err(DensityError::ZeroVector);
    }
    let norm = math::sqrt(norm2);
    let d = v.dim(0);
    let mut m = RealTensor::zeros(vec![d, d]);
    for i in 0..d {
        for j in 0..d {
            m.set(&[i, j], v.get(&[i]) / norm * (v.get(&[j]) / norm));
        }
    }
    DensityMatrix::new(m)
}

/// A discrete sense inventory: probability-weighted direction vectors, all
/// of one shape. Probabilities must lie in `(0, 1]` and sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SenseEnsemble {
    entries: Vec<(f64, RealTensor)>,
}

impl SenseEnsemble {
    pub fn new(entries: Vec<(f64, RealTensor)>) -> Result<Self, DensityError> {
        if entries.is_empty() {
            return Err(DensityError::EmptyEnsemble);
        }
        let shape = entries[0].1.shape().to_vec();
        let mut sum = 0.0;
        for (p, v) in &entries {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(DensityError::BadProbability { p: *p });
            }
            if v.rank() != 1 || v.shape() != shape.as_slice() {
                return Err(DensityError::ShapeMismatch);
            }
            sum += p;
        }
        if math::abs(sum - 1.0) > TRACE_TOLERANCE {
            return Err(DensityError::BadProbabilitySum { sum });
        }
        Ok(SenseEnsemble { entries })
    }

    pub fn entries(&self) -> &[(f64, RealTensor)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim(0)
    }
}

/// Builds the density matrix of an ensemble: each sense vector is
/// normalised, projected, and mixed in with its probability.
pub fn from_ensemble(ensemble: &SenseEnsemble) -> Result<DensityMatrix, DensityError> {
    let d = ensemble.dim();
    let mut m = RealTensor::zeros(vec![d, d]);
    for (p, v) in ensemble.entries() {
        let pure = lift_pure(v)?;
        for i in 0..d {
            for j in 0..d {
                m.set(&[i, j], m.get(&[i, j]) + p * pure.matrix().get(&[i, j]));
            }
        }
    }
    DensityMatrix::new(m)
}

/// Unnormalised overlap `sum_ij a_ij b_ij`, the trace inner product of
/// symmetric operators.
pub fn similarity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, DensityError> {
    if a.dim() != b.dim() {
        return Err(DensityError::ShapeMismatch);
    }
    Ok(a.matrix()
        .data()
        .iter()
        .zip(b.matrix().data())
        .map(|(x, y)| x * y)
        .sum())
}

/// Overlap scaled by both Frobenius norms, so identical states score one.
pub fn similarity_normalized(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, DensityError> {
    let raw = similarity(a, b)?;
    let na: f64 = math::sqrt(a.matrix().data().iter().map(|x| x * x).sum());
    let nb: f64 = math::sqrt(b.matrix().data().iter().map(|x| x * x).sum());
    if na == 0.0 || nb == 0.0 {
        return Err(DensityError::ZeroVector);
    }
    Ok(raw / (na * nb))
}

/// Verdict of a complete-positivity check: the Choi matrix must be
/// symmetric and positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct CpVerdict {
    pub completely_positive: bool,
    pub choi_symmetry_deviation: f64,
    /// Present unless the Choi matrix was too asymmetric to decompose.
    pub min_choi_eigenvalue: Option<f64>,
}

/// A linear map on operators, stored as a matrix acting on row-major
/// vectorised operators: rows indexed by output pairs `(a, b)`, columns by
/// input pairs `(c, e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    d_in: usize,
    d_out: usize,
    /// Shape `[d_out^2, d_in^2]`.
    matrix: RealTensor,
}

impl SuperOperator {
    pub fn new(d_in: usize, d_out: usize, matrix: RealTensor) -> Result<Self, DensityError> {
        if d_in == 0 || d_out == 0 {
            return Err(DensityError::ZeroDim);
        }
        if matrix.rank() != 2
            || matrix.dim(0) != d_out * d_out
            || matrix.dim(1) != d_in * d_in
        {
            return Err(DensityError::ShapeMismatch);
        }
        Ok(SuperOperator { d_in, d_out, matrix })
    }

    /// Doubles a linear map `f`: the superoperator sending `rho` to
    /// `f rho f^T`. Entries `M[(a,b),(c,e)] = f[a,c] f[b,e]`.
    pub fn double_map(f: &RealTensor) -> Result<Self, DensityError> {
        if f.rank() != 2 {
            return Err(DensityError::NotSquare);
        }
        let (d_out, d_in) = (f.dim(0), f.dim(1));
        if d_in == 0 || d_out == 0 {
            return Err(DensityError::ZeroDim);
        }
        let mut m = RealTensor::zeros(vec![d_out * d_out, d_in * d_in]);
        for a in 0..d_out {
            for b in 0..d_out {
                for c in 0..d_in {
                    for e in 0..d_in {
                        m.set(
                            &[a * d_out + b, c * d_in + e],
                            f.get(&[a, c]) * f.get(&[b, e]),
                        );
                    }
                }
            }
        }
        Ok(SuperOperator { d_in, d_out, matrix: m })
    }

    /// Sum of doubled maps: `rho -> sum_k k rho k^T`. Completely positive by
    /// construction.
    pub fn from_kraus(kraus: &[RealTensor]) -> Result<Self, DensityError> {
        let first = kraus.first().ok_or(DensityError::EmptyEnsemble)?;
        let mut acc = SuperOperator::double_map(first)?;
        for k in &kraus[1..] {
            let next = SuperOperator::double_map(k)?;
            if next.d_in != acc.d_in || next.d_out != acc.d_out {
                return Err(DensityError::ShapeMismatch);
            }
            for (a, b) in acc.matrix.data_mut().iter_mut().zip(next.matrix.data()) {
                *a += b;
            }
        }
        Ok(acc)
    }

    /// The transpose map `rho -> rho^T`. Positive but not completely
    /// positive for `d >= 2`.
    pub fn transpose_map(d: usize) -> Result<Self, DensityError> {
        if d == 0 {
            return Err(DensityError::ZeroDim);
        }
        let mut m = RealTensor::zeros(vec![d * d, d * d]);
        for a in 0..d {
            for b in 0..d {
                m.set(&[a * d + b, b * d + a], 1.0);
            }
        }
        Ok(SuperOperator { d_in: d, d_out: d, matrix: m })
    }

    /// The operator-composition merge restricted to doubled input: a joint
    /// state on two wires (a density matrix on the `d^2`-dimensional pair
    /// space, inner wire indices varying fastest) is sent to the operator
    /// product of its halves, `P (x) Q -> P.Q`. Not completely positive for
    /// `d >= 2`, which is why composing with it is not an admissible meaning
    /// map.
    pub fn composition_merge(d: usize) -> Result<Self, DensityError> {
        if d == 0 {
            return Err(DensityError::ZeroDim);
        }
        let pair = d * d;
        let mut m = RealTensor::zeros(vec![d * d, pair * pair]);
        for f in 0..d {
            for g in 0..d {
                for c in 0..d {
                    // Input row index (f, c), column index (c, g) of the
                    // joint state.
                    m.set(&[f * d + g, (f * d + c) * pair + (c * d + g)], 1.0);
                }
            }
        }
        Ok(SuperOperator { d_in: pair, d_out: d, matrix: m })
    }

    /// The basis merge restricted to doubled input: a joint state on two
    /// wires is sent to the entrywise product of its halves,
    /// `P (x) Q -> P . Q entrywise`. Equals the doubling of the copy effect
    /// and is therefore completely positive.
    pub fn hadamard_merge(d: usize) -> Result<Self, DensityError> {
        if d == 0 {
            return Err(DensityError::ZeroDim);
        }
        let mut k = RealTensor::zeros(vec![d, d * d]);
        for f in 0..d {
            k.set(&[f, f * d + f], 1.0);
        }
        SuperOperator::double_map(&k)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn matrix(&self) -> &RealTensor {
        &self.matrix
    }

    /// Applies the map to an operator of shape `[d_in, d_in]`.
    pub fn apply(&self, rho: &RealTensor) -> Result<RealTensor, DensityError> {
        if rho.rank() != 2 || rho.dim(0) != self.d_in || rho.dim(1) != self.d_in {
            return Err(DensityError::ShapeMismatch);
        }
        let n_out = self.d_out * self.d_out;
        let n_in = self.d_in * self.d_in;
        let mut out = RealTensor::zeros(vec![self.d_out, self.d_out]);
        for r in 0..n_out {
            let mut acc = 0.0;
            for c in 0..n_in {
                acc += self.matrix.get(&[r, c]) * rho.data()[c];
            }
            out.data_mut()[r] = acc;
        }
        Ok(out)
    }

    /// The Choi matrix: `C[(a,x),(b,y)] = M[(a,b),(x,y)]`, of dimension
    /// `d_out * d_in`.
    pub fn choi(&self) -> RealTensor {
        let (di, do_) = (self.d_in, self.d_out);
        let n = do_ * di;
        let mut c = RealTensor::zeros(vec![n, n]);
        for a in 0..do_ {
            for b in 0..do_ {
                for x in 0..di {
                    for y in 0..di {
                        c.set(
                            &[a * di + x, b * di + y],
                            self.matrix.get(&[a * do_ + b, x * di + y]),
                        );
                    }
                }
            }
        }
        c
    }

    /// Complete positivity via the Choi matrix: symmetric within
    /// [`SYMMETRY_TOLERANCE`] and no eigenvalue below `-`[`PSD_TOLERANCE`].
    pub fn is_completely_positive(&self) -> Result<CpVerdict, DensityError> {
        let n = self.d_out * self.d_in;
        if n > MAX_CHOI_DIM {
            return Err(DensityError::DimTooLarge { dim: n, max: MAX_CHOI_DIM });
        }
        let c = self.choi();
        let dev = symmetry_deviation(&c);
        if dev > SYMMETRY_TOLERANCE {
            return Ok(CpVerdict {
                completely_positive: false,
                choi_symmetry_deviation: dev,
                min_choi_eigenvalue: None,
            });
        }
        let eigs = sym_eigen(&c)?;
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(CpVerdict {
            completely_positive: min >= -PSD_TOLERANCE,
            choi_symmetry_deviation: dev,
            min_choi_eigenvalue: Some(min),
        })
    }
}

/// Kronecker product of two square matrices, composite row index
/// `(a, x) = a * dim(b) + x`.
fn kron(a: &RealTensor, b: &RealTensor) -> RealTensor {
    let n = a.dim(0) * b.dim(0);
    a.tensor_product(b)
        .permute(&[0, 2, 1, 3])
        .expect("static permutation")
        .reshape(vec![n, n])
        .expect("volume preserved")
}

/// A density matrix on a doubled pair of systems: an outer layer carrying
/// sense mixing and an inner layer carrying within-sense spread. Composite
/// indices run `(outer, inner)` with the inner index varying fastest.
///
/// Tracing out the inner system leaves the *ambiguity operator*, whose
/// entropy measures how many discrete senses are in play. Tracing out the
/// outer system leaves the *generality operator*, whose entropy measures
/// how broad each sense is. A doubly pure state scores zero on both.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleDensity {
    d_outer: usize,
    d_inner: usize,
    density: DensityMatrix,
}

impl DoubleDensity {
    /// Validates a `(d_outer * d_inner)`-dimensional density matrix.
    pub fn new(matrix: RealTensor, d_outer: usize, d_inner: usize) -> Result<Self, DensityError> {
        if d_outer == 0 || d_inner == 0 {
            return Err(DensityError::ZeroDim);
        }
        let n = square_dim(&matrix)?;
        if n != d_outer * d_inner {
            return Err(DensityError::ShapeMismatch);
        }
        Ok(DoubleDensity { d_outer, d_inner, density: DensityMatrix::new(matrix)? })
    }

    /// Product state: outer and inner layers independent.
    pub fn separable(outer: &DensityMatrix, inner: &DensityMatrix) -> Self {
        let m = kron(outer.matrix(), inner.matrix());
        DoubleDensity {
            d_outer: outer.dim(),
            d_inner: inner.dim(),
            density: DensityMatrix::new(m).expect("product of densities is a density"),
        }
    }

    /// Both layers pure on the same direction: one sense, sharply peaked.
    pub fn doubly_pure(v: &RealTensor) -> Result<Self, DensityError> {
        let p = lift_pure(v)?;
        Ok(DoubleDensity::separable(&p, &p))
    }

    /// Convex combination of equally shaped double densities.
    pub fn mixture(entries: &[(f64, DoubleDensity)]) -> Result<Self, DensityError> {
        let first = &entries.first().ok_or(DensityError::EmptyEnsemble)?.1;
        let (d_outer, d_inner) = (first.d_outer, first.d_inner);
        let n = d_outer * d_inner;
        let mut m = RealTensor::zeros(vec![n, n]);
        let mut sum = 0.0;
        for (p, dd) in entries {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(DensityError::BadProbability { p: *p });
            }
            if dd.d_outer != d_outer || dd.d_inner != d_inner {
                return Err(DensityError::ShapeMismatch);
            }
            sum += p;
            for (acc, x) in m.data_mut().iter_mut().zip(dd.density.matrix().data()) {
                *acc += p * x;
            }
        }
        if math::abs(sum - 1.0) > TRACE_TOLERANCE {
            return Err(DensityError::BadProbabilitySum { sum });
        }
        DoubleDensity::new(m, d_outer, d_inner)
    }

    pub fn d_outer(&self) -> usize {
        self.d_outer
    }

    pub fn d_inner(&self) -> usize {
        self.d_inner
    }

    pub fn matrix(&self) -> &RealTensor {
        self.density.matrix()
    }

    /// Traces out the inner system, leaving the sense-mixing state.
    pub fn ambiguity_operator(&self) -> Result<DensityMatrix, DensityError> {
        let traced = partial_trace(
            self.density.matrix(),
            self.d_outer,
            self.d_inner,
            Subsystem::Second,
        )?;
        DensityMatrix::new(traced)
    }

    /// Traces out the outer system, leaving the within-sense spread.
    pub fn generality_operator(&self) -> Result<DensityMatrix, DensityError> {
        let traced = partial_trace(
            self.density.matrix(),
            self.d_outer,
            self.d_inner,
            Subsystem::First,
        )?;
        DensityMatrix::new(traced)
    }

    /// Entropy of the outer layer: how mixed the sense inventory is.
    pub fn ambiguity(&self) -> Result<f64, DensityError> {
        self.ambiguity_operator()?.von_neumann_entropy()
    }

    /// Entropy of the inner layer: how broad the senses are.
    pub fn generality(&self) -> Result<f64, DensityError> {
        self.generality_operator()?.von_neumann_entropy()
    }
}
