//! Dense row-major tensors over a scalar semiring.
//!
//! A [`Tensor`] is a shape plus a flat data buffer; rank-0 tensors are
//! scalars. Everything a grammatical reduction needs is expressed with four
//! primitives: [`Tensor::tensor_product`], [`Tensor::contract_pair`],
//! [`Tensor::permute`], and [`Tensor::dagger`]. A whole reduction is captured
//! by an [`IndexWiring`] (which indices contract against which, and the order
//! of the surviving ones) and executed by [`apply_wiring`].
//!
//! The evaluator contracts eagerly while factors are absorbed left to right,
//! so intermediate tensors stay small, but its result equals the naive
//! product-everything-then-contract composition of the primitives. Contraction
//! pairs are canonicalised at construction time, which makes results
//! bit-identical no matter how the caller ordered the pairs.

use alloc::vec;
use alloc::vec::Vec;

use crate::semiring::{Boolean, Real, Semiring};

pub type RealTensor = Tensor<Real>;
pub type BoolTensor = Tensor<Boolean>;

/// Errors from shape-level misuse of tensor operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorError {
    /// Data buffer length does not match the product of the shape.
    DataLength { expected: usize, got: usize },
    /// Axis index at or beyond the tensor's rank.
    AxisOutOfRange { axis: usize, rank: usize },
    /// Two axes that must agree in dimension do not.
    DimMismatch { left: usize, right: usize },
    /// Shapes disagree where equal shapes are required.
    ShapeMismatch,
    /// Reshape target has a different element count.
    ReshapeLength { from: usize, to: usize },
    /// The given axis list is not a permutation of `0..rank`.
    NotAPermutation,
    /// Structural problem in a wiring plan.
    Wiring(&'static str),
}

impl core::fmt::Display for TensorError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TensorError::DataLength { expected, got } => {
                write!(f, "data length {got} does not match shape volume {expected}")
            }
            TensorError::AxisOutOfRange { axis, rank } => {
                write!(f, "axis {axis} out of range for rank {rank}")
            }
            TensorError::DimMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            TensorError::ShapeMismatch => write!(f, "tensor shapes differ"),
            TensorError::ReshapeLength { from, to } => {
                write!(f, "cannot reshape {from} elements into a shape of volume {to}")
            }
            TensorError::NotAPermutation => write!(f, "axis list is not a permutation"),
            TensorError::Wiring(msg) => write!(f, "bad wiring: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TensorError {}

/// Dense tensor with row-major layout.
pub struct Tensor<S: Semiring> {
    shape: Vec<usize>,
    data: Vec<S::Elem>,
}

impl<S: Semiring> Clone for Tensor<S> {
    fn clone(&self) -> Self {
        Tensor { shape: self.shape.clone(), data: self.data.clone() }
    }
}

impl<S: Semiring> PartialEq for Tensor<S> {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.data == other.data
    }
}

impl<S: Semiring> core::fmt::Debug for Tensor<S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Tensor")
            .field("shape", &self.shape)
            .field("data", &self.data)
            .finish()
    }
}

impl<S: Semiring> Tensor<S> {
    /// Builds a tensor, checking that `data` fills `shape` exactly.
    pub fn new(shape: Vec<usize>, data: Vec<S::Elem>) -> Result<Self, TensorError> {
        let expected: usize = shape.iter().product();
        if data.len() != expected {
            return Err(TensorError::DataLength { expected, got: data.len() });
        }
        Ok(Tensor { shape, data })
    }

    /// Rank-0 tensor holding one scalar.
    pub fn scalar(value: S::Elem) -> Self {
        Tensor { shape: Vec::new(), data: vec![value] }
    }

    /// Rank-1 tensor from a slice.
    pub fn vector(values: &[S::Elem]) -> Self {
        Tensor { shape: vec![values.len()], data: values.to_vec() }
    }

    /// Tensor of the given shape with every entry equal to `value`.
    pub fn filled(shape: Vec<usize>, value: S::Elem) -> Self {
        let len = shape.iter().product();
        Tensor { shape, data: vec![value; len] }
    }

    /// All-zero tensor.
    pub fn zeros(shape: Vec<usize>) -> Self {
        Self::filled(shape, S::zero())
    }

    /// The cup state on a `d`-dimensional wire: the identity matrix read as a
    /// rank-2 state `sum_i e_i x e_i`. Contracting its two indices together
    /// gives the circle scalar (the dimension, over the reals).
    pub fn eta_state(d: usize) -> Self {
        let mut data = vec![S::zero(); d * d];
        for i in 0..d {
            data[i * d + i] = S::one();
        }
        Tensor { shape: vec![d, d], data }
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Dimension of one axis.
    ///
    /// # Panics
    /// Panics if `axis >= rank`.
    pub fn dim(&self, axis: usize) -> usize {
        assert!(axis < self.shape.len(), "axis {} out of range", axis);
        self.shape[axis]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[S::Elem] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S::Elem] {
        &mut self.data
    }

    /// Scalar payload of a rank-0 tensor.
    ///
    /// # Panics
    /// Panics if the tensor is not rank 0.
    pub fn scalar_value(&self) -> S::Elem {
        assert!(self.shape.is_empty(), "tensor of rank {} is not a scalar", self.rank());
        self.data[0]
    }

    /// Entry at a multi-index.
    ///
    /// # Panics
    /// Panics if the index has the wrong length or is out of bounds.
    pub fn get(&self, index: &[usize]) -> S::Elem {
        self.data[self.offset(index)]
    }

    /// Overwrites the entry at a multi-index.
    ///
    /// # Panics
    /// Panics if the index has the wrong length or is out of bounds.
    pub fn set(&mut self, index: &[usize], value: S::Elem) {
        let off = self.offset(index);
        self.data[off] = value;
    }

    fn offset(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.shape.len(), "index rank mismatch");
        let mut off = 0;
        for (k, (&i, &d)) in index.iter().zip(self.shape.iter()).enumerate() {
            assert!(i < d, "index {} out of bounds on axis {}", i, k);
            off = off * d + i;
        }
        off
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![0usize; self.shape.len()];
        let mut acc = 1;
        for k in (0..self.shape.len()).rev() {
            strides[k] = acc;
            acc *= self.shape[k];
        }
        strides
    }

    /// Same data under a new shape of equal volume.
    pub fn reshape(&self, shape: Vec<usize>) -> Result<Self, TensorError> {
        let to: usize = shape.iter().product();
        if to != self.data.len() {
            return Err(TensorError::ReshapeLength { from: self.data.len(), to });
        }
        Ok(Tensor { shape, data: self.data.clone() })
    }

    /// Outer product; the factors' axes are concatenated in order.
    pub fn tensor_product(&self, other: &Tensor<S>) -> Tensor<S> {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for &a in &self.data {
            for &b in &other.data {
                data.push(S::mul(a, b));
            }
        }
        Tensor { shape, data }
    }

    /// Sums the diagonal over axes `a` and `b` (a cap applied to two wires of
    /// the same tensor). Output keeps the remaining axes in order.
    pub fn contract_pair(&self, a: usize, b: usize) -> Result<Tensor<S>, TensorError> {
        let rank = self.rank();
        if a >= rank {
            return Err(TensorError::AxisOutOfRange { axis: a, rank });
        }
        if b >= rank {
            return Err(TensorError::AxisOutOfRange { axis: b, rank });
        }
        if a == b {
            return Err(TensorError::Wiring("cannot contract an axis with itself"));
        }
        if self.shape[a] != self.shape[b] {
            return Err(TensorError::DimMismatch { left: self.shape[a], right: self.shape[b] });
        }
        let d = self.shape[a];
        let strides = self.strides();
        let diag_stride = strides[a] + strides[b];
        let kept: Vec<usize> = (0..rank).filter(|&k| k != a && k != b).collect();
        let out_shape: Vec<usize> = kept.iter().map(|&k| self.shape[k]).collect();
        let out_len: usize = out_shape.iter().product();

        let mut data = Vec::with_capacity(out_len);
        let mut idx = vec![0usize; kept.len()];
        for _ in 0..out_len {
            let mut base = 0;
            for (k, &axis) in kept.iter().enumerate() {
                base += idx[k] * strides[axis];
            }
            let mut acc = S::zero();
            for t in 0..d {
                acc = S::add(acc, self.data[base + t * diag_stride]);
            }
            data.push(acc);
            increment(&mut idx, &out_shape);
        }
        Ok(Tensor { shape: out_shape, data })
    }

    /// Reorders axes: output axis `k` is input axis `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Tensor<S>, TensorError> {
        let rank = self.rank();
        if perm.len() != rank || !is_permutation(perm) {
            return Err(TensorError::NotAPermutation);
        }
        let in_strides = self.strides();
        let out_shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let contrib: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; rank];
        for _ in 0..self.data.len() {
            let mut off = 0;
            for k in 0..rank {
                off += idx[k] * contrib[k];
            }
            data.push(self.data[off]);
            increment(&mut idx, &out_shape);
        }
        Ok(Tensor { shape: out_shape, data })
    }

    /// Elementwise scalar involution.
    pub fn conjugate(&self) -> Tensor<S> {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&x| S::conj(x)).collect(),
        }
    }

    /// Adjoint with respect to a row/column split of the axes: the column
    /// group and row group swap places (each keeping its internal order) and
    /// every entry is conjugated. For a matrix with `rows = [0]`,
    /// `cols = [1]` this is the ordinary transpose.
    pub fn dagger(&self, rows: &[usize], cols: &[usize]) -> Result<Tensor<S>, TensorError> {
        let mut perm = Vec::with_capacity(rows.len() + cols.len());
        perm.extend_from_slice(cols);
        perm.extend_from_slice(rows);
        Ok(self.permute(&perm)?.conjugate())
    }
}

/// `sum_i conj(u_i) * v_i` over two tensors of identical shape.
pub fn inner_product<S: Semiring>(u: &Tensor<S>, v: &Tensor<S>) -> Result<S::Elem, TensorError> {
    if u.shape != v.shape {
        return Err(TensorError::ShapeMismatch);
    }
    let mut acc = S::zero();
    for (&a, &b) in u.data.iter().zip(v.data.iter()) {
        acc = S::add(acc, S::mul(S::conj(a), b));
    }
    Ok(acc)
}

/// Which tensor factor of a composite operator to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of an operator on a composite space `A x B`.
///
/// `op` is either a `(d_a*d_b) x (d_a*d_b)` matrix or the same data as a
/// rank-4 tensor `[d_a, d_b, d_a, d_b]`. Tracing out [`Subsystem::First`]
/// leaves an operator on `B`, tracing out [`Subsystem::Second`] one on `A`.
pub fn partial_trace<S: Semiring>(
    op: &Tensor<S>,
    d_a: usize,
    d_b: usize,
    over: Subsystem,
) -> Result<Tensor<S>, TensorError> {
    let composite = d_a * d_b;
    let quartic = match op.rank() {
        2 => {
            if op.shape() != [composite, composite] {
                return Err(TensorError::ShapeMismatch);
            }
            op.reshape(vec![d_a, d_b, d_a, d_b])?
        }
        4 => {
            if op.shape() != [d_a, d_b, d_a, d_b] {
                return Err(TensorError::ShapeMismatch);
            }
            op.clone()
        }
        rank => return Err(TensorError::AxisOutOfRange { axis: 4, rank }),
    };
    match over {
        Subsystem::First => quartic.contract_pair(0, 2),
        Subsystem::Second => quartic.contract_pair(1, 3),
    }
}

/// A contraction plan over the concatenated axes of a factor list.
///
/// Axes are numbered globally: factor 0 contributes indices `0..r0`, factor 1
/// the next `r1`, and so on. `pairs` lists the index pairs joined by caps and
/// `output` lists every surviving index in the order the result should carry
/// them. Pairs are canonicalised (sorted, each with the smaller index first)
/// so plans that differ only in pair order evaluate identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexWiring {
    pairs: Vec<(usize, usize)>,
    output: Vec<usize>,
    total: usize,
}

impl IndexWiring {
    /// Builds and validates a plan. Every global index must appear exactly
    /// once, either in one pair or in the output list.
    pub fn new(pairs: Vec<(usize, usize)>, output: Vec<usize>) -> Result<Self, TensorError> {
        let total = pairs.len() * 2 + output.len();
        let mut seen = vec![false; total];
        let mut mark = |i: usize| -> Result<(), TensorError> {
            if i >= total {
                return Err(TensorError::Wiring("index beyond the plan's total"));
            }
            if seen[i] {
                return Err(TensorError::Wiring("index used twice"));
            }
            seen[i] = true;
            Ok(())
        };
        let mut canonical = Vec::with_capacity(pairs.len());
        for (i, j) in pairs {
            if i == j {
                return Err(TensorError::Wiring("pair joins an index with itself"));
            }
            mark(i)?;
            mark(j)?;
            canonical.push((i.min(j), i.max(j)));
        }
        for &o in &output {
            mark(o)?;
        }
        canonical.sort_unstable();
        Ok(IndexWiring { pairs: canonical, output, total })
    }

    /// Plan whose output keeps all unpaired indices in ascending order.
    pub fn with_ascending_output(
        pairs: Vec<(usize, usize)>,
        total: usize,
    ) -> Result<Self, TensorError> {
        let mut used = vec![false; total];
        for &(i, j) in &pairs {
            if i >= total || j >= total {
                return Err(TensorError::Wiring("index beyond the plan's total"));
            }
            used[i] = true;
            used[j] = true;
        }
        let output: Vec<usize> = (0..total).filter(|&k| !used[k]).collect();
        Self::new(pairs, output)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn output(&self) -> &[usize] {
        &self.output
    }

    pub fn total_indices(&self) -> usize {
        self.total
    }
}

/// Evaluates a wiring plan over a list of factors.
///
/// Equivalent to taking the full tensor product, applying every contraction
/// pair, and permuting the survivors into output order; factors are absorbed
/// one at a time and pairs contracted as soon as both ends exist, so the full
/// product is never materialised.
pub fn apply_wiring<S: Semiring>(
    wiring: &IndexWiring,
    factors: &[&Tensor<S>],
) -> Result<Tensor<S>, TensorError> {
    if factors.is_empty() {
        return Err(TensorError::Wiring("no factors"));
    }
    let total: usize = factors.iter().map(|f| f.rank()).sum();
    if total != wiring.total_indices() {
        return Err(TensorError::Wiring("factor ranks do not sum to the plan's total"));
    }
    let mut dims = Vec::with_capacity(total);
    for f in factors {
        dims.extend_from_slice(f.shape());
    }
    for &(i, j) in wiring.pairs() {
        if dims[i] != dims[j] {
            return Err(TensorError::DimMismatch { left: dims[i], right: dims[j] });
        }
    }

    let mut acc = Tensor::scalar(S::one());
    // Global index carried by each axis of `acc`.
    let mut live: Vec<usize> = Vec::new();
    let mut done = vec![false; wiring.pairs().len()];
    let mut next_global = 0usize;

    for f in factors {
        let factor_globals: Vec<usize> = (next_global..next_global + f.rank()).collect();
        next_global += f.rank();
        let (next_acc, next_live) = absorb(&acc, &live, f, &factor_globals, wiring, &mut done)?;
        acc = next_acc;
        live = next_live;
    }
    debug_assert!(done.iter().all(|&d| d));

    let mut perm = Vec::with_capacity(wiring.output().len());
    for &g in wiring.output() {
        match live.iter().position(|&x| x == g) {
            Some(p) => perm.push(p),
            None => return Err(TensorError::Wiring("output index was contracted away")),
        }
    }
    acc.permute(&perm)
}

/// Where a global wiring index currently lives.
enum AxisHome {
    Acc(usize),
    Factor(usize),
}

/// Multiplies `factor` into `acc` while simultaneously summing over every
/// wiring pair whose two ends are present afterwards. The raw product is
/// never materialised: each output cell is a sum over the newly bound pair
/// dimensions, so the intermediate size is bounded by the kept axes alone.
/// Pairs joining two axes of the same tensor walk its diagonal.
fn absorb<S: Semiring>(
    acc: &Tensor<S>,
    acc_globals: &[usize],
    factor: &Tensor<S>,
    factor_globals: &[usize],
    wiring: &IndexWiring,
    done: &mut [bool],
) -> Result<(Tensor<S>, Vec<usize>), TensorError> {
    let locate = |g: usize| -> Option<AxisHome> {
        acc_globals
            .iter()
            .position(|&x| x == g)
            .map(AxisHome::Acc)
            .or_else(|| factor_globals.iter().position(|&x| x == g).map(AxisHome::Factor))
    };

    // Role per axis: kept (None) or bound to summation slot k (Some(k)).
    let mut acc_role: Vec<Option<usize>> = vec![None; acc.rank()];
    let mut fac_role: Vec<Option<usize>> = vec![None; factor.rank()];
    let mut sum_shape: Vec<usize> = Vec::new();
    for (pi, &(i, j)) in wiring.pairs().iter().enumerate() {
        if done[pi] {
            continue;
        }
        let (Some(a), Some(b)) = (locate(i), locate(j)) else { continue };
        let slot = sum_shape.len();
        let dim = match a {
            AxisHome::Acc(k) => acc.dim(k),
            AxisHome::Factor(k) => factor.dim(k),
        };
        sum_shape.push(dim);
        for end in [a, b] {
            match end {
                AxisHome::Acc(k) => acc_role[k] = Some(slot),
                AxisHome::Factor(k) => fac_role[k] = Some(slot),
            }
        }
        done[pi] = true;
    }

    let mut out_shape = Vec::new();
    let mut out_globals = Vec::new();
    let acc_strides = acc.strides();
    let fac_strides = factor.strides();
    // Per output axis and per summation slot: how far one step moves each
    // tensor's flat offset. A slot whose pair sits inside one tensor gets
    // both axis strides added, which walks that tensor's diagonal.
    let mut out_acc_stride = Vec::new();
    let mut out_fac_stride = Vec::new();
    let mut sum_acc_stride = vec![0usize; sum_shape.len()];
    let mut sum_fac_stride = vec![0usize; sum_shape.len()];
    for (k, role) in acc_role.iter().enumerate() {
        match role {
            None => {
                out_shape.push(acc.dim(k));
                out_globals.push(acc_globals[k]);
                out_acc_stride.push(acc_strides[k]);
                out_fac_stride.push(0);
            }
            Some(s) => sum_acc_stride[*s] += acc_strides[k],
        }
    }
    for (k, role) in fac_role.iter().enumerate() {
        match role {
            None => {
                out_shape.push(factor.dim(k));
                out_globals.push(factor_globals[k]);
                out_acc_stride.push(0);
                out_fac_stride.push(fac_strides[k]);
            }
            Some(s) => sum_fac_stride[*s] += fac_strides[k],
        }
    }

    let out_len: usize = out_shape.iter().product();
    let sum_len: usize = sum_shape.iter().product();
    let mut out_data = Vec::with_capacity(out_len);
    let mut out_idx = vec![0usize; out_shape.len()];
    let mut sum_idx = vec![0usize; sum_shape.len()];
    let mut base_a = 0usize;
    let mut base_f = 0usize;
    // The hottest case by far is a single bound pair: a plain strided dot
    // product, worth keeping free of odometer bookkeeping.
    let single = (sum_shape.len() == 1).then(|| (sum_acc_stride[0], sum_fac_stride[0]));
    for _ in 0..out_len {
        let mut cell = S::zero();
        let mut off_a = base_a;
        let mut off_f = base_f;
        if let Some((sa, sf)) = single {
            for _ in 0..sum_len {
                cell = S::add(cell, S::mul(acc.data()[off_a], factor.data()[off_f]));
                off_a += sa;
                off_f += sf;
            }
        } else {
            // A full odometer cycle leaves `sum_idx` back at zero.
            for _ in 0..sum_len {
                cell = S::add(cell, S::mul(acc.data()[off_a], factor.data()[off_f]));
                step(&mut sum_idx, &sum_shape, &mut off_a, &sum_acc_stride, &mut off_f, &sum_fac_stride);
            }
        }
        out_data.push(cell);
        step(&mut out_idx, &out_shape, &mut base_a, &out_acc_stride, &mut base_f, &out_fac_stride);
    }
    Ok((Tensor::new(out_shape, out_data)?, out_globals))
}

/// Row-major odometer step that keeps two flat offsets in sync with the
/// multi-index.
fn step(
    idx: &mut [usize],
    shape: &[usize],
    off_a: &mut usize,
    stride_a: &[usize],
    off_f: &mut usize,
    stride_f: &[usize],
) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        *off_a += stride_a[k];
        *off_f += stride_f[k];
        if idx[k] < shape[k] {
            return;
        }
        *off_a -= stride_a[k] * shape[k];
        *off_f -= stride_f[k] * shape[k];
        idx[k] = 0;
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

fn increment(idx: &mut [usize], shape: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return;
        }
        idx[k] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn random_real(rng: &mut ChaCha8Rng, shape: &[usize]) -> RealTensor {
        let len = shape.iter().product();
        let data: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        Tensor::new(shape.to_vec(), data).unwrap()
    }

    fn random_bool(rng: &mut ChaCha8Rng, shape: &[usize]) -> BoolTensor {
        let len = shape.iter().product();
        let data: Vec<bool> = (0..len).map(|_| rng.random_bool(0.5)).collect();
        Tensor::new(shape.to_vec(), data).unwrap()
    }

    /// Product-everything-then-contract reference evaluator.
    fn naive_apply_wiring<S: Semiring>(
        wiring: &IndexWiring,
        factors: &[&Tensor<S>],
    ) -> Tensor<S> {
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = acc.tensor_product(f);
        }
        let mut live: Vec<usize> = (0..wiring.total_indices()).collect();
        for &(i, j) in wiring.pairs() {
            let a = live.iter().position(|&x| x == i).unwrap();
            let b = live.iter().position(|&x| x == j).unwrap();
            acc = acc.contract_pair(a, b).unwrap();
            live.remove(a.max(b));
            live.remove(a.min(b));
        }
        let perm: Vec<usize> = wiring
            .output()
            .iter()
            .map(|&g| live.iter().position(|&x| x == g).unwrap())
            .collect();
        acc.permute(&perm).unwrap()
    }

    fn max_abs_diff(a: &RealTensor, b: &RealTensor) -> f64 {
        assert_eq!(a.shape(), b.shape());
        a.data()
            .iter()
            .zip(b.data())
            .map(|(&x, &y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn new_rejects_wrong_data_length() {
        let err = RealTensor::new(vec![2, 3], vec![0.0; 5]).unwrap_err();
        assert_eq!(err, TensorError::DataLength { expected: 6, got: 5 });
    }

    #[test]
    fn product_of_two_vectors() {
        let u = RealTensor::vector(&[1.0, 2.0]);
        let v = RealTensor::vector(&[3.0, 4.0]);
        let p = u.tensor_product(&v);
        assert_eq!(p.shape(), &[2, 2]);
        assert_eq!(p.data(), &[3.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn product_shape_is_concatenation() {
        let mut r = rng(11);
        let a = random_real(&mut r, &[2, 3]);
        let b = random_real(&mut r, &[4]);
        let p = a.tensor_product(&b);
        assert_eq!(p.shape(), &[2, 3, 4]);
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..4 {
                    assert_eq!(p.get(&[i, j, k]), a.get(&[i, j]) * b.get(&[k]));
                }
            }
        }
    }

    #[test]
    fn contract_matrix_vector_matches_loop_oracle() {
        let mut r = rng(12);
        for _ in 0..20 {
            let m = random_real(&mut r, &[3, 4]);
            let v = random_real(&mut r, &[4]);
            let joined = m.tensor_product(&v);
            let got = joined.contract_pair(1, 2).unwrap();
            for i in 0..3 {
                let mut want = 0.0;
                for j in 0..4 {
                    want += m.get(&[i, j]) * v.get(&[j]);
                }
                assert!((got.get(&[i]) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn contracting_eta_gives_the_dimension() {
        for d in 1..=6 {
            let circle = RealTensor::eta_state(d).contract_pair(0, 1).unwrap();
            assert_eq!(circle.rank(), 0);
            assert_eq!(circle.scalar_value(), d as f64);
        }
        // Over the Booleans the circle collapses to truth.
        let circle = BoolTensor::eta_state(3).contract_pair(0, 1).unwrap();
        assert!(circle.scalar_value());
    }

    #[test]
    fn contract_rejects_mismatched_dims_and_bad_axes() {
        let t = RealTensor::zeros(vec![2, 3]);
        assert_eq!(
            t.contract_pair(0, 1).unwrap_err(),
            TensorError::DimMismatch { left: 2, right: 3 }
        );
        assert!(matches!(t.contract_pair(0, 5), Err(TensorError::AxisOutOfRange { .. })));
        assert!(matches!(t.contract_pair(1, 1), Err(TensorError::Wiring(_))));
    }

    #[test]
    fn permute_interleaves_composite_wires() {
        // Regrouping A x C x C' x A' into A x A' x C x C', checked entry by
        // entry against direct index arithmetic.
        let mut r = rng(13);
        let t = random_real(&mut r, &[2, 3, 3, 2]);
        let p = t.permute(&[0, 3, 1, 2]).unwrap();
        assert_eq!(p.shape(), &[2, 2, 3, 3]);
        for a in 0..2 {
            for a2 in 0..2 {
                for c in 0..3 {
                    for c2 in 0..3 {
                        assert_eq!(p.get(&[a, a2, c, c2]), t.get(&[a, c, c2, a2]));
                    }
                }
            }
        }
    }

    #[test]
    fn permute_round_trips_through_inverse() {
        let mut r = rng(14);
        let t = random_real(&mut r, &[2, 3, 4]);
        let perm = [2, 0, 1];
        let mut inverse = [0usize; 3];
        for (k, &p) in perm.iter().enumerate() {
            inverse[p] = k;
        }
        let back = t.permute(&perm).unwrap().permute(&inverse).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn dagger_of_a_matrix_is_its_transpose() {
        let m = RealTensor::new(vec![2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let d = m.dagger(&[0], &[1]).unwrap();
        assert_eq!(d.data(), &[1.0, 3.0, 2.0, 4.0]);
    }

    #[test]
    fn dagger_then_contract_computes_the_inner_product() {
        let mut r = rng(15);
        for _ in 0..20 {
            let u = random_real(&mut r, &[5]);
            let v = random_real(&mut r, &[5]);
            // A state daggered into an effect, then applied to another state.
            let effect = u.dagger(&[0], &[]).unwrap();
            let applied = effect.tensor_product(&v).contract_pair(0, 1).unwrap();
            let direct = inner_product(&u, &v).unwrap();
            assert!((applied.scalar_value() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_product_satisfies_cauchy_schwarz() {
        let mut r = rng(16);
        for _ in 0..100 {
            let u = random_real(&mut r, &[6]);
            let v = random_real(&mut r, &[6]);
            let uv = inner_product(&u, &v).unwrap();
            let uu = inner_product(&u, &u).unwrap();
            let vv = inner_product(&v, &v).unwrap();
            assert!(uv * uv <= uu * vv + 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_projector_on_basis_product() {
        // |00><00| on A x B traced over B leaves |0><0|.
        let mut op = RealTensor::zeros(vec![4, 4]);
        op.set(&[0, 0], 1.0);
        let left = partial_trace(&op, 2, 2, Subsystem::Second).unwrap();
        assert_eq!(left.data(), &[1.0, 0.0, 0.0, 0.0]);
        let right = partial_trace(&op, 2, 2, Subsystem::First).unwrap();
        assert_eq!(right.data(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn partial_trace_splits_product_operators() {
        let mut r = rng(17);
        let a = random_real(&mut r, &[3, 3]);
        let b = random_real(&mut r, &[2, 2]);
        // kron(a, b) as a rank-4 tensor [3, 2, 3, 2].
        let joint = a.tensor_product(&b).permute(&[0, 2, 1, 3]).unwrap();
        let tr_b: f64 = (0..2).map(|i| b.get(&[i, i])).sum();
        let got = partial_trace(&joint, 3, 2, Subsystem::Second).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((got.get(&[i, j]) - a.get(&[i, j]) * tr_b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_of_maximally_entangled_projector() {
        // Projector onto (e1 x e1 + e2 x e2)/sqrt(2): both reduced states are
        // the maximally mixed 0.5 * identity.
        let psi = RealTensor::vector(&[
            core::f64::consts::FRAC_1_SQRT_2,
            0.0,
            0.0,
            core::f64::consts::FRAC_1_SQRT_2,
        ]);
        let proj = psi.tensor_product(&psi);
        let reduced = partial_trace(&proj, 2, 2, Subsystem::Second).unwrap();
        let want = [0.5, 0.0, 0.0, 0.5];
        for (g, w) in reduced.data().iter().zip(want.iter()) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn wiring_rejects_reused_and_out_of_range_indices() {
        assert!(IndexWiring::new(vec![(0, 0)], vec![]).is_err());
        assert!(IndexWiring::new(vec![(0, 1), (1, 2)], vec![3, 4]).is_err());
        assert!(IndexWiring::new(vec![(0, 9)], vec![1]).is_err());
    }

    #[test]
    fn single_factor_no_pairs_is_identity() {
        let mut r = rng(18);
        let t = random_real(&mut r, &[2, 3]);
        let w = IndexWiring::new(vec![], vec![0, 1]).unwrap();
        assert_eq!(apply_wiring(&w, &[&t]).unwrap(), t);
    }

    #[test]
    fn subject_verb_object_plan_matches_triple_loop() {
        let mut r = rng(19);
        for _ in 0..20 {
            let subj = random_real(&mut r, &[2]);
            let verb = random_real(&mut r, &[2, 3, 4]);
            let obj = random_real(&mut r, &[4]);
            let w = IndexWiring::new(vec![(0, 1), (3, 4)], vec![2]).unwrap();
            let got = apply_wiring(&w, &[&subj, &verb, &obj]).unwrap();
            for s in 0..3 {
                let mut want = 0.0;
                for i in 0..2 {
                    for k in 0..4 {
                        want += subj.get(&[i]) * verb.get(&[i, s, k]) * obj.get(&[k]);
                    }
                }
                assert!((got.get(&[s]) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pair_order_does_not_change_the_result() {
        let mut r = rng(20);
        let subj = random_real(&mut r, &[3]);
        let verb = random_real(&mut r, &[3, 2, 3]);
        let obj = random_real(&mut r, &[3]);
        let w1 = IndexWiring::new(vec![(0, 1), (3, 4)], vec![2]).unwrap();
        let w2 = IndexWiring::new(vec![(4, 3), (1, 0)], vec![2]).unwrap();
        let a = apply_wiring(&w1, &[&subj, &verb, &obj]).unwrap();
        let b = apply_wiring(&w2, &[&subj, &verb, &obj]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn eager_evaluation_agrees_with_naive_composition() {
        let mut r = rng(21);
        for _ in 0..20 {
            let a = random_real(&mut r, &[2, 3]);
            let b = random_real(&mut r, &[3, 2, 2]);
            let c = random_real(&mut r, &[2]);
            let w = IndexWiring::new(vec![(1, 2), (4, 5)], vec![3, 0]).unwrap();
            let eager = apply_wiring(&w, &[&a, &b, &c]).unwrap();
            let naive = naive_apply_wiring(&w, &[&a, &b, &c]);
            assert!(max_abs_diff(&eager, &naive) < 1e-12);
        }
    }

    #[test]
    fn boolean_wiring_composes_relations() {
        let mut r = rng(22);
        for _ in 0..20 {
            let f = random_bool(&mut r, &[3, 3]);
            let g = random_bool(&mut r, &[3, 3]);
            let w = IndexWiring::new(vec![(1, 2)], vec![0, 3]).unwrap();
            let got = apply_wiring(&w, &[&f, &g]).unwrap();
            let naive = naive_apply_wiring(&w, &[&f, &g]);
            assert_eq!(got, naive);
            for i in 0..3 {
                for k in 0..3 {
                    let want = (0..3).any(|j| f.get(&[i, j]) && g.get(&[j, k]));
                    assert_eq!(got.get(&[i, k]), want);
                }
            }
        }
    }

    #[test]
    fn wiring_can_close_a_plan_to_a_scalar() {
        let u = RealTensor::vector(&[1.0, 2.0]);
        let v = RealTensor::vector(&[5.0, 7.0]);
        let w = IndexWiring::new(vec![(0, 1)], vec![]).unwrap();
        let s = apply_wiring(&w, &[&u, &v]).unwrap();
        assert_eq!(s.scalar_value(), 19.0);
    }

    #[test]
    fn ascending_output_plan_keeps_residual_order() {
        let w = IndexWiring::with_ascending_output(vec![(0, 3)], 5).unwrap();
        assert_eq!(w.output(), &[1, 2, 4]);
    }

    #[test]
    fn identical_inputs_give_identical_results() {
        let mut r = rng(23);
        let a = random_real(&mut r, &[3, 3, 2]);
        let b = random_real(&mut r, &[2, 3]);
        let w = IndexWiring::new(vec![(2, 3), (1, 4)], vec![0]).unwrap();
        let first = apply_wiring(&w, &[&a, &b]).unwrap();
        let second = apply_wiring(&w, &[&a, &b]).unwrap();
        assert_eq!(first, second);
    }
}
