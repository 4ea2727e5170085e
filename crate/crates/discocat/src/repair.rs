//! Numerical repair of almost-valid operators.
//!
//! Closed-form composites like V ρ Vᵀ and Hadamard products are symmetric
//! and positive in exact arithmetic, but rounding leaves asymmetries and
//! tiny negative eigenvalues that scale with the operator's magnitude,
//! while the core validates against fixed absolute floors. Repairing here
//! keeps that strict core gate meaningful: only deviations a caller
//! explicitly tolerates are smoothed away.

use discocat_core::density::{DensityError, DensityMatrix, PositiveOperator};
use discocat_core::RealTensor;

#[derive(Debug, thiserror::Error)]
pub enum RepairError {
    #[error("operator is {deviation:.3e} from symmetric, more than the allowed {tolerance:.3e}")]
    Asymmetric { deviation: f64, tolerance: f64 },
    #[error("operator trace {trace:.3e} is not positive")]
    NonPositiveTrace { trace: f64 },
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// The exactly symmetric average of a square matrix and its transpose.
/// Returns the largest entry-wise deviation alongside.
pub fn symmetrized(m: &RealTensor) -> (RealTensor, f64) {
    assert!(m.rank() == 2 && m.dim(0) == m.dim(1), "symmetrized needs a square matrix");
    let d = m.dim(0);
    let mut out = RealTensor::zeros(vec![d, d]);
    let mut deviation = 0.0f64;
    for i in 0..d {
        for j in i..d {
            let a = m.get(&[i, j]);
            let b = m.get(&[j, i]);
            deviation = deviation.max((a - b).abs());
            let avg = 0.5 * (a + b);
            out.set(&[i, j], avg);
            out.set(&[j, i], avg);
        }
    }
    (out, deviation)
}

/// Symmetrizes and trace-normalizes `m`, then validates it as a density
/// matrix through the core's strict checks. `symmetry_tolerance` bounds
/// the asymmetry that may be averaged away, relative to the largest
/// entry; anything worse is reported instead of repaired.
pub fn to_density(m: &RealTensor, symmetry_tolerance: f64) -> Result<DensityMatrix, RepairError> {
    let (sym, deviation) = symmetrized(m);
    let scale = m.data().iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(f64::MIN_POSITIVE);
    if deviation > symmetry_tolerance * scale {
        return Err(RepairError::Asymmetric { deviation, tolerance: symmetry_tolerance * scale });
    }
    let d = sym.dim(0);
    let trace: f64 = (0..d).map(|i| sym.get(&[i, i])).sum();
    // NaN traces land here too, which is the right call.
    if trace.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
        return Err(RepairError::NonPositiveTrace { trace });
    }
    // Dividing by the trace first puts eigenvalues on the unit scale, so
    // the core's absolute positivity floor acts as a relative one.
    let data: Vec<f64> = sym.data().iter().map(|x| x / trace).collect();
    let scaled = RealTensor::new(vec![d, d], data).expect("shape is preserved");
    Ok(PositiveOperator::new(scaled)?.normalized()?)
}
