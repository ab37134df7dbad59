//! Projection of a Hermitian trace-one matrix onto the density matrices that
//! share its eigenvectors.

use crate::error::{Error, Result};
use crate::qmath::{CMatrix, HermitianEigen};
use crate::scalar::{re, Real};

/// Allowed trace error on the input.
pub const TRACE_TOL: f64 = 1e-8;

/// Euclidean projection of `v` onto `{x : x_i ≥ 0, Σx_i = 1}`.
///
/// Sort descending, find the largest `k` with `u_k > (Σ_{i≤k} u_i - 1)/k`,
/// and shift every entry by that threshold, clipping at zero.
pub fn project_simplex<T: Real>(v: &[T]) -> Vec<T> {
    let mut u: Vec<T> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumsum = T::zero();
    let mut theta = T::zero();
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - T::one()) / T::from_usize(k + 1).unwrap();
        if uk > t {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(T::zero())).collect()
}

/// Closest positive-semidefinite trace-one matrix with the same eigenvectors.
pub fn project_physical<T: Real>(raw: &CMatrix<T>) -> Result<CMatrix<T>> {
    raw.ensure_hermitian()?;
    let tr = raw.trace().re;
    if (tr - T::one()).abs() > T::lit(TRACE_TOL) {
        return Err(Error::Invariant(format!("trace {} differs from 1 by more than {TRACE_TOL:e}", tr)));
    }
    let eig = HermitianEigen::new(raw)?;
    let projected = project_simplex(&eig.values);
    let out = CMatrix::from_fn(raw.dim(), |i, j| {
        (0..raw.dim()).fold(re(T::zero()), |acc, k| {
            acc + eig.vectors[(i, k)] * eig.vectors[(j, k)].conj() * projected[k]
        })
    });
    Ok(out.hermitian_part())
}
