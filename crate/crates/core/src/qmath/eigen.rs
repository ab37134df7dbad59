//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! functions built on it.

use num_traits::Zero;

use crate::error::Result;
use crate::qmath::matrix::CMatrix;
use crate::scalar::{c, re, Real, C};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and unitary eigenvector matrix (columns) of a
/// Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn new(m: &CMatrix<T>) -> Result<Self> {
        m.ensure_hermitian()?;
        Ok(jacobi(m.hermitian_part()))
    }

    /// `V f(Λ) V†` for a scalar function of the eigenvalues.
    pub fn reconstruct(&self, f: impl Fn(T) -> C<T>) -> CMatrix<T> {
        let n = self.values.len();
        let fv: Vec<C<T>> = self.values.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| acc + self.vectors[(i, k)] * fv[k] * self.vectors[(j, k)].conj())
        })
    }

    pub fn column(&self, k: usize) -> Vec<C<T>> {
        (0..self.values.len()).map(|i| self.vectors[(i, k)]).collect()
    }
}

fn off_diagonal_norm<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi<T: Real>(mut a: CMatrix<T>) -> HermitianEigen<T> {
    let n = a.dim();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm().max(T::min_positive_value());
    let stop = T::epsilon() * scale * T::lit(0.1);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= T::min_positive_value() {
                    continue;
                }
                // phase-reduce to a real symmetric 2x2 block, then rotate
                let phase = apq / c(g, T::zero()); // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (T::lit(2.0) * g);
                let t = {
                    let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
                    sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                // J = D·R on (p,q): J_pp = c, J_pq = s, J_qp = -s e^{-iφ}, J_qq = c e^{-iφ}
                let em = phase.conj();
                let jpp = re(cs);
                let jpq = re(sn);
                let jqp = em * (-sn);
                let jqq = em * cs;

                // A <- A J (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                // A <- J† A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();
                a[(p, p)] = re(a[(p, p)].re);
                a[(q, q)] = re(a[(q, q)].re);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    HermitianEigen { values, vectors }
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigenvalues_hermitian<T: Real>(m: &CMatrix<T>) -> Result<Vec<T>> {
    Ok(HermitianEigen::new(m)?.values)
}

/// `exp(-i · angle_scale · h)` for Hermitian `h`.
pub fn expm_hermitian<T: Real>(h: &CMatrix<T>, angle_scale: T) -> Result<CMatrix<T>> {
    let eig = HermitianEigen::new(h)?;
    Ok(eig.reconstruct(|l| {
        let phi = -angle_scale * l;
        c(phi.cos(), phi.sin())
    }))
}

/// `½ Σ |λ_k(a - b)|`.
pub fn trace_distance<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<T> {
    let diff = a - b;
    let vals = eigenvalues_hermitian(&diff)?;
    Ok(vals.iter().fold(T::zero(), |acc, l| acc + l.abs()) * T::lit(0.5))
}
