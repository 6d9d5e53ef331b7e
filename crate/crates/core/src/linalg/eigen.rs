use super::Matrix;
use crate::error::Result;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method, ascending.
///
/// Only the symmetric part of the input is used. Sweeps stop when the
/// off-diagonal Frobenius norm falls below `ε · ‖A‖_F` (about 1e-16 relative in
/// `f64`, well inside the 1e-12 off-diagonal target for unit-scale matrices).
pub fn symmetric_eigenvalues<T: Scalar>(a: &Matrix<T>) -> Result<Vec<T>> {
    let n = a.require_square("symmetric eigenvalues")?;
    let mut m = a.symmetric_part();
    let total: T = m.as_slice().iter().map(|&v| v * v).sum::<T>().sqrt();
    let target = T::epsilon() * total;

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        if off <= target || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, p, q);
            }
        }
    }
    let mut eig: Vec<T> = (0..n).map(|i| m[(i, i)]).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(eig)
}

pub fn min_symmetric_eigenvalue<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    Ok(symmetric_eigenvalues(a)?
        .first()
        .copied()
        .unwrap_or_else(T::infinity))
}

fn off_diagonal_norm<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)] * m[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `m[p][q]` with a two-sided Givens rotation.
fn rotate<T: Scalar>(m: &mut Matrix<T>, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq == T::zero() {
        return;
    }
    let n = m.rows();
    let app = m[(p, p)];
    let aqq = m[(q, q)];
    let theta = (aqq - app) / (T::of(2.0) * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = T::zero();
    m[(q, p)] = T::zero();
}
