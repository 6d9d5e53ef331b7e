use super::{Matrix, Vector};
use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;

/// LU factorization with partial pivoting, `P A = L U`, stored compactly.
///
/// Factor once, solve many times: every resolvent of a linear operator keeps
/// one of these for its whole run.
#[derive(Debug, Clone)]
pub struct LuFactor<T> {
    n: usize,
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> LuFactor<T> {
    /// Pivots below `64 ε · max(1, max|a_ij|)` (≈1.4e-14 in `f64`) are treated as singular.
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        let n = a.require_square("LU factorization")?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = T::epsilon() * T::of(64.0) * a.max_abs().max(T::one());

        for k in 0..n {
            let (p, pivot_abs) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot_abs > threshold) {
                return Err(Error::Singular {
                    column: k,
                    pivot: pivot_abs.to_f64_lossy(),
                });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(LuFactor { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &Vector<T>) -> Result<Vector<T>> {
        check_dim("LU solve right-hand side", self.n, b.dim())?;
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in 0..i {
                acc -= row[j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= row[j] * x[j];
            }
            x[i] = acc / row[i];
        }
        Ok(Vector::from_vec(x))
    }
}

/// Solves `a x = b` with a one-shot factorization.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &Vector<T>) -> Result<Vector<T>> {
    LuFactor::new(a)?.solve(b)
}
