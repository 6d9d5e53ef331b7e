use super::{Matrix, Vector};
use crate::scalar::Scalar;

/// Largest singular value `‖K‖` by power iteration on `KᵀK`.
///
/// Stops when the estimate changes by less than `rel_tol` relatively, or after
/// `max_iters` iterations (the last estimate is returned either way).
pub fn spectral_norm<T: Scalar>(k: &Matrix<T>, rel_tol: T, max_iters: usize) -> T {
    let n = k.cols();
    if n == 0 || k.rows() == 0 {
        return T::zero();
    }
    // Deterministic start with no special structure.
    let mut v: Vector<T> = (0..n)
        .map(|i| T::one() + T::of(0.5) * T::of_usize(i % 7) / T::of(7.0))
        .collect();
    let norm0 = v.norm();
    v = v * (T::one() / norm0);

    let mut estimate = T::zero();
    for _ in 0..max_iters {
        let w = k.matvec_t(&k.matvec(&v));
        let wn = w.norm();
        if wn == T::zero() {
            return T::zero();
        }
        let next = wn.sqrt();
        v = w * (T::one() / wn);
        let converged = (next - estimate).abs() <= rel_tol * next;
        estimate = next;
        if converged {
            break;
        }
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_norm() {
        let k = Matrix::<f64>::from_f64_rows(&[&[3.0, 0.0, 0.0], &[0.0, -5.0, 0.0]]);
        assert!((spectral_norm(&k, 1e-12, 1000) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(spectral_norm(&Matrix::<f64>::zeros(2, 3), 1e-10, 10), 0.0);
    }
}
