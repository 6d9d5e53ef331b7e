//! Proximal descriptors and the strongly convex subproblem solver shared by
//! the splitting methods.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{symmetric_eigenvalues, LuFactor, Matrix, Vector};
use crate::scalar::Scalar;

/// `Soft_τ(z) = max{|z| − τ, 0} ⊙ sign(z)`
pub fn soft_threshold<T: Scalar>(z: &Vector<T>, tau: T) -> Vector<T> {
    z.map(|c| {
        let shrunk = c.abs() - tau;
        if shrunk > T::zero() {
            shrunk * c.signum()
        } else {
            T::zero()
        }
    })
}

/// A convex function with a cheap proximal structure.
#[derive(Debug, Clone, PartialEq)]
pub enum ProxDescriptor<T> {
    Zero,
    /// `γ‖x‖₁`
    L1 { weight: T },
    /// `½‖Hx − b‖²`
    Quadratic { h: Matrix<T>, b: Vector<T> },
    /// `⟨a, x⟩`
    Linear { a: Vector<T> },
}

impl<T: Scalar> ProxDescriptor<T> {
    pub fn l1(weight: T) -> Result<Self> {
        if !(weight >= T::zero()) || !weight.is_finite() {
            return Err(Error::InvalidParameter(format!("l1 weight must be nonnegative, got {weight}")));
        }
        Ok(ProxDescriptor::L1 { weight })
    }

    pub fn quadratic(h: Matrix<T>, b: Vector<T>) -> Result<Self> {
        check_dim("quadratic data vector", h.rows(), b.dim())?;
        Ok(ProxDescriptor::Quadratic { h, b })
    }

    /// Dimension fixed by the descriptor's data, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            ProxDescriptor::Zero | ProxDescriptor::L1 { .. } => None,
            ProxDescriptor::Quadratic { h, .. } => Some(h.cols()),
            ProxDescriptor::Linear { a } => Some(a.dim()),
        }
    }

    pub(crate) fn check_dim(&self, context: &'static str, dim: usize) -> Result<()> {
        match self.dim() {
            Some(d) => check_dim(context, dim, d),
            None => Ok(()),
        }
    }

    pub fn value(&self, x: &Vector<T>) -> T {
        match self {
            ProxDescriptor::Zero => T::zero(),
            ProxDescriptor::L1 { weight } => *weight * x.iter().map(|c| c.abs()).sum::<T>(),
            ProxDescriptor::Quadratic { h, b } => T::of(0.5) * (h.matvec(x) - b.clone()).norm_sq(),
            ProxDescriptor::Linear { a } => a.dot(x),
        }
    }

    fn l1_weight(&self) -> T {
        match self {
            ProxDescriptor::L1 { weight } => *weight,
            _ => T::zero(),
        }
    }

    /// `prox_{τf}(z)`.
    pub fn prox(&self, tau: T, z: &Vector<T>) -> Result<Vector<T>> {
        let inv = T::one() / tau;
        Subproblem::new(self, Matrix::identity(z.dim()).scaled(&inv), InnerSolverConfig::default())?
            .solve(&(z * -inv), z)
    }
}

/// Stopping rule for the inner solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolverConfig {
    /// Bound on the prox-gradient mapping norm.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for InnerSolverConfig {
    fn default() -> Self {
        InnerSolverConfig {
            tol: 1e-10,
            max_iters: 5000,
        }
    }
}

/// Strongly convex FISTA for `½xᵀQx + qᵀx + γ‖x‖₁` with constant momentum
/// `(√L − √m)/(√L + √m)` and step `1/L`. Stops once the prox-gradient mapping
/// `L(x − Soft_{γ/L}(x − (Qx + q)/L))` has norm at most `tol`, or at most
/// the rounding floor `√n·ε·(‖q‖ + L‖x‖)` when that is larger.
#[allow(clippy::too_many_arguments)]
pub fn fista_strongly_convex<T: Scalar>(
    q_mat: &Matrix<T>,
    q_vec: &Vector<T>,
    m: T,
    l: T,
    gamma: T,
    x_init: &Vector<T>,
    tol: T,
    max_iters: usize,
) -> Result<Vector<T>> {
    let n = q_mat.require_square("quadratic term")?;
    check_dim("linear term", n, q_vec.dim())?;
    check_dim("initial point", n, x_init.dim())?;
    if !(m > T::zero()) || !(l >= m) || !l.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need 0 < m <= L, got m = {m}, L = {l}"
        )));
    }
    if !(tol > T::zero()) || gamma < T::zero() {
        return Err(Error::InvalidParameter("tolerance must be positive and the l1 weight nonnegative".into()));
    }

    let step = T::one() / l;
    let thresh = gamma * step;
    let (sl, sm) = (l.sqrt(), m.sqrt());
    let beta = (sl - sm) / (sl + sm);
    let prox_grad = |x: &Vector<T>, qx: &Vector<T>| -> Vector<T> {
        let mut g = qx.clone();
        g += q_vec;
        let mut z = x.clone();
        z.axpy(-step, &g);
        soft_threshold(&z, thresh)
    };
    let mapping_norm = |x: &Vector<T>, px: &Vector<T>| (x - px).norm() * l;
    let floor_factor = T::epsilon() * T::of_usize(n).sqrt();
    let q_norm = q_vec.norm();
    let converged = |norm: T, x: &Vector<T>| norm <= tol || norm <= floor_factor * (q_norm + l * x.norm());

    let mut x = x_init.clone();
    let mut qx = q_mat.matvec(&x);
    let mut px = prox_grad(&x, &qx);
    let mut best = mapping_norm(&x, &px);
    if converged(best, &x) {
        return Ok(x);
    }
    let mut y = x.clone();
    let mut qy = qx.clone();
    for _ in 0..max_iters {
        let x_new = prox_grad(&y, &qy);
        let qx_new = q_mat.matvec(&x_new);
        px = prox_grad(&x_new, &qx_new);
        let norm = mapping_norm(&x_new, &px);
        best = best.min(norm);
        if converged(norm, &x_new) {
            return Ok(x_new);
        }
        y = x_new.clone();
        y.axpy(beta, &(&x_new - &x));
        qy = qx_new.clone() * (T::one() + beta);
        qy.axpy(-beta, &qx);
        x = x_new;
        qx = qx_new;
    }
    Err(Error::InnerSolverCap {
        iterations: max_iters,
        achieved: best.to_f64_lossy(),
        tolerance: tol.to_f64_lossy(),
    })
}

#[derive(Debug, Clone)]
enum Solver<T> {
    /// `Q = αI`: closed form through soft-thresholding.
    ScaledIdentity(T),
    Factored(LuFactor<T>),
    Fista { q: Matrix<T>, m: T, l: T },
}

/// `argmin_x f(x) + ½xᵀWx + wᵀx` for a fixed `W` and varying `w`, with the
/// factorization or spectral bounds computed once.
#[derive(Debug, Clone)]
pub(crate) struct Subproblem<T> {
    gamma: T,
    /// Linear part contributed by `f`: `a − Hᵀb`.
    offset: Vector<T>,
    solver: Solver<T>,
    config: InnerSolverConfig,
}

impl<T: Scalar> Subproblem<T> {
    pub(crate) fn new(f: &ProxDescriptor<T>, w: Matrix<T>, config: InnerSolverConfig) -> Result<Self> {
        let n = w.require_square("subproblem weight")?;
        f.check_dim("subproblem function", n)?;
        let (q, offset) = match f {
            ProxDescriptor::Quadratic { h, b } => (w.add(&h.gram()), -&h.matvec_t(b)),
            ProxDescriptor::Linear { a } => (w, a.clone()),
            ProxDescriptor::Zero | ProxDescriptor::L1 { .. } => (w, Vector::zeros(n)),
        };
        let gamma = f.l1_weight();
        let solver = if gamma == T::zero() {
            Solver::Factored(LuFactor::new(&q)?)
        } else if let Some(alpha) = scaled_identity(&q) {
            if !(alpha > T::zero()) {
                return Err(Error::NotPositiveDefinite {
                    min_eigenvalue: alpha.to_f64_lossy(),
                });
            }
            Solver::ScaledIdentity(alpha)
        } else {
            let eig = symmetric_eigenvalues(&q)?;
            let (m, l) = (eig[0], eig[eig.len() - 1]);
            if !(m > T::zero()) {
                return Err(Error::NotPositiveDefinite {
                    min_eigenvalue: m.to_f64_lossy(),
                });
            }
            Solver::Fista { q, m, l }
        };
        Ok(Subproblem {
            gamma,
            offset,
            solver,
            config,
        })
    }

    pub(crate) fn solve(&self, w: &Vector<T>, warm: &Vector<T>) -> Result<Vector<T>> {
        let q = &self.offset + w;
        match &self.solver {
            Solver::Factored(lu) => lu.solve(&-&q),
            Solver::ScaledIdentity(alpha) => Ok(soft_threshold(&(q * (-T::one() / *alpha)), self.gamma / *alpha)),
            Solver::Fista { q: q_mat, m, l } => fista_strongly_convex(
                q_mat,
                &q,
                *m,
                *l,
                self.gamma,
                warm,
                T::of(self.config.tol),
                self.config.max_iters,
            ),
        }
    }
}

fn scaled_identity<T: Scalar>(q: &Matrix<T>) -> Option<T> {
    let alpha = q[(0, 0)];
    let n = q.rows();
    let ok = (0..n).all(|i| (0..n).all(|j| q[(i, j)] == if i == j { alpha } else { T::zero() }));
    ok.then_some(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soft_threshold_examples() {
        let z = Vector::from_vec(vec![2.0, -0.5, 0.0]);
        assert_eq!(soft_threshold(&z, 1.0).as_slice(), &[1.0, 0.0, 0.0]);
        assert_eq!(soft_threshold(&z, 0.0), z);
        let out = soft_threshold(&Vector::<f64>::from_vec(vec![1.2, -0.3]), 0.5);
        assert!((out[0] - 0.7).abs() < 1e-15 && out[1] == 0.0);
    }

    #[test]
    fn fista_unconstrained_quadratic() {
        let q = Matrix::<f64>::identity(3);
        let x = fista_strongly_convex(&q, &Vector::from_vec(vec![-1.0, 0.0, 0.0]), 1.0, 1.0, 0.0, &Vector::zeros(3), 1e-12, 100)
            .unwrap();
        assert!(x.max_abs_diff(&Vector::basis(3, 0)) < 1e-12);
    }

    #[test]
    fn fista_large_weight_gives_zero() {
        let q = Matrix::from_f64_rows(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let qv = Vector::from_vec(vec![0.7, -1.3]);
        let x = fista_strongly_convex(&q, &qv, 0.5, 2.5, 1.3, &Vector::zeros(2), 1e-12, 100).unwrap();
        assert_eq!(x, Vector::zeros(2));
    }

    #[test]
    fn fista_reports_cap() {
        let q = Matrix::from_f64_rows(&[&[1.0, 0.0], &[0.0, 1e-4]]);
        let err = fista_strongly_convex(&q, &Vector::from_vec(vec![1.0, 1.0]), 1e-4, 1.0, 0.0, &Vector::zeros(2), 1e-14, 3)
            .unwrap_err();
        assert!(matches!(err, Error::InnerSolverCap { iterations: 3, .. }));
        assert!(err.is_numerical());
    }

    #[test]
    fn prox_of_each_kind() {
        let z = Vector::from_vec(vec![1.0, -3.0]);
        assert_eq!(ProxDescriptor::Zero.prox(0.5, &z).unwrap(), z);
        let l1 = ProxDescriptor::l1(2.0).unwrap().prox(0.5, &z).unwrap();
        assert_eq!(l1.as_slice(), &[0.0, -2.0]);
        let lin = ProxDescriptor::Linear { a: Vector::from_vec(vec![1.0, 1.0]) }.prox(0.5, &z).unwrap();
        assert_eq!(lin.as_slice(), &[0.5, -3.5]);
        // ½‖x − b‖² with H = I: prox is (z + τb)/(1 + τ)
        let quad = ProxDescriptor::quadratic(Matrix::identity(2), Vector::from_vec(vec![2.0, 0.0])).unwrap();
        let p = quad.prox(1.0, &z).unwrap();
        assert!(p.max_abs_diff(&Vector::from_vec(vec![1.5, -1.5])) < 1e-15);
        assert!(ProxDescriptor::<f64>::l1(-1.0).is_err());
    }

    #[test]
    fn l1_subproblem_with_coupling_uses_fista() {
        // ½xᵀQx + qᵀx + ‖x‖₁ against a brute-force scan on a 2-D instance
        let w = Matrix::from_f64_rows(&[&[3.0, 1.0], &[1.0, 2.0]]);
        let sub = Subproblem::new(&ProxDescriptor::l1(1.0).unwrap(), w.clone(), InnerSolverConfig::default()).unwrap();
        let q = Vector::from_vec(vec![-4.0, 0.5]);
        let x = sub.solve(&q, &Vector::zeros(2)).unwrap();
        let obj = |p: &Vector<f64>| 0.5 * p.dot(&w.matvec(p)) + q.dot(p) + p[0].abs() + p[1].abs();
        let best = obj(&x);
        for k in 0..=400 {
            for l in 0..=400 {
                let p = Vector::from_vec(vec![-1.0 + 0.0075 * k as f64, -1.5 + 0.0075 * l as f64]);
                assert!(obj(&p) >= best - 1e-12);
            }
        }
    }
}
