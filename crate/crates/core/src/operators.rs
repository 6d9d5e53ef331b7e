//! Operator abstractions: resolvents of linear and saddle operators,
//! preconditioned resolvents, the Yosida approximation and monotonicity checks.
//!
//! The iteration engines only ever see the [`Resolvent`] contract, so any
//! operator family with a computable resolvent plugs in without touching them.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{min_symmetric_eigenvalue, LuFactor, Matrix, Vector};
use crate::scalar::Scalar;

/// Tolerance applied to the minimum eigenvalue in monotonicity checks.
pub const MONOTONE_TOL: f64 = 1e-10;

/// A resolvent `J = (I + λM)⁻¹` (or any firmly nonexpansive map used in its
/// place), with `λ` baked in.
pub trait Resolvent<T: Scalar> {
    fn dim(&self) -> usize;

    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>>;

    /// Squared norm used for fixed-point residuals. Preconditioned resolvents
    /// override this with `⟨P d, d⟩`.
    fn metric(&self, d: &Vector<T>) -> T {
        d.norm_sq()
    }
}

impl<T: Scalar, R: Resolvent<T> + ?Sized> Resolvent<T> for &R {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>> {
        (**self).apply(y)
    }
    fn metric(&self, d: &Vector<T>) -> T {
        (**self).metric(d)
    }
}

/// A single-valued operator `x ↦ M x`.
pub trait Operator<T: Scalar> {
    fn dim(&self) -> usize;
    fn apply(&self, x: &Vector<T>) -> Result<Vector<T>>;
}

pub(crate) fn validate_step<T: Scalar>(name: &str, value: T) -> Result<()> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// Result of a monotonicity check on the symmetric part of a linear operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport<T> {
    pub monotone: bool,
    pub min_eigenvalue: T,
}

/// A square matrix acting as a single-valued, possibly non-symmetric operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLinearOperator<T> {
    matrix: Matrix<T>,
}

impl<T: Scalar> DenseLinearOperator<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        matrix.require_square("linear operator")?;
        if !matrix.is_finite() {
            return Err(Error::InvalidParameter("operator has non-finite entries".into()));
        }
        Ok(DenseLinearOperator { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        DenseLinearOperator {
            matrix: Matrix::zeros(dim, dim),
        }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    /// μ-strong monotonicity (plain monotonicity for `mu = 0`): the symmetric
    /// part must have all eigenvalues `≥ μ − 1e-10`.
    pub fn check_monotone(&self, mu: T) -> Result<MonotonicityReport<T>> {
        if mu < T::zero() || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "monotonicity modulus must be nonnegative, got {mu}"
            )));
        }
        let min_eigenvalue = min_symmetric_eigenvalue(&self.matrix)?;
        Ok(MonotonicityReport {
            monotone: min_eigenvalue >= mu - T::of(MONOTONE_TOL),
            min_eigenvalue,
        })
    }
}

impl<T: Scalar> Operator<T> for DenseLinearOperator<T> {
    fn dim(&self) -> usize {
        self.matrix.rows()
    }
    fn apply(&self, x: &Vector<T>) -> Result<Vector<T>> {
        self.matrix.try_matvec(x)
    }
}

/// `check_monotone` as a free function.
pub fn check_monotone<T: Scalar>(m: &DenseLinearOperator<T>, mu: T) -> Result<MonotonicityReport<T>> {
    m.check_monotone(mu)
}

/// Symmetric positive definite matrix defining the inner product `⟨P·,·⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Preconditioner<T> {
    matrix: Matrix<T>,
}

impl<T: Scalar> Preconditioner<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        matrix.require_square("preconditioner")?;
        if !matrix.is_symmetric(T::of(1e-12) * matrix.max_abs().max(T::one())) {
            return Err(Error::InvalidParameter("preconditioner must be symmetric".into()));
        }
        let min_eigenvalue = min_symmetric_eigenvalue(&matrix)?;
        if !(min_eigenvalue > T::zero()) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min_eigenvalue.to_f64_lossy(),
            });
        }
        Ok(Preconditioner { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Preconditioner {
            matrix: Matrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn weighted_norm_sq(&self, d: &Vector<T>) -> T {
        self.matrix.matvec(d).dot(d)
    }
}

/// `J_{λM} = (I + λM)⁻¹` for a linear operator, factored once.
#[derive(Debug, Clone)]
pub struct LinearResolvent<T> {
    lambda: T,
    lu: LuFactor<T>,
}

impl<T: Scalar> LinearResolvent<T> {
    pub fn new(m: &DenseLinearOperator<T>, lambda: T) -> Result<Self> {
        validate_step("lambda", lambda)?;
        let n = m.dim();
        let system = Matrix::identity(n).add_scaled(&lambda, m.matrix());
        Ok(LinearResolvent {
            lambda,
            lu: LuFactor::new(&system)?,
        })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }
}

impl<T: Scalar> Resolvent<T> for LinearResolvent<T> {
    fn dim(&self) -> usize {
        self.lu.dim()
    }
    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>> {
        self.lu.solve(y)
    }
}

/// One-shot `(I + λM)⁻¹ y`.
pub fn resolvent_linear<T: Scalar>(m: &DenseLinearOperator<T>, lambda: T, y: &Vector<T>) -> Result<Vector<T>> {
    LinearResolvent::new(m, lambda)?.apply(y)
}

/// `x = (P + λM)⁻¹ P y`, with residuals measured in the `P` metric.
#[derive(Debug, Clone)]
pub struct PreconditionedResolvent<T> {
    preconditioner: Preconditioner<T>,
    lu: LuFactor<T>,
}

impl<T: Scalar> PreconditionedResolvent<T> {
    pub fn new(m: &DenseLinearOperator<T>, p: Preconditioner<T>, lambda: T) -> Result<Self> {
        validate_step("lambda", lambda)?;
        check_dim("preconditioner dimension", m.dim(), p.matrix().rows())?;
        let system = p.matrix().add_scaled(&lambda, m.matrix());
        Ok(PreconditionedResolvent {
            lu: LuFactor::new(&system)?,
            preconditioner: p,
        })
    }

    pub fn preconditioner(&self) -> &Preconditioner<T> {
        &self.preconditioner
    }
}

impl<T: Scalar> Resolvent<T> for PreconditionedResolvent<T> {
    fn dim(&self) -> usize {
        self.lu.dim()
    }
    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>> {
        self.lu.solve(&self.preconditioner.matrix().matvec(y))
    }
    fn metric(&self, d: &Vector<T>) -> T {
        self.preconditioner.weighted_norm_sq(d)
    }
}

pub fn preconditioned_resolvent<T: Scalar>(
    m: &DenseLinearOperator<T>,
    p: &Preconditioner<T>,
    lambda: T,
    y: &Vector<T>,
) -> Result<Vector<T>> {
    PreconditionedResolvent::new(m, p.clone(), lambda)?.apply(y)
}

/// `φ(u,v) = ½uᵀQ_uu u + aᵀu + vᵀKu − ½vᵀQ_vv v − bᵀv`, convex in `u` and
/// concave in `v` when both quadratic blocks are PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSaddle<T> {
    pub q_uu: Matrix<T>,
    pub k: Matrix<T>,
    pub q_vv: Matrix<T>,
    pub a: Vector<T>,
    pub b: Vector<T>,
}

impl<T: Scalar> QuadraticSaddle<T> {
    pub fn new(q_uu: Matrix<T>, k: Matrix<T>, q_vv: Matrix<T>, a: Vector<T>, b: Vector<T>) -> Result<Self> {
        let d1 = q_uu.require_square("Q_uu")?;
        let d2 = q_vv.require_square("Q_vv")?;
        check_dim("K rows", d2, k.rows())?;
        check_dim("K columns", d1, k.cols())?;
        check_dim("linear term a", d1, a.dim())?;
        check_dim("linear term b", d2, b.dim())?;
        let tol = T::of(1e-12);
        for (name, q) in [("Q_uu", &q_uu), ("Q_vv", &q_vv)] {
            if !q.is_symmetric(tol * q.max_abs().max(T::one())) {
                return Err(Error::InvalidParameter(format!("{name} must be symmetric")));
            }
            if d1 + d2 > 0 && q.rows() > 0 {
                let min = min_symmetric_eigenvalue(q)?;
                if min < -T::of(MONOTONE_TOL) {
                    return Err(Error::InvalidParameter(format!(
                        "{name} must be positive semidefinite (min eigenvalue {min:e})"
                    )));
                }
            }
        }
        Ok(QuadraticSaddle { q_uu, k, q_vv, a, b })
    }

    /// Scalar bilinear coupling `φ(u,v) = c·uv`.
    pub fn bilinear_scalar(c: T) -> Self {
        QuadraticSaddle {
            q_uu: Matrix::zeros(1, 1),
            k: Matrix::from_fn(1, 1, |_, _| c),
            q_vv: Matrix::zeros(1, 1),
            a: Vector::zeros(1),
            b: Vector::zeros(1),
        }
    }

    pub fn zero(d1: usize, d2: usize) -> Self {
        QuadraticSaddle {
            q_uu: Matrix::zeros(d1, d1),
            k: Matrix::zeros(d2, d1),
            q_vv: Matrix::zeros(d2, d2),
            a: Vector::zeros(d1),
            b: Vector::zeros(d2),
        }
    }

    pub fn primal_dim(&self) -> usize {
        self.q_uu.rows()
    }

    pub fn dual_dim(&self) -> usize {
        self.q_vv.rows()
    }

    pub fn value(&self, u: &Vector<T>, v: &Vector<T>) -> T {
        let half = T::of(0.5);
        half * self.q_uu.matvec(u).dot(u) + self.a.dot(u) + v.dot(&self.k.matvec(u))
            - half * self.q_vv.matvec(v).dot(v)
            - self.b.dot(v)
    }

    /// The saddle subdifferential `(∂_u φ, −∂_v φ)` as `x ↦ S x + shift` with
    /// `S = [[Q_uu, Kᵀ], [−K, Q_vv]]` and `shift = (a, b)`.
    pub fn saddle_operator(&self) -> (DenseLinearOperator<T>, Vector<T>) {
        let s = Matrix::block(
            &self.q_uu,
            &self.k.transpose(),
            &self.k.scaled(&-T::one()),
            &self.q_vv,
        )
        .expect("validated block shapes");
        (
            DenseLinearOperator { matrix: s },
            Vector::stack(&self.a, &self.b),
        )
    }

    /// The saddle point `(u*, v*)`, i.e. the zero of the saddle operator.
    pub fn saddle_point(&self) -> Result<(Vector<T>, Vector<T>)> {
        let (s, shift) = self.saddle_operator();
        let x = LuFactor::new(s.matrix())?.solve(&-&shift)?;
        Ok(x.split_at(self.primal_dim()))
    }

    /// `φ(u, v*) − φ(u*, v)`, nonnegative for convex-concave `φ`.
    pub fn gap(&self, u: &Vector<T>, v: &Vector<T>, u_star: &Vector<T>, v_star: &Vector<T>) -> T {
        self.value(u, v_star) - self.value(u_star, v)
    }
}

/// Resolvent of the saddle operator of a [`QuadraticSaddle`]: the unique saddle
/// of `φ(u,v) + ‖u − û‖²/(2λ) − ‖v − v̂‖²/(2λ)`.
#[derive(Debug, Clone)]
pub struct SaddleResolvent<T> {
    lambda: T,
    primal_dim: usize,
    shift: Vector<T>,
    lu: LuFactor<T>,
}

impl<T: Scalar> SaddleResolvent<T> {
    pub fn new(phi: &QuadraticSaddle<T>, lambda: T) -> Result<Self> {
        validate_step("lambda", lambda)?;
        let (s, shift) = phi.saddle_operator();
        let n = s.dim();
        // (I/λ + S) x = y/λ − shift
        let system = Matrix::identity(n)
            .scaled(&(T::one() / lambda))
            .add(s.matrix());
        Ok(SaddleResolvent {
            lambda,
            primal_dim: phi.primal_dim(),
            shift,
            lu: LuFactor::new(&system)?,
        })
    }

    pub fn primal_dim(&self) -> usize {
        self.primal_dim
    }
}

impl<T: Scalar> Resolvent<T> for SaddleResolvent<T> {
    fn dim(&self) -> usize {
        self.lu.dim()
    }
    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>> {
        check_dim("saddle resolvent input", self.lu.dim(), y.dim())?;
        let mut rhs = y.scaled(T::one() / self.lambda);
        rhs -= &self.shift;
        self.lu.solve(&rhs)
    }
}

pub fn saddle_resolvent<T: Scalar>(
    phi: &QuadraticSaddle<T>,
    lambda: T,
    u_hat: &Vector<T>,
    v_hat: &Vector<T>,
) -> Result<(Vector<T>, Vector<T>)> {
    let x = SaddleResolvent::new(phi, lambda)?.apply(&Vector::stack(u_hat, v_hat))?;
    Ok(x.split_at(phi.primal_dim()))
}

/// Yosida approximation `M_λ = (I − J_{λM}) / λ`, a λ-cocoercive operator.
#[derive(Debug, Clone)]
pub struct Yosida<T, R> {
    resolvent: R,
    lambda: T,
}

impl<T: Scalar, R: Resolvent<T>> Yosida<T, R> {
    /// `resolvent` must be `J_{λM}` for the same `lambda`.
    pub fn new(resolvent: R, lambda: T) -> Result<Self> {
        validate_step("lambda", lambda)?;
        Ok(Yosida { resolvent, lambda })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn resolvent(&self) -> &R {
        &self.resolvent
    }
}

impl<T: Scalar, R: Resolvent<T>> Operator<T> for Yosida<T, R> {
    fn dim(&self) -> usize {
        self.resolvent.dim()
    }
    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>> {
        let jy = self.resolvent.apply(y)?;
        Ok((y - &jy) * (T::one() / self.lambda))
    }
}

pub fn yosida_apply<T: Scalar, R: Resolvent<T>>(resolvent: &R, lambda: T, y: &Vector<T>) -> Result<Vector<T>> {
    validate_step("lambda", lambda)?;
    let jy = resolvent.apply(y)?;
    Ok((y - &jy) * (T::one() / lambda))
}

/// Resolvent of the zero operator.
#[derive(Debug, Clone, Copy)]
pub struct IdentityResolvent {
    pub dim: usize,
}

impl<T: Scalar> Resolvent<T> for IdentityResolvent {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>> {
        Ok(y.clone())
    }
}

/// Adapts a closure into a [`Resolvent`].
pub struct FnResolvent<F> {
    dim: usize,
    f: F,
}

impl<F> FnResolvent<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnResolvent { dim, f }
    }
}

impl<T: Scalar, F: Fn(&Vector<T>) -> Result<Vector<T>>> Resolvent<T> for FnResolvent<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>> {
        (self.f)(y)
    }
}
