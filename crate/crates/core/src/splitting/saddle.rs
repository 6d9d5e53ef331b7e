//! Proximal point methods on convex-concave saddle problems.

use super::prox::{InnerSolverConfig, ProxDescriptor, Subproblem};
use crate::error::{check_dim, Result};
use crate::linalg::{Matrix, Vector};
use crate::methods::{run_scheme_observed, RunOptions, Scheme, SplittingTrace};
use crate::operators::{validate_step, QuadraticSaddle, Resolvent, SaddleResolvent};
use crate::scalar::Scalar;

/// Proximal point iterations on the saddle subdifferential of a quadratic
/// `φ`, one saddle resolvent per step. With `optimum = (u*, v*)` the gap
/// column holds `φ(u_i, v*) − φ(u*, v_i)`.
pub fn accelerated_saddle_ppm<T: Scalar>(
    phi: &QuadraticSaddle<T>,
    lambda: T,
    init: (&Vector<T>, &Vector<T>),
    scheme: Scheme,
    options: &RunOptions<T>,
    optimum: Option<(&Vector<T>, &Vector<T>)>,
) -> Result<SplittingTrace<T>> {
    let resolvent = SaddleResolvent::new(phi, lambda)?;
    check_dim("initial primal point", phi.primal_dim(), init.0.dim())?;
    check_dim("initial dual point", phi.dual_dim(), init.1.dim())?;
    let x0 = Vector::stack(init.0, init.1);
    let d1 = phi.primal_dim();
    run_scheme_observed(&resolvent, scheme, &x0, options, |x| {
        optimum.map(|(u_star, v_star)| {
            let (u, v) = x.split_at(d1);
            phi.gap(&u, &v, u_star, v_star)
        })
    })
}

/// One step of the proximal method of multipliers for
/// `min f(u) s.t. Au = b`, as a resolvent on `(û, v̂)`:
/// `u = argmin f(u) + ⟨v̂, Au − b⟩ + (λ/2)‖Au − b‖² + (1/2λ)‖u − û‖²`,
/// `x = (u, v̂ + λ(Au − b))`.
#[derive(Debug, Clone)]
pub struct MultiplierStep<T> {
    a: Matrix<T>,
    b: Vector<T>,
    lambda: T,
    sub: Subproblem<T>,
}

impl<T: Scalar> MultiplierStep<T> {
    pub fn new(f: &ProxDescriptor<T>, a: Matrix<T>, b: Vector<T>, lambda: T, inner: InnerSolverConfig) -> Result<Self> {
        validate_step("lambda", lambda)?;
        check_dim("constraint right-hand side", a.rows(), b.dim())?;
        let d1 = a.cols();
        let w = a
            .gram()
            .scaled(&lambda)
            .add(&Matrix::identity(d1).scaled(&(T::one() / lambda)));
        let sub = Subproblem::new(f, w, inner)?;
        Ok(MultiplierStep { a, b, lambda, sub })
    }

    pub fn primal_dim(&self) -> usize {
        self.a.cols()
    }
}

impl<T: Scalar> Resolvent<T> for MultiplierStep<T> {
    fn dim(&self) -> usize {
        self.a.cols() + self.a.rows()
    }

    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>> {
        check_dim("multiplier step input", self.dim(), y.dim())?;
        let (u_hat, v_hat) = y.split_at(self.primal_dim());
        let lam = self.lambda;
        // linear term Aᵀv̂ − λAᵀb − û/λ
        let mut w = self.a.matvec_t(&(&v_hat - &(&self.b * lam)));
        w.axpy(-T::one() / lam, &u_hat);
        let u = self.sub.solve(&w, &u_hat)?;
        let mut v = v_hat;
        v.axpy(lam, &(self.a.matvec(&u) - self.b.clone()));
        Ok(Vector::stack(&u, &v))
    }
}

/// Proximal method of multipliers with the chosen extrapolation scheme.
#[allow(clippy::too_many_arguments)]
pub fn accelerated_prox_multipliers<T: Scalar>(
    f: &ProxDescriptor<T>,
    a: &Matrix<T>,
    b: &Vector<T>,
    lambda: T,
    init: (&Vector<T>, &Vector<T>),
    scheme: Scheme,
    options: &RunOptions<T>,
    inner: InnerSolverConfig,
) -> Result<SplittingTrace<T>> {
    let step = MultiplierStep::new(f, a.clone(), b.clone(), lambda, inner)?;
    check_dim("initial primal point", a.cols(), init.0.dim())?;
    check_dim("initial dual point", a.rows(), init.1.dim())?;
    run_scheme_observed(&step, scheme, &Vector::stack(init.0, init.1), options, |_| None)
}
