use super::prox::{InnerSolverConfig, ProxDescriptor, Subproblem};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{spectral_norm, Matrix, Vector};
use crate::methods::{run_scheme_observed, RunOptions, Scheme, SplittingTrace};
use crate::operators::{validate_step, Preconditioner, Resolvent};
use crate::scalar::Scalar;

/// Power-iteration settings for `‖K‖`.
pub const NORM_REL_TOL: f64 = 1e-10;
pub const NORM_MAX_ITERS: usize = 1000;

/// `P = [[I/τ, −Kᵀ], [−K, I/σ]]`
pub fn pdhg_preconditioner<T: Scalar>(k: &Matrix<T>, tau: T, sigma: T) -> Result<Preconditioner<T>> {
    let (d2, d1) = k.shape();
    let p = Matrix::block(
        &Matrix::identity(d1).scaled(&(T::one() / tau)),
        &k.transpose().scaled(&-T::one()),
        &k.scaled(&-T::one()),
        &Matrix::identity(d2).scaled(&(T::one() / sigma)),
    )?;
    Preconditioner::new(p)
}

/// One PDHG step for `min_u max_v f(u) + ⟨Ku, v⟩ − g(v)` on `(û, v̂)`:
/// `u = prox_{τf}(û − τKᵀv̂)`, `v = prox_{σg}(v̂ + σK(2u − û))`.
/// Residuals are measured in the `P` metric.
#[derive(Debug, Clone)]
pub struct PdhgStep<T> {
    k: Matrix<T>,
    tau: T,
    sigma: T,
    f: Subproblem<T>,
    g: Subproblem<T>,
}

impl<T: Scalar> PdhgStep<T> {
    /// Rejects `τσ‖K‖² ≥ 1`.
    pub fn new(f: &ProxDescriptor<T>, g: &ProxDescriptor<T>, k: Matrix<T>, tau: T, sigma: T) -> Result<Self> {
        validate_step("tau", tau)?;
        validate_step("sigma", sigma)?;
        let norm = spectral_norm(&k, T::of(NORM_REL_TOL), NORM_MAX_ITERS);
        let product = tau * sigma * norm * norm;
        if product >= T::one() {
            return Err(Error::InvalidParameter(format!(
                "step sizes violate tau * sigma * ||K||^2 < 1 (got {product})"
            )));
        }
        let (d2, d1) = k.shape();
        let config = InnerSolverConfig::default();
        let f = Subproblem::new(f, Matrix::identity(d1).scaled(&(T::one() / tau)), config)?;
        let g = Subproblem::new(g, Matrix::identity(d2).scaled(&(T::one() / sigma)), config)?;
        Ok(PdhgStep { k, tau, sigma, f, g })
    }

    pub fn primal_dim(&self) -> usize {
        self.k.cols()
    }

    pub fn preconditioner(&self) -> Result<Preconditioner<T>> {
        pdhg_preconditioner(&self.k, self.tau, self.sigma)
    }
}

impl<T: Scalar> Resolvent<T> for PdhgStep<T> {
    fn dim(&self) -> usize {
        self.k.rows() + self.k.cols()
    }

    fn apply(&self, y: &Vector<T>) -> Result<Vector<T>> {
        check_dim("PDHG input", self.dim(), y.dim())?;
        let (u_hat, v_hat) = y.split_at(self.primal_dim());
        let mut z = u_hat.clone();
        z.axpy(-self.tau, &self.k.matvec_t(&v_hat));
        let u = self.f.solve(&(&z * (-T::one() / self.tau)), &z)?;
        let mut extrap = u.clone() * T::of(2.0);
        extrap -= &u_hat;
        let mut z = v_hat;
        z.axpy(self.sigma, &self.k.matvec(&extrap));
        let v = self.g.solve(&(&z * (-T::one() / self.sigma)), &z)?;
        Ok(Vector::stack(&u, &v))
    }

    /// `⟨P d, d⟩ = ‖d_u‖²/τ + ‖d_v‖²/σ − 2⟨K d_u, d_v⟩`
    fn metric(&self, d: &Vector<T>) -> T {
        let (du, dv) = d.split_at(self.primal_dim());
        du.norm_sq() / self.tau + dv.norm_sq() / self.sigma - T::of(2.0) * self.k.matvec(&du).dot(&dv)
    }
}

/// PDHG with the chosen extrapolation scheme; residual and bound columns are
/// in the `P` metric.
#[allow(clippy::too_many_arguments)]
pub fn pdhg<T: Scalar>(
    f: &ProxDescriptor<T>,
    g: &ProxDescriptor<T>,
    k: &Matrix<T>,
    tau: T,
    sigma: T,
    init: (&Vector<T>, &Vector<T>),
    scheme: Scheme,
    options: &RunOptions<T>,
) -> Result<SplittingTrace<T>> {
    let step = PdhgStep::new(f, g, k.clone(), tau, sigma)?;
    check_dim("initial primal point", k.cols(), init.0.dim())?;
    check_dim("initial dual point", k.rows(), init.1.dim())?;
    run_scheme_observed(&step, scheme, &Vector::stack(init.0, init.1), options, |_| None)
}
