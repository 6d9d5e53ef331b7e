//! ADMM for `min f(x) + g(z) s.t. Ax + Bz = c`, as Douglas-Rachford
//! splitting on the dual.
//!
//! The dual sequences are `ν_i = ν̂_i + ρ(Ax_{i+1} − c)` and
//! `η_i = η̂_i + ρ(Ax_{i+1} − c)`. Extrapolation is applied to `(ν, η)` and
//! mapped back to `η̂`, which for the accelerated scheme is the closed-form
//! `η̂` update with the `ρA(x_{i+1} − x_i)` terms. `ν_i − η_{i−1}` equals
//! `ρ(Ax_{i+1} + Bz_i − c)`.

use super::prox::{InnerSolverConfig, ProxDescriptor, Subproblem};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::methods::{Extrapolator, RunOptions, Scheme, SplittingTrace, TraceRecord};
use crate::operators::validate_step;
use crate::scalar::Scalar;

/// `Ax + Bz = c`
#[derive(Debug, Clone, PartialEq)]
pub struct AffineConstraint<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Vector<T>,
}

impl<T: Scalar> AffineConstraint<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>, c: Vector<T>) -> Result<Self> {
        check_dim("constraint rows of B", a.rows(), b.rows())?;
        check_dim("constraint right-hand side", a.rows(), c.dim())?;
        Ok(AffineConstraint { a, b, c })
    }

    /// `Ax + Bz − c`
    pub fn residual(&self, x: &Vector<T>, z: &Vector<T>) -> Vector<T> {
        let mut r = self.a.matvec(x);
        r += &self.b.matvec(z);
        r -= &self.c;
        r
    }
}

/// `D` with `D[i][i] = 1`, `D[i][i+1] = −1`, shape `(d1 − 1) × d1`.
pub fn difference_matrix<T: Scalar>(d1: usize) -> Result<Matrix<T>> {
    if d1 < 2 {
        return Err(Error::InvalidParameter(format!("difference matrix needs d1 >= 2, got {d1}")));
    }
    Ok(Matrix::from_fn(d1 - 1, d1, |i, j| {
        if j == i {
            T::one()
        } else if j == i + 1 {
            -T::one()
        } else {
            T::zero()
        }
    }))
}

/// Iterates seen by record `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmIterate<T> {
    /// `x_{i+1}`
    pub x_next: Vector<T>,
    /// `x_i`
    pub x: Vector<T>,
    /// `z_i`
    pub z: Vector<T>,
    /// `ν̂_i`
    pub nu_hat: Vector<T>,
    /// `η̂_{i−1}`
    pub eta_hat_prev: Vector<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmTrace<T> {
    /// Residual `‖ν_i − η_{i−1}‖²`, infeasibility `‖Ax_{i+1} + Bz_i − c‖²`;
    /// `x`/`y_prev` hold `ν_i`/`η_{i−1}` when iterates are kept.
    pub trace: SplittingTrace<T>,
    pub iterates: Vec<AdmmIterate<T>>,
    /// `ν_0 = ν̂_0 + ρ(Ax_1 − c)`, the start of the dual sequence.
    pub nu0: Vector<T>,
    /// `x_{N+1}` and `z_N` after `N` records.
    pub final_primal: (Vector<T>, Vector<T>),
}

/// ADMM with the chosen extrapolation on the dual; `Scheme::Ppm` is standard
/// ADMM. Starts from `(z_0, ν̂_0)`; `x_0` does not enter the iteration.
#[allow(clippy::too_many_arguments)]
pub fn admm<T: Scalar>(
    f: &ProxDescriptor<T>,
    g: &ProxDescriptor<T>,
    cons: &AffineConstraint<T>,
    rho: T,
    init: (&Vector<T>, &Vector<T>),
    scheme: Scheme,
    options: &RunOptions<T>,
    inner: InnerSolverConfig,
) -> Result<AdmmTrace<T>> {
    validate_step("rho", rho)?;
    options.validate()?;
    let (z0, nu_hat0) = init;
    check_dim("initial z", cons.b.cols(), z0.dim())?;
    check_dim("initial multiplier", cons.a.rows(), nu_hat0.dim())?;

    let x_sub = Subproblem::new(f, cons.a.gram().scaled(&rho), inner)?;
    let z_sub = Subproblem::new(g, cons.b.gram().scaled(&rho), inner)?;
    let shift = |x: &Vector<T>| (cons.a.matvec(x) - cons.c.clone()) * rho;

    let mut extrapolator = Extrapolator::new(scheme);
    let mut z = z0.clone();
    let mut nu_hat = nu_hat0.clone();
    let mut x = Vector::zeros(cons.a.cols());
    let mut nu_prev: Option<Vector<T>> = None;
    let mut eta_prev: Option<Vector<T>> = None;
    let mut eta_prev2: Option<Vector<T>> = None;
    let mut eta_hat_prev = nu_hat0.clone();
    let mut previous_residual = None;
    let mut records = Vec::with_capacity(options.iters);
    let mut iterates = Vec::new();
    let mut nu0 = None;

    for i in 0..=options.iters {
        // x_{i+1}: f(x) + ⟨ν̂_i, Ax + Bz_i − c⟩ + (ρ/2)‖Ax + Bz_i − c‖²
        let bz_c = cons.b.matvec(&z) - cons.c.clone();
        let w = cons.a.matvec_t(&(&nu_hat + &(&bz_c * rho)));
        let x_next = x_sub.solve(&w, &x)?;
        let s = shift(&x_next);
        let nu = &nu_hat + &s;

        let mut restart = i == 0;
        if i == 0 {
            nu0 = Some(nu.clone());
        }
        if i >= 1 {
            let infeasibility = cons.residual(&x_next, &z).norm_sq();
            let residual = rho * rho * infeasibility;
            let mut record = TraceRecord::new(i, residual);
            record.infeasibility = Some(infeasibility);
            if !options.restart.is_active() {
                record.bound = options.radius.and_then(|r| scheme.bound(i, r));
            }
            if options.keep_iterates {
                record.x = Some(nu.clone());
                record.y_prev = eta_prev.clone();
                iterates.push(AdmmIterate {
                    x_next: x_next.clone(),
                    x: x.clone(),
                    z: z.clone(),
                    nu_hat: nu_hat.clone(),
                    eta_hat_prev: eta_hat_prev.clone(),
                });
            }
            if options.restart.fires(i, residual, previous_residual) && i < options.iters {
                record.restart = true;
                restart = true;
            }
            previous_residual = Some(residual);
            records.push(record);
        }
        if i == options.iters {
            let final_y = eta_prev.unwrap_or_else(|| nu.clone());
            return Ok(AdmmTrace {
                trace: SplittingTrace {
                    records,
                    initial_gap: None,
                    final_x: nu,
                    final_y,
                },
                iterates,
                nu0: nu0.expect("set at i = 0"),
                final_primal: (x_next, z),
            });
        }

        let eta = if restart {
            extrapolator.reset();
            nu.clone()
        } else {
            let y_cur = eta_prev.as_ref().expect("set after the first iteration");
            let y_prev = eta_prev2.as_ref().unwrap_or(y_cur);
            extrapolator.next(&nu, nu_prev.as_ref().expect("set after the first iteration"), y_cur, y_prev)
        };
        let eta_hat = &eta - &s;

        // z_{i+1}: g(z) + ⟨η̂_i, Ax_{i+1} + Bz − c⟩ + (ρ/2)‖Ax_{i+1} + Bz − c‖²
        let ax_c = cons.a.matvec(&x_next) - cons.c.clone();
        let w = cons.b.matvec_t(&(&eta_hat + &(&ax_c * rho)));
        z = z_sub.solve(&w, &z)?;
        nu_hat = &eta_hat + &(cons.residual(&x_next, &z) * rho);

        eta_prev2 = if restart { Some(eta.clone()) } else { eta_prev.take() };
        eta_prev = Some(eta);
        nu_prev = Some(nu);
        eta_hat_prev = eta_hat;
        x = x_next;
    }
    unreachable!("loop returns at i == iters")
}
