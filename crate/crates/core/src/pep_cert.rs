//! Step coefficients of the accelerated method viewed as a general proximal
//! point method, the constraint matrices of the relaxed performance-estimation
//! program, and a checker for the closed-form dual certificate.
//!
//! Matrices live on the canonical basis `u_1..u_{N+1}` of `R^{N+1}`; index
//! `N+1` pairs with `(y_0 − x*)/R` in the Gram matrix
//! `Z = G Gᵀ`, `G = [g_1 … g_N, (y_0 − x*)/R]`, `g_i = (y_{i−1} − x_i)/R`.
//! Everything except the eigenvalue check is generic over [`Field`] and runs
//! in exact rational arithmetic.

use num_rational::BigRational;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{min_symmetric_eigenvalue, Matrix, Vector};
use crate::methods::{accelerated_ppm, general_ppm, ResidualTrace, RunOptions, StepCoeffs};
use crate::operators::Resolvent;
use crate::scalar::{Field, Scalar};

/// Entrywise tolerance for `S = r rᵀ` in floating point.
pub const RANK_ONE_TOL: f64 = 1e-12;
/// Lower bound accepted for the minimum eigenvalue of `S`.
pub const EIGEN_TOL: f64 = -1e-10;

fn require_horizon(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("horizon N must be at least 2, got {n}")));
    }
    Ok(())
}

/// `h_{i,k} = −2k/(i(i+1))` for `k < i` and `h_{i,i} = 2i/(i+1)`.
pub fn build_h<F: Field>(n: usize) -> Result<StepCoeffs<F>> {
    require_horizon(n)?;
    Ok(StepCoeffs::from_fn(n, |i, k| {
        let (i, k) = (i as i64, k as i64);
        if k == i {
            F::from_ratio(2 * i, i + 1)
        } else {
            F::from_ratio(-2 * k, i * (i + 1))
        }
    }))
}

/// Dual multipliers `a_2..a_N`, `b_N`, `c` of the certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers<F> {
    /// `a[i − 2] = a_i = 2(i−1)i/N²`.
    pub a: Vec<F>,
    /// `b_N = 2/N`
    pub b: F,
    /// `c = 1/N²`
    pub c: F,
}

pub fn multipliers<F: Field>(n: usize) -> Result<Multipliers<F>> {
    require_horizon(n)?;
    let nn = (n * n) as i64;
    Ok(Multipliers {
        a: (2..=n as i64).map(|i| F::from_ratio(2 * (i - 1) * i, nn)).collect(),
        b: F::from_ratio(2, n as i64),
        c: F::from_ratio(1, nn),
    })
}

/// Constraint matrices `A_{i,j}(h)`, `B_i(h)`, `C` for a horizon `N`,
/// built on demand.
#[derive(Debug, Clone)]
pub struct ConstraintMatrices<F> {
    n: usize,
    h: StepCoeffs<F>,
}

pub fn build_constraint_matrices<F: Field>(h: &StepCoeffs<F>, n: usize) -> Result<ConstraintMatrices<F>> {
    ConstraintMatrices::new(h.clone(), n)
}

impl<F: Field> ConstraintMatrices<F> {
    pub fn new(h: StepCoeffs<F>, n: usize) -> Result<Self> {
        if n < 1 || h.horizon() < n {
            return Err(Error::InvalidParameter(format!(
                "horizon {n} needs step coefficients up to N = {n}, got {}",
                h.horizon()
            )));
        }
        Ok(ConstraintMatrices { n, h })
    }

    pub fn horizon(&self) -> usize {
        self.n
    }

    /// Matrix side `N + 1`.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    fn unit(&self, i: usize) -> Vec<F> {
        let mut u = vec![F::zero(); self.size()];
        u[i - 1] = F::one();
        u
    }

    /// Coefficients of `Σ_{l=from}^{to} Σ_{k=0}^{l} h_{l+1,k+1} u_{k+1}`; empty
    /// when `to < from`.
    fn step_sum(&self, from: usize, to: Option<usize>) -> Vec<F> {
        let mut w = vec![F::zero(); self.size()];
        if let Some(to) = to {
            for l in from..=to {
                for k in 0..=l {
                    w[k] = w[k].clone() + self.h.get(l + 1, k + 1);
                }
            }
        }
        w
    }

    /// `A_{i,j}` for `1 ≤ i < j ≤ N`.
    pub fn a(&self, i: usize, j: usize) -> Matrix<F> {
        let (d, w) = self.a_factors(i, j);
        Matrix::sym_outer(&d, &d).sub(&Matrix::sym_outer(&d, &w))
    }

    /// `(d, w)` with `A_{i,j} = d ⊙ d − d ⊙ w`.
    fn a_factors(&self, i: usize, j: usize) -> (Vec<F>, Vec<F>) {
        assert!(1 <= i && i < j && j <= self.n, "A_{{{i},{j}}} out of range");
        let mut d = self.unit(i);
        d[j - 1] = -F::one();
        (d, self.step_sum(i - 1, Some(j - 2)))
    }

    /// `B_i` for `1 ≤ i ≤ N`.
    pub fn b(&self, i: usize) -> Matrix<F> {
        let (ui, v) = self.b_factors(i);
        Matrix::sym_outer(&ui, &v)
    }

    /// `(u_i, v)` with `B_i = u_i ⊙ v`, `v = u_i − u_{N+1} + w`.
    fn b_factors(&self, i: usize) -> (Vec<F>, Vec<F>) {
        assert!(1 <= i && i <= self.n, "B_{i} out of range");
        let ui = self.unit(i);
        let mut v = self.step_sum(0, i.checked_sub(2));
        v[i - 1] = v[i - 1].clone() + F::one();
        v[self.n] = v[self.n].clone() - F::one();
        (ui, v)
    }

    /// `C = u_{N+1} u_{N+1}ᵀ`
    pub fn c(&self) -> Matrix<F> {
        let last = self.unit(self.size());
        Matrix::outer(&last, &last)
    }

    /// Objective matrix `u_N u_Nᵀ`.
    pub fn objective(&self) -> Matrix<F> {
        let un = self.unit(self.n);
        Matrix::outer(&un, &un)
    }
}

/// Largest constraint value of the full program at a Gram matrix `z`:
/// `max{tr(A_{i,j}Z), tr(B_i Z), tr(CZ) − 1}`. Nonpositive means feasible.
pub fn max_constraint_value<T: Scalar>(cm: &ConstraintMatrices<T>, z: &Matrix<T>) -> T {
    let n = cm.horizon();
    let mut worst = cm.c().trace_product(z) - T::one();
    for j in 2..=n {
        for i in 1..j {
            worst = worst.max(cm.a(i, j).trace_product(z));
        }
    }
    for i in 1..=n {
        worst = worst.max(cm.b(i).trace_product(z));
    }
    worst
}

/// `S = Σ_{i=2}^N a_i A_{i−1,i} + b_N B_N + c C − u_N u_Nᵀ` for the
/// accelerated step coefficients.
pub fn certificate_slack<F: Field>(n: usize) -> Result<Matrix<F>> {
    let cm = ConstraintMatrices::new(build_h(n)?, n)?;
    let m = multipliers::<F>(n)?;
    let mut s = cm.c().scaled(&m.c).sub(&cm.objective());
    for (i, ai) in (2..=n).zip(&m.a) {
        let (d, w) = cm.a_factors(i - 1, i);
        let v: Vec<F> = d.iter().zip(&w).map(|(x, y)| x.clone() - y.clone()).collect();
        add_sym_outer(&mut s, ai, &d, &v);
    }
    let (u, v) = cm.b_factors(n);
    add_sym_outer(&mut s, &m.b, &u, &v);
    Ok(s)
}

/// `s += α·(u ⊙ v)`, touching only rows and columns where `u` is nonzero.
fn add_sym_outer<F: Field>(s: &mut Matrix<F>, alpha: &F, u: &[F], v: &[F]) {
    let half = F::from_ratio(1, 2);
    for (p, up) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        let scale = alpha.clone() * up.clone() * half.clone();
        for (q, vq) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let t = scale.clone() * vq.clone();
            s[(p, q)] = s[(p, q)].clone() + t.clone();
            s[(q, p)] = s[(q, p)].clone() + t;
        }
    }
}

/// Coefficients of `r = u_N − u_{N+1}/N`.
pub fn rank_one_vector<F: Field>(n: usize) -> Result<Vec<F>> {
    require_horizon(n)?;
    let mut r = vec![F::zero(); n + 1];
    r[n - 1] = F::one();
    r[n] = -F::from_ratio(1, n as i64);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateReport {
    pub n: usize,
    /// `max |S − r rᵀ|` entrywise.
    pub max_rank1_deviation: f64,
    pub min_eigenvalue: f64,
    /// `c`, the certified bound on `‖x_N − y_{N−1}‖² / R²`.
    pub dual_value: f64,
}

impl CertificateReport {
    pub fn passes(&self) -> bool {
        self.max_rank1_deviation <= RANK_ONE_TOL && self.min_eigenvalue >= EIGEN_TOL
    }
}

/// Floating-point certificate check for horizon `n`.
pub fn verify_certificate(n: usize) -> Result<CertificateReport> {
    let s = certificate_slack::<f64>(n)?;
    let r = rank_one_vector::<f64>(n)?;
    let deviation = s.max_abs_diff(&Matrix::outer(&r, &r));
    Ok(CertificateReport {
        n,
        max_rank1_deviation: deviation,
        min_eigenvalue: min_symmetric_eigenvalue(&s)?,
        dual_value: multipliers::<f64>(n)?.c,
    })
}

/// `S = r rᵀ` in exact rational arithmetic.
pub fn verify_certificate_exact(n: usize) -> Result<bool> {
    let s = certificate_slack::<BigRational>(n)?;
    let r = rank_one_vector::<BigRational>(n)?;
    Ok(s == Matrix::outer(&r, &r))
}

/// Runs general PPM with [`build_h`] and the accelerated method from `x0`
/// for `n` iterations; returns the largest coordinate gap between the `x`
/// and `y` sequences.
pub fn equivalence_check<T: Scalar, R: Resolvent<T>>(resolvent: &R, x0: &Vector<T>, n: usize) -> Result<T> {
    let h = build_h::<T>(n)?;
    let general = general_ppm(resolvent, &h, x0, n)?;
    let accel = accelerated_ppm(resolvent, x0, &RunOptions::new(n))?;
    let mut worst = T::zero();
    for i in 1..=n {
        worst = worst
            .max(general.x(i).max_abs_diff(accel.x(i)))
            .max(general.y_prev(i).max_abs_diff(accel.y_prev(i)));
    }
    Ok(worst)
}

/// Gram matrix of `g_1..g_N` and `(y_0 − x*)/R` from a trace that kept its
/// iterates.
pub fn gram_from_trace<T: Scalar>(trace: &ResidualTrace<T>, x_star: &Vector<T>, radius: T) -> Result<Matrix<T>> {
    let n = trace.len();
    let y0 = trace.y_prev(1);
    check_dim("optimum", y0.dim(), x_star.dim())?;
    let inv = T::one() / radius;
    let mut columns: Vec<Vector<T>> = (1..=n).map(|i| (trace.y_prev(i) - trace.x(i)) * inv).collect();
    columns.push((y0 - x_star) * inv);
    Ok(Matrix::from_fn(n + 1, n + 1, |i, j| columns[i].dot(&columns[j])))
}
