//! Cross-checks against independently coded references built on nalgebra.

use accelprox::linalg::{spectral_norm, symmetric_eigenvalues, LuFactor, Matrix, Vector};
use accelprox::methods::{RunOptions, Scheme};
use accelprox::problems::{tv_instance, Rng};
use accelprox::splitting::{admm, fista_strongly_convex, AffineConstraint, InnerSolverConfig, ProxDescriptor};
use nalgebra::{DMatrix, DVector};

fn to_na(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

fn to_na_vec(v: &Vector<f64>) -> DVector<f64> {
    DVector::from_column_slice(v.as_slice())
}

fn soft(v: &DVector<f64>, t: f64) -> DVector<f64> {
    v.map(|x| x.signum() * (x.abs() - t).max(0.0))
}

#[test]
fn lu_solve_matches_nalgebra() {
    let mut rng = Rng::new(21);
    for n in [1, 3, 8, 25] {
        let a: Matrix<f64> = rng.normal_matrix(n, n);
        let b: Vector<f64> = rng.normal_vector(n);
        let ours = LuFactor::new(&a).unwrap().solve(&b).unwrap();
        let theirs = to_na(&a).lu().solve(&to_na_vec(&b)).unwrap();
        let scale = 1.0 + theirs.amax();
        for (x, y) in ours.iter().zip(theirs.iter()) {
            assert!((x - y).abs() <= 1e-9 * scale, "n = {n}");
        }
    }
}

#[test]
fn eigenvalues_and_spectral_norm_match_nalgebra() {
    let mut rng = Rng::new(22);
    for n in [1, 2, 5, 12, 30] {
        let c: Matrix<f64> = rng.normal_matrix(n, n);
        let s = c.add(&c.transpose()).scaled(&0.5);
        let ours = symmetric_eigenvalues(&s).unwrap();
        let mut theirs: Vec<f64> = to_na(&s).symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() <= 1e-10 * (1.0 + y.abs()), "n = {n}");
        }

        let k: Matrix<f64> = rng.normal_matrix(n, n + 3);
        let expected = to_na(&k).singular_values().max();
        let got = spectral_norm(&k, 1e-12, 100_000);
        assert!((got - expected).abs() <= 1e-8 * expected, "n = {n}: {got} vs {expected}");
    }
}

#[test]
fn fista_matches_long_proximal_gradient() {
    let mut rng = Rng::new(23);
    let tol = 1e-10;
    for n in [2, 6, 15] {
        let c: Matrix<f64> = rng.normal_matrix(n, n);
        let q = c.gram().scaled(&(1.0 / n as f64)).add(&Matrix::identity(n).scaled(&0.5));
        let lin: Vector<f64> = rng.normal_vector(n);
        let gamma = 0.4;
        let eig = symmetric_eigenvalues(&q).unwrap();
        let (m, l) = (eig[0], eig[n - 1]);
        let ours = fista_strongly_convex(&q, &lin, m, l, gamma, &Vector::zeros(n), tol, 5000).unwrap();

        // plain proximal gradient, step 1/L, run far past convergence
        let (qn, ln) = (to_na(&q), to_na_vec(&lin));
        let mut x = DVector::zeros(n);
        for _ in 0..200_000 {
            x = soft(&(&x - (&qn * &x + &ln) / l), gamma / l);
        }
        for (a, b) in ours.iter().zip(x.iter()) {
            assert!((a - b).abs() <= 10.0 * tol, "n = {n}: {a} vs {b}");
        }
    }
}

struct TvAdmm {
    h: DMatrix<f64>,
    b: DVector<f64>,
    d: DMatrix<f64>,
    gamma: f64,
    rho: f64,
}

impl TvAdmm {
    /// argmin ½‖Hx − b‖² + ⟨ν̂, Dx − z⟩ + (ρ/2)‖Dx − z‖²
    fn x_step(&self, z: &DVector<f64>, nu_hat: &DVector<f64>) -> DVector<f64> {
        let lhs = self.h.transpose() * &self.h + self.d.transpose() * &self.d * self.rho;
        let rhs = self.h.transpose() * &self.b - self.d.transpose() * (nu_hat - z * self.rho);
        lhs.lu().solve(&rhs).unwrap()
    }

    /// argmin γ‖z‖₁ + ⟨η̂, Dx − z⟩ + (ρ/2)‖Dx − z‖²
    fn z_step(&self, x: &DVector<f64>, eta_hat: &DVector<f64>) -> DVector<f64> {
        soft(&(&self.d * x + eta_hat / self.rho), self.gamma / self.rho)
    }

    fn infeasibility(&self, x: &DVector<f64>, z: &DVector<f64>) -> f64 {
        (&self.d * x - z).norm_squared()
    }

    /// Returns per-iteration `(x_{i+1}, z_i, ‖Dx_{i+1} − z_i‖²)` for `i = 1..=iters`.
    fn run(&self, iters: usize, accelerate: bool) -> Vec<(DVector<f64>, DVector<f64>, f64)> {
        let m = self.d.nrows();
        let mut z = DVector::zeros(m);
        let mut nu_hat: Vec<DVector<f64>> = vec![DVector::zeros(m)];
        let mut eta_hat: Vec<DVector<f64>> = Vec::new();
        let mut xs: Vec<DVector<f64>> = vec![DVector::zeros(self.d.ncols())];
        let mut out = Vec::new();
        for i in 0..=iters {
            let x_next = self.x_step(&z, &nu_hat[i]);
            if i >= 1 {
                out.push((x_next.clone(), z.clone(), self.infeasibility(&x_next, &z)));
            }
            xs.push(x_next.clone());
            if i == iters {
                break;
            }
            let e = if !accelerate || i < 2 {
                nu_hat[i].clone()
            } else {
                let w = (i as f64 - 1.0) / (i as f64 + 1.0);
                let ad = |k: usize| &self.d * (&xs[k + 1] - &xs[k]) * self.rho;
                &nu_hat[i] + (&nu_hat[i] - &nu_hat[i - 1] + ad(i)) * w
                    - (&nu_hat[i - 1] - &eta_hat[i - 2] + ad(i - 1)) * w
            };
            z = self.z_step(&x_next, &e);
            nu_hat.push(&e + (&self.d * &x_next - &z) * self.rho);
            eta_hat.push(e);
        }
        out
    }
}

fn tv_pair() -> (TvAdmm, ProxDescriptor<f64>, ProxDescriptor<f64>, AffineConstraint<f64>) {
    let tv = tv_instance::<f64>(40, 5, 1, 0.1).unwrap();
    let (gamma, rho) = (3.0, 0.05);
    let reference = TvAdmm {
        h: to_na(&tv.h),
        b: to_na_vec(&tv.b),
        d: to_na(&tv.d),
        gamma,
        rho,
    };
    let m = tv.d.rows();
    let cons = AffineConstraint::new(tv.d.clone(), Matrix::identity(m).scaled(&-1.0), Vector::zeros(m)).unwrap();
    let f = ProxDescriptor::quadratic(tv.h, tv.b).unwrap();
    let g = ProxDescriptor::l1(gamma).unwrap();
    (reference, f, g, cons)
}

fn compare_admm(scheme: Scheme, accelerate: bool, tol: f64) {
    let (reference, f, g, cons) = tv_pair();
    let iters = 200;
    let m = cons.c.dim();
    let ours = admm(
        &f,
        &g,
        &cons,
        reference.rho,
        (&Vector::zeros(m), &Vector::zeros(m)),
        scheme,
        &RunOptions::new(iters),
        InnerSolverConfig::default(),
    )
    .unwrap();
    let theirs = reference.run(iters, accelerate);
    for (k, (it, (x, z, inf))) in ours.iterates.iter().zip(&theirs).enumerate() {
        let dx = it.x_next.iter().zip(x.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let dz = it.z.iter().zip(z.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dx <= tol && dz <= tol, "iteration {}: dx {dx:e}, dz {dz:e}", k + 1);
        let got = ours.trace.records[k].infeasibility.unwrap();
        assert!((got - inf).abs() <= tol * (1.0 + inf), "iteration {}", k + 1);
    }
    assert_eq!(ours.iterates.len(), theirs.len());
}

#[test]
fn plain_admm_matches_textbook_admm() {
    // x-step matrix has condition number near 1e5; two direct solvers differ by up to ε·cond
    compare_admm(Scheme::Ppm, false, 1e-10);
}

#[test]
fn accelerated_admm_matches_eta_hat_recursion() {
    compare_admm(Scheme::Accelerated, true, 1e-10);
}
