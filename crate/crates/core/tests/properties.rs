use accelprox::linalg::{Matrix, Vector};
use accelprox::methods::{accelerated_ppm, guler, ppm, restarted, GulerVariant, RunOptions, Scheme};
use accelprox::operators::{
    DenseLinearOperator, LinearResolvent, Operator, PreconditionedResolvent, Resolvent, SaddleResolvent, Yosida,
};
use accelprox::pep_cert::{equivalence_check, multipliers};
use accelprox::problems::{random_monotone_operator, random_quadratic_saddle, strongly_monotone_toy, Rng};
use accelprox::methods::RestartPolicy;
use accelprox::splitting::{
    accelerated_saddle_ppm, drs, pdhg, pdhg_preconditioner, DouglasRachford, PdhgStep, ProxDescriptor,
};
use proptest::prelude::*;

fn vector(coords: &[f64], dim: usize) -> Vector<f64> {
    Vector::from_vec(coords[..dim].to_vec())
}

fn coords() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, 24)
}

fn firmly_nonexpansive_gap<R: Resolvent<f64>>(j: &R, y1: &Vector<f64>, y2: &Vector<f64>) -> f64 {
    let d = &j.apply(y1).unwrap() - &j.apply(y2).unwrap();
    d.dot(&(y1 - y2)) - d.norm_sq()
}

fn strongly_monotone(dim: usize, mu: f64, seed: u64) -> DenseLinearOperator<f64> {
    let m = random_monotone_operator::<f64>(dim, seed).unwrap();
    DenseLinearOperator::new(m.matrix().add(&Matrix::identity(dim).scaled(&mu))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resolvent_is_firmly_nonexpansive(dim in 1usize..9, seed in any::<u64>(), lambda in 0.01..10.0f64, a in coords(), b in coords()) {
        let m = random_monotone_operator::<f64>(dim, seed).unwrap();
        let j = LinearResolvent::new(&m, lambda).unwrap();
        prop_assert!(firmly_nonexpansive_gap(&j, &vector(&a, dim), &vector(&b, dim)) >= -1e-10);
    }

    #[test]
    fn yosida_identity_and_cocoercivity(dim in 1usize..9, seed in any::<u64>(), lambda in 0.01..10.0f64, a in coords(), b in coords()) {
        let m = random_monotone_operator::<f64>(dim, seed).unwrap();
        let j = LinearResolvent::new(&m, lambda).unwrap();
        let yosida = Yosida::new(&j, lambda).unwrap();
        let (y1, y2) = (vector(&a, dim), vector(&b, dim));
        let m1 = yosida.apply(&y1).unwrap();
        let m2 = yosida.apply(&y2).unwrap();
        let rebuilt = &y1 - &(&m1 * lambda);
        prop_assert!((&j.apply(&y1).unwrap() - &rebuilt).norm() <= 1e-12 * (1.0 + y1.norm()));
        let d = &m1 - &m2;
        prop_assert!((&y1 - &y2).dot(&d) >= lambda * d.norm_sq() - 1e-10);
    }

    #[test]
    fn saddle_resolvent_matches_stacked_operator(d1 in 1usize..5, d2 in 1usize..5, mu in 0.0..1.0f64, seed in any::<u64>(), lambda in 0.05..5.0f64, a in coords()) {
        let phi = random_quadratic_saddle::<f64>(d1, d2, mu, seed).unwrap();
        let y = vector(&a, d1 + d2);
        let x = SaddleResolvent::new(&phi, lambda).unwrap().apply(&y).unwrap();
        // x + λ(Sx + shift) = y
        let (s, shift) = phi.saddle_operator();
        let shifted = &y - &(&shift * lambda);
        let expected = LinearResolvent::new(&s, lambda).unwrap().apply(&shifted).unwrap();
        prop_assert!(x.max_abs_diff(&expected) <= 1e-10);
    }

    #[test]
    fn accelerated_rate_on_random_operators(dim in 1usize..9, seed in any::<u64>(), lambda in 0.1..5.0f64, a in coords()) {
        let m = random_monotone_operator::<f64>(dim, seed).unwrap();
        let j = LinearResolvent::new(&m, lambda).unwrap();
        let x0 = vector(&a, dim);
        // 0 is a zero of every linear operator
        let r2 = x0.norm_sq();
        let t = accelerated_ppm(&j, &x0, &RunOptions::new(60).without_iterates()).unwrap();
        for (k, r) in t.residuals().iter().enumerate() {
            let i = (k + 1) as f64;
            prop_assert!(r * i * i <= r2 * (1.0 + 1e-9) + 1e-300, "i = {}", k + 1);
        }
    }

    #[test]
    fn general_form_reproduces_accelerated(dim in 1usize..7, seed in any::<u64>(), n in 2usize..40, a in coords()) {
        let m = random_monotone_operator::<f64>(dim, seed).unwrap();
        let j = LinearResolvent::new(&m, 1.0).unwrap();
        let x0 = vector(&a, dim);
        prop_assert!(equivalence_check(&j, &x0, n).unwrap() <= 1e-9 * (1.0 + x0.norm()));
    }

    #[test]
    fn strongly_monotone_ppm_contracts(dim in 1usize..7, seed in any::<u64>(), mu in 0.01..2.0f64, lambda in 0.1..3.0f64, a in coords()) {
        let m = strongly_monotone(dim, mu, seed);
        let j = LinearResolvent::new(&m, lambda).unwrap();
        let t = ppm(&j, &vector(&a, dim), &RunOptions::new(30).without_iterates()).unwrap();
        let factor = (1.0 / (1.0 + lambda * mu)).powi(2);
        for w in t.residuals().windows(2) {
            prop_assert!(w[1] <= (factor + 1e-12) * w[0] + 1e-300);
        }
    }

    #[test]
    fn restart_contraction_on_strongly_monotone_toy(n in 2usize..200, lambda in 0.2..2.0f64, mu in 0.005..0.2f64, k in 2usize..60) {
        let m = strongly_monotone_toy(n, lambda, mu).unwrap();
        let j = LinearResolvent::new(&m, lambda).unwrap();
        let t = restarted(Scheme::Accelerated, &j, &Vector::basis(2, 0), k, 4 * k).unwrap();
        let factor = 1.0 / (lambda * mu * k as f64).powi(2);
        for outer in 1..4 {
            let previous = t.residual(outer * k);
            let current = t.residual((outer + 1) * k);
            prop_assert!(current <= factor * previous * (1.0 + 1e-9) + 1e-300, "j = {}", outer);
        }
    }

    #[test]
    fn guler_first_decreases_cost(dim in 1usize..7, seed in any::<u64>(), lambda in 0.1..3.0f64, a in coords()) {
        // M = ∇f for f = ½xᵀQx with Q PSD, f* = 0 at x* = 0
        let mut rng = Rng::new(seed);
        let b: Matrix<f64> = rng.normal_matrix(dim, dim);
        let q = b.matmul(&b.transpose()).symmetric_part();
        let j = LinearResolvent::new(&DenseLinearOperator::new(q.clone()).unwrap(), lambda).unwrap();
        let x0 = vector(&a, dim);
        let t = guler(GulerVariant::First, &j, &x0, &RunOptions::new(40)).unwrap();
        for i in 1..=40 {
            let x = t.x(i);
            let f = 0.5 * x.dot(&q.matvec(x));
            prop_assert!(f <= 2.0 * x0.norm_sq() / (lambda * ((i + 1) as f64).powi(2)) * (1.0 + 1e-9) + 1e-12, "i = {}", i);
        }
    }

    #[test]
    fn drs_operator_is_firmly_nonexpansive(dim in 1usize..7, s1 in any::<u64>(), s2 in any::<u64>(), rho in 0.05..5.0f64, a in coords(), b in coords()) {
        let m1 = random_monotone_operator::<f64>(dim, s1).unwrap();
        let m2 = random_monotone_operator::<f64>(dim, s2).unwrap();
        let g = DouglasRachford::new(LinearResolvent::new(&m1, rho).unwrap(), LinearResolvent::new(&m2, rho).unwrap()).unwrap();
        prop_assert!(firmly_nonexpansive_gap(&g, &vector(&a, dim), &vector(&b, dim)) >= -1e-10);
    }

    #[test]
    fn accelerated_drs_rate(dim in 1usize..7, s1 in any::<u64>(), s2 in any::<u64>(), rho in 0.05..5.0f64, a in coords()) {
        let m1 = random_monotone_operator::<f64>(dim, s1).unwrap();
        let m2 = random_monotone_operator::<f64>(dim, s2).unwrap();
        let nu0 = vector(&a, dim);
        // G is linear, so 0 is a fixed point
        let r2 = nu0.norm_sq();
        let t = drs(
            LinearResolvent::new(&m1, rho).unwrap(),
            LinearResolvent::new(&m2, rho).unwrap(),
            &nu0,
            Scheme::Accelerated,
            &RunOptions::new(60).without_iterates(),
        )
        .unwrap();
        for (k, r) in t.residuals().iter().enumerate() {
            let i = (k + 1) as f64;
            prop_assert!(r * i * i <= r2 * (1.0 + 1e-9) + 1e-300, "i = {}", k + 1);
        }
    }

    #[test]
    fn restarted_saddle_gap_contracts(d1 in 1usize..4, d2 in 1usize..4, mu in 0.05..1.0f64, lambda in 0.5..3.0f64, seed in any::<u64>(), a in coords()) {
        let phi = random_quadratic_saddle::<f64>(d1, d2, mu, seed).unwrap();
        let (u_star, v_star) = phi.saddle_point().unwrap();
        let k = (2.0 / (lambda * mu)).ceil() as usize;
        let y = vector(&a, d1 + d2);
        let (u0, v0) = y.split_at(d1);
        let opts = RunOptions::new(3 * k).with_restart(RestartPolicy::every(k)).without_iterates();
        let t = accelerated_saddle_ppm(&phi, lambda, (&u0, &v0), Scheme::Accelerated, &opts, Some((&u_star, &v_star))).unwrap();
        let factor = 1.0 / (2.0 * lambda * mu * k as f64);
        let mut start_gap = t.initial_gap.unwrap();
        for outer in 1..=3 {
            let gap = t.record(outer * k).gap.unwrap();
            prop_assert!(gap <= factor * start_gap * (1.0 + 1e-6) + 1e-14, "outer {}: {} vs {}", outer, gap, start_gap);
            start_gap = gap;
        }
    }

    #[test]
    fn pdhg_is_preconditioned_proximal_point(d1 in 1usize..5, d2 in 1usize..5, seed in any::<u64>(), scale in 0.1..0.95f64, a in coords()) {
        let mut rng = Rng::new(seed);
        let k: Matrix<f64> = rng.normal_matrix(d2, d1);
        let h: Matrix<f64> = rng.normal_matrix(d1, d1);
        let e: Matrix<f64> = rng.normal_matrix(d2, d2);
        let f = ProxDescriptor::quadratic(h.clone(), Vector::zeros(d1)).unwrap();
        let g = ProxDescriptor::quadratic(e.clone(), Vector::zeros(d2)).unwrap();
        let norm = accelprox::linalg::spectral_norm(&k, 1e-12, 10_000);
        let (tau, sigma) = (scale / norm, scale / norm);
        let saddle = DenseLinearOperator::new(
            Matrix::block(&h.gram(), &k.transpose(), &k.scaled(&-1.0), &e.gram()).unwrap(),
        )
        .unwrap();
        let p = pdhg_preconditioner(&k, tau, sigma).unwrap();
        let reference = PreconditionedResolvent::new(&saddle, p, 1.0).unwrap();
        let step = PdhgStep::new(&f, &g, k.clone(), tau, sigma).unwrap();
        let y = vector(&a, d1 + d2);
        prop_assert!(step.apply(&y).unwrap().max_abs_diff(&reference.apply(&y).unwrap()) <= 1e-10 * (1.0 + y.norm()));

        let (u0, v0) = y.split_at(d1);
        let ours = pdhg(&f, &g, &k, tau, sigma, (&u0, &v0), Scheme::Accelerated, &RunOptions::new(15)).unwrap();
        let theirs = accelerated_ppm(&reference, &y, &RunOptions::new(15)).unwrap();
        for i in 1..=15 {
            prop_assert!(ours.x(i).max_abs_diff(theirs.x(i)) <= 1e-10 * (1.0 + y.norm()));
            let rel = (ours.residual(i) - theirs.residual(i)).abs() / theirs.residual(i).max(1e-300);
            prop_assert!(rel <= 1e-8 || (ours.residual(i) - theirs.residual(i)).abs() <= 1e-20);
        }
    }

    #[test]
    fn certificate_multipliers_are_nonnegative(n in 2usize..200) {
        let mult = multipliers::<f64>(n).unwrap();
        prop_assert!(mult.a.iter().all(|&a| a >= 0.0));
        prop_assert!(mult.b >= 0.0 && mult.c >= 0.0);
    }
}
