use super::rng::Rng;
use crate::error::{Error, Result};
use crate::linalg::{LuFactor, Matrix, Vector};
use crate::operators::{DenseLinearOperator, QuadraticSaddle};
use crate::scalar::Scalar;
use crate::splitting::difference_matrix;

/// Noise scale used by the TV presets.
pub const TV_NOISE_SCALE: f64 = 0.1;
/// Fraction of `u_true` entries zeroed by the basis pursuit generator.
pub const SPARSITY_QUANTILE: f64 = 0.9;
/// Number of breakpoints in the piecewise-constant TV signal.
pub const TV_BREAKPOINTS: usize = 4;

fn rotation_scale<T: Scalar>(n: usize, lambda: T) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("N must be at least 2, got {n}")));
    }
    crate::operators::validate_step("lambda", lambda)?;
    Ok(T::one() / (lambda * T::of_usize(n - 1).sqrt()))
}

/// `s·[[0, 1], [−1, 0]]` with `s = 1/(λ√(N−1))`, on which PPM attains its
/// worst-case residual at step `N` from `x₀ = [1, 0]`.
pub fn rotation_worst_case<T: Scalar>(n: usize, lambda: T) -> Result<DenseLinearOperator<T>> {
    let s = rotation_scale(n, lambda)?;
    DenseLinearOperator::new(Matrix::from_rows(&[vec![T::zero(), s], vec![-s, T::zero()]])?)
}

/// Rotation part plus `μI`.
pub fn strongly_monotone_toy<T: Scalar>(n: usize, lambda: T, mu: T) -> Result<DenseLinearOperator<T>> {
    let s = rotation_scale(n, lambda)?;
    crate::operators::validate_step("mu", mu)?;
    DenseLinearOperator::new(Matrix::from_rows(&[vec![mu, s], vec![-s, mu]])?)
}

/// `φ(u, v) = (μ/2)u² + s·uv − (μ/2)v²`, whose saddle operator is
/// [`strongly_monotone_toy`].
pub fn strongly_monotone_toy_saddle<T: Scalar>(n: usize, lambda: T, mu: T) -> Result<QuadraticSaddle<T>> {
    let s = rotation_scale(n, lambda)?;
    crate::operators::validate_step("mu", mu)?;
    let one = |x: T| Matrix::from_fn(1, 1, move |_, _| x);
    QuadraticSaddle::new(one(mu), one(s), one(mu), Vector::zeros(1), Vector::zeros(1))
}

/// Canonical start `[1, 0]` of the two-dimensional toy problems.
pub fn toy_start<T: Scalar>() -> Vector<T> {
    Vector::basis(2, 0)
}

/// `(A, b, u_true)` with standard normal `A` (`d2 × d1`) and `b = A·u_true`.
/// `u_true` is standard normal with every entry at or below the 90th
/// percentile of `|u|` set to zero.
pub fn basis_pursuit_instance<T: Scalar>(d1: usize, d2: usize, seed: u64) -> Result<(Matrix<T>, Vector<T>, Vector<T>)> {
    if d2 == 0 || d2 >= d1 {
        return Err(Error::InvalidParameter(format!("basis pursuit needs 1 <= d2 < d1, got d1={d1}, d2={d2}")));
    }
    let mut rng = Rng::new(seed);
    let a = rng.normal_matrix::<T>(d2, d1);
    let mut u_true = rng.normal_vector::<T>(d1);
    let mut magnitudes: Vec<T> = u_true.iter().map(|x| x.abs()).collect();
    magnitudes.sort_by(|x, y| x.partial_cmp(y).expect("finite draws"));
    let cut = ((SPARSITY_QUANTILE * d1 as f64).ceil() as usize).clamp(1, d1) - 1;
    let threshold = magnitudes[cut];
    for x in u_true.as_mut_slice() {
        if x.abs() <= threshold {
            *x = T::zero();
        }
    }
    let b = a.matvec(&u_true);
    Ok((a, b, u_true))
}

/// `(K, a, b)` for `min_u max_v ⟨a, u⟩ + ⟨Ku, v⟩ − ⟨b, v⟩`, all standard
/// normal. When `d2 < d1`, `a` is projected onto `range(Kᵀ)`; when
/// `d2 > d1`, `b` is projected onto `range(K)`. Either way a saddle point
/// exists.
pub fn bilinear_game_instance<T: Scalar>(d1: usize, d2: usize, seed: u64) -> Result<(Matrix<T>, Vector<T>, Vector<T>)> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::InvalidParameter(format!("bilinear game needs d1, d2 >= 1, got d1={d1}, d2={d2}")));
    }
    let mut rng = Rng::new(seed);
    let k = rng.normal_matrix::<T>(d2, d1);
    let mut a = rng.normal_vector::<T>(d1);
    let mut b = rng.normal_vector::<T>(d2);
    if d2 < d1 {
        // a ← Kᵀ(KKᵀ)⁻¹K a
        let kkt = k.matmul(&k.transpose());
        a = k.matvec_t(&LuFactor::new(&kkt)?.solve(&k.matvec(&a))?);
    } else if d2 > d1 {
        // b ← K(KᵀK)⁻¹Kᵀ b
        b = k.matvec(&LuFactor::new(&k.gram())?.solve(&k.matvec_t(&b))?);
    }
    Ok((k, a, b))
}

/// Total-variation instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TvInstance<T> {
    /// `p × d1` standard normal.
    pub h: Matrix<T>,
    /// `H·x_true + noise_scale·noise`.
    pub b: Vector<T>,
    /// Piecewise constant with at most five pieces.
    pub x_true: Vector<T>,
    /// `(d1 − 1) × d1` difference matrix.
    pub d: Matrix<T>,
}

/// Draw order: breakpoints, piece levels, `H`, noise.
pub fn tv_instance<T: Scalar>(d1: usize, p: usize, seed: u64, noise_scale: T) -> Result<TvInstance<T>> {
    if p == 0 || d1 < 2 {
        return Err(Error::InvalidParameter(format!("TV instance needs p >= 1 and d1 >= 2, got p={p}, d1={d1}")));
    }
    if !(noise_scale >= T::zero() && noise_scale.is_finite()) {
        return Err(Error::InvalidParameter(format!("noise scale must be nonnegative, got {noise_scale}")));
    }
    let mut rng = Rng::new(seed);
    let count = TV_BREAKPOINTS.min(d1 - 1);
    let mut breaks: Vec<usize> = Vec::with_capacity(count);
    while breaks.len() < count {
        let k = rng.index(1, d1);
        if !breaks.contains(&k) {
            breaks.push(k);
        }
    }
    breaks.sort_unstable();
    let levels: Vec<T> = (0..=count).map(|_| T::of(rng.normal())).collect();
    let x_true = Vector::from_vec(
        (0..d1)
            .map(|j| levels[breaks.iter().take_while(|&&k| k <= j).count()])
            .collect(),
    );
    let h = rng.normal_matrix::<T>(p, d1);
    let noise = rng.normal_vector::<T>(p);
    let mut b = h.matvec(&x_true);
    b.axpy(noise_scale, &noise);
    Ok(TvInstance {
        h,
        b,
        x_true,
        d: difference_matrix(d1)?,
    })
}

/// `(G − Gᵀ)/2 + BBᵀ/dim` with standard normal `G`, `B`: monotone, generally
/// neither symmetric nor skew.
pub fn random_monotone_operator<T: Scalar>(dim: usize, seed: u64) -> Result<DenseLinearOperator<T>> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let mut rng = Rng::new(seed);
    let g = rng.normal_matrix::<T>(dim, dim);
    let b = rng.normal_matrix::<T>(dim, dim);
    let half = T::of(0.5);
    let skew = g.sub(&g.transpose()).scaled(&half);
    let psd = b.matmul(&b.transpose()).scaled(&(T::one() / T::of_usize(dim)));
    DenseLinearOperator::new(skew.add(&psd))
}

/// `φ(u,v) = ½uᵀQ_uu u + aᵀu + vᵀKu − ½vᵀQ_vv v − bᵀv` with
/// `Q_uu = μI + CCᵀ/d1`, `Q_vv = μI + EEᵀ/d2`, standard normal `C`, `E`, `K`,
/// `a`, `b`: μ-strongly convex-concave.
pub fn random_quadratic_saddle<T: Scalar>(d1: usize, d2: usize, mu: T, seed: u64) -> Result<QuadraticSaddle<T>> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::InvalidParameter(format!("saddle needs d1, d2 >= 1, got d1={d1}, d2={d2}")));
    }
    if !(mu >= T::zero() && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu must be nonnegative, got {mu}")));
    }
    let mut rng = Rng::new(seed);
    let mut block = |d: usize| {
        let c = rng.normal_matrix::<T>(d, d);
        let q = c.matmul(&c.transpose()).scaled(&(T::one() / T::of_usize(d)));
        q.add(&Matrix::identity(d).scaled(&mu)).symmetric_part()
    };
    let q_uu = block(d1);
    let q_vv = block(d2);
    let k = rng.normal_matrix::<T>(d2, d1);
    let a = rng.normal_vector::<T>(d1);
    let b = rng.normal_vector::<T>(d2);
    QuadraticSaddle::new(q_uu, k, q_vv, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{LinearResolvent, Resolvent};

    #[test]
    fn rotation_examples() {
        let m = rotation_worst_case(2, 1.0).unwrap();
        assert_eq!(m.matrix(), &Matrix::from_f64_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]));
        let m = rotation_worst_case(5, 1.0).unwrap();
        assert_eq!(m.matrix(), &Matrix::from_f64_rows(&[&[0.0, 0.5], &[-0.5, 0.0]]));
        let x = LinearResolvent::new(&m, 1.0).unwrap().apply(&toy_start()).unwrap();
        assert!(x.max_abs_diff(&Vector::from_vec(vec![0.8, 0.4])) < 1e-15);
        for n in [2, 3, 17, 100] {
            let m = rotation_worst_case(n, 0.3).unwrap();
            assert_eq!(m.matrix().symmetric_part(), Matrix::zeros(2, 2));
            assert!(m.check_monotone(0.0).unwrap().monotone);
        }
        assert!(rotation_worst_case(1, 1.0).is_err());
        assert!(rotation_worst_case(3, 0.0).is_err());
    }

    #[test]
    fn strongly_monotone_examples() {
        let m = strongly_monotone_toy::<f64>(100, 1.0, 0.02).unwrap();
        let s = 1.0 / 99f64.sqrt();
        assert_eq!(m.matrix(), &Matrix::from_f64_rows(&[&[0.02, s], &[-s, 0.02]]));
        let report = m.check_monotone(0.02).unwrap();
        assert!(report.monotone);
        assert!((report.min_eigenvalue - 0.02).abs() < 1e-15);

        let (op, shift) = strongly_monotone_toy_saddle(100, 1.0, 0.02).unwrap().saddle_operator();
        assert_eq!(op.matrix(), m.matrix());
        assert_eq!(shift, Vector::zeros(2));

        let big = strongly_monotone_toy(10, 1.0, 1e8).unwrap();
        let y = Vector::from_vec(vec![3.0, -1.0]);
        let x = LinearResolvent::new(&big, 1.0).unwrap().apply(&y).unwrap();
        assert!(x.max_abs_diff(&(y * (1.0 / (1.0 + 1e8)))) < 1e-15);
    }

    #[test]
    fn basis_pursuit_properties() {
        let (a, b, u) = basis_pursuit_instance::<f64>(100, 20, 11).unwrap();
        assert_eq!(a.shape(), (20, 100));
        assert_eq!(b, a.matvec(&u));
        let nonzeros = u.iter().filter(|x| **x != 0.0).count();
        assert!((1..=10).contains(&nonzeros), "{nonzeros} nonzeros");
        assert_eq!(basis_pursuit_instance::<f64>(100, 20, 11).unwrap(), (a, b, u));
        assert!(basis_pursuit_instance::<f64>(20, 20, 0).is_err());
    }

    #[test]
    fn bilinear_game_has_saddle_point() {
        for (d1, d2) in [(50, 25), (25, 50), (10, 10)] {
            let (k, a, b) = bilinear_game_instance::<f64>(d1, d2, 5).unwrap();
            assert_eq!(k.shape(), (d2, d1));
            assert!(k.max_abs() > 0.0);
            // a + Kᵀv = 0 and Ku = b solvable in least squares with zero residual
            let v = LuFactor::new(&k.matmul(&k.transpose()).add(&Matrix::identity(d2).scaled(&1e-12)))
                .unwrap()
                .solve(&k.matvec(&-&a))
                .unwrap();
            let u = LuFactor::new(&k.gram().add(&Matrix::identity(d1).scaled(&1e-12)))
                .unwrap()
                .solve(&k.matvec_t(&b))
                .unwrap();
            assert!((&a + &k.matvec_t(&v)).norm() < 1e-6, "{d1}x{d2} dual");
            assert!((&k.matvec(&u) - &b).norm() < 1e-6, "{d1}x{d2} primal");
            assert_eq!(bilinear_game_instance::<f64>(d1, d2, 5).unwrap(), (k, a, b));
        }
    }

    #[test]
    fn tv_properties() {
        let tv = tv_instance::<f64>(100, 5, 3, 0.0).unwrap();
        assert_eq!(tv.h.shape(), (5, 100));
        assert_eq!(tv.d.shape(), (99, 100));
        assert_eq!(tv.b, tv.h.matvec(&tv.x_true));
        let jumps = tv.d.matvec(&tv.x_true).iter().filter(|x| **x != 0.0).count();
        assert!((1..=4).contains(&jumps), "{jumps} jumps");
        let noisy = tv_instance::<f64>(100, 5, 3, 0.1).unwrap();
        assert_eq!(noisy.x_true, tv.x_true);
        assert_eq!(noisy.h, tv.h);
        assert_ne!(noisy.b, tv.b);
        assert_eq!(tv_instance::<f64>(100, 5, 3, 0.1).unwrap(), noisy);
        let tiny = tv_instance::<f64>(3, 1, 0, 0.1).unwrap();
        assert_eq!(tiny.x_true.dim(), 3);
    }

    #[test]
    fn random_operators_are_monotone() {
        for seed in 0..10 {
            let m = random_monotone_operator::<f64>(1 + seed as usize, seed).unwrap();
            assert!(m.check_monotone(0.0).unwrap().monotone);
            let phi = random_quadratic_saddle::<f64>(3, 4, 0.5, seed).unwrap();
            let (s, _) = phi.saddle_operator();
            assert!(s.check_monotone(0.5).unwrap().monotone);
        }
    }

    #[test]
    fn single_precision_generation_matches_rounded_double() {
        let (a64, _, _) = bilinear_game_instance::<f64>(4, 4, 9).unwrap();
        let (a32, _, _) = bilinear_game_instance::<f32>(4, 4, 9).unwrap();
        for (x, y) in a64.as_slice().iter().zip(a32.as_slice()) {
            assert_eq!(*x as f32, *y);
        }
    }
}
