use crate::error::{check_dim, Result};
use crate::linalg::Vector;
use crate::methods::{run_scheme, RunOptions, Scheme, SplittingTrace};
use crate::operators::Resolvent;
use crate::scalar::Scalar;

/// Douglas-Rachford operator `G = J₁∘(2J₂ − I) + (I − J₂)` built from
/// `J₁ = J_{ρM₁}` and `J₂ = J_{ρM₂}`. It is itself a resolvent.
#[derive(Debug, Clone)]
pub struct DouglasRachford<R1, R2> {
    j1: R1,
    j2: R2,
}

impl<R1, R2> DouglasRachford<R1, R2> {
    pub fn new<T: Scalar>(j1: R1, j2: R2) -> Result<Self>
    where
        R1: Resolvent<T>,
        R2: Resolvent<T>,
    {
        check_dim("second resolvent", j1.dim(), j2.dim())?;
        Ok(DouglasRachford { j1, j2 })
    }
}

impl<T: Scalar, R1: Resolvent<T>, R2: Resolvent<T>> Resolvent<T> for DouglasRachford<R1, R2> {
    fn dim(&self) -> usize {
        self.j1.dim()
    }

    fn apply(&self, eta: &Vector<T>) -> Result<Vector<T>> {
        let j2 = self.j2.apply(eta)?;
        let mut reflected = j2.clone() * T::of(2.0);
        reflected -= eta;
        let mut out = self.j1.apply(&reflected)?;
        out += eta;
        out -= &j2;
        Ok(out)
    }
}

/// Douglas-Rachford splitting `ν_{i+1} = G(η_i)` with the chosen
/// extrapolation; residual `‖ν_i − η_{i−1}‖²`. The step `ρ` is the one the
/// resolvents were built with.
pub fn drs<T: Scalar, R1: Resolvent<T>, R2: Resolvent<T>>(
    j1: R1,
    j2: R2,
    nu0: &Vector<T>,
    scheme: Scheme,
    options: &RunOptions<T>,
) -> Result<SplittingTrace<T>> {
    let g = DouglasRachford::new(j1, j2)?;
    run_scheme(&g, scheme, nu0, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::methods::ppm;
    use crate::operators::{DenseLinearOperator, IdentityResolvent, LinearResolvent};

    fn m1() -> LinearResolvent<f64> {
        let m = DenseLinearOperator::new(Matrix::from_f64_rows(&[&[0.5, 1.0], &[-1.0, 0.0]])).unwrap();
        LinearResolvent::new(&m, 0.7).unwrap()
    }

    #[test]
    fn identity_second_resolvent_gives_ppm() {
        let nu0 = Vector::from_vec(vec![1.0, -2.0]);
        let a = drs(m1(), IdentityResolvent { dim: 2 }, &nu0, Scheme::Ppm, &RunOptions::new(10)).unwrap();
        let b = ppm(&m1(), &nu0, &RunOptions::new(10)).unwrap();
        for i in 1..=10 {
            assert!(a.x(i).max_abs_diff(b.x(i)) < 1e-15);
        }
    }

    #[test]
    fn identity_first_resolvent_gives_second() {
        // J₁ = I: G = (2J₂ − I) + (I − J₂) = J₂
        let nu0 = Vector::from_vec(vec![1.0, -2.0]);
        let a = drs(IdentityResolvent { dim: 2 }, m1(), &nu0, Scheme::Accelerated, &RunOptions::new(10)).unwrap();
        let b = crate::methods::accelerated_ppm(&m1(), &nu0, &RunOptions::new(10)).unwrap();
        for i in 1..=10 {
            assert!(a.x(i).max_abs_diff(b.x(i)) < 1e-15);
        }
    }

    #[test]
    fn both_identity_is_stationary() {
        let nu0 = Vector::from_vec(vec![1.0, -2.0]);
        let id = IdentityResolvent { dim: 2 };
        let t = drs(id, id, &nu0, Scheme::Accelerated, &RunOptions::new(10)).unwrap();
        assert_eq!(t.final_x, nu0);
    }
}
