use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// Seeded SplitMix64 stream shared by all generators.
///
/// Uniforms are `(next_u64 >> 11)·2⁻⁵³`; normals use one Box-Muller draw per
/// pair of uniforms, `√(−2 ln(1 − u₁))·cos(2πu₂)`.
#[derive(Debug, Clone)]
pub struct Rng {
    inner: SplitMix64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng {
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[lo, hi)`.
    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo < hi);
        let span = (hi - lo) as f64;
        lo + ((self.uniform() * span) as usize).min(hi - lo - 1)
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn normal_vector<T: Scalar>(&mut self, dim: usize) -> Vector<T> {
        Vector::from_vec((0..dim).map(|_| T::of(self.normal())).collect())
    }

    /// Row-major standard normal matrix.
    pub fn normal_matrix<T: Scalar>(&mut self, rows: usize, cols: usize) -> Matrix<T> {
        let data = (0..rows * cols).map(|_| T::of(self.normal())).collect();
        Matrix::from_row_major(rows, cols, data).expect("length matches shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    #[test]
    fn stream_matches_reference_splitmix() {
        for seed in [0u64, 1, 42, u64::MAX] {
            let mut state = seed;
            let mut rng = Rng::new(seed);
            for _ in 0..16 {
                assert_eq!(rng.next_u64(), reference_splitmix(&mut state));
            }
        }
        assert_eq!(Rng::new(0).next_u64(), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn uniform_range_and_normal_moments() {
        let mut rng = Rng::new(7);
        let n = 200_000;
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..n {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
            let z = rng.normal();
            sum += z;
            sum_sq += z * z;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
    }

    #[test]
    fn index_stays_in_range() {
        let mut rng = Rng::new(3);
        let mut seen = [false; 5];
        for _ in 0..1000 {
            let k = rng.index(2, 7);
            assert!((2..7).contains(&k));
            seen[k - 2] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
