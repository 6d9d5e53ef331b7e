use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_traits::Num;

use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;

/// A point of a finite-dimensional real Hilbert space with the standard
/// inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<T> {
    coords: Vec<T>,
}

impl<T> Vector<T> {
    pub fn from_vec(coords: Vec<T>) -> Self {
        Vector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coords
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.coords
    }

    pub fn into_vec(self) -> Vec<T> {
        self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.coords.iter()
    }
}

impl<T: Clone + Num> Vector<T> {
    pub fn zeros(dim: usize) -> Self {
        Vector {
            coords: vec![T::zero(); dim],
        }
    }

    pub fn filled(dim: usize, value: T) -> Self {
        Vector {
            coords: vec![value; dim],
        }
    }

    /// The `index`-th canonical basis vector.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[index] = T::one();
        v
    }
}

impl<T: Scalar> Vector<T> {
    /// Builds a vector, rejecting empty input and non-finite coordinates.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("vector must have positive dimension".into()));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coordinate {pos} is not finite"
            )));
        }
        Ok(Vector { coords })
    }

    pub fn from_f64(coords: &[f64]) -> Self {
        Vector {
            coords: coords.iter().map(|&c| T::of(c)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn norm_inf(&self) -> T {
        self.coords
            .iter()
            .fold(T::zero(), |acc, &c| acc.max(c.abs()))
    }

    pub fn dist_sq(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum()
    }

    /// `self += alpha * x`
    pub fn axpy(&mut self, alpha: T, x: &Self) {
        debug_assert_eq!(self.dim(), x.dim());
        for (s, &v) in self.coords.iter_mut().zip(&x.coords) {
            *s += alpha * v;
        }
    }

    pub fn scaled(&self, alpha: T) -> Self {
        self.map(|c| alpha * c)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Vector {
            coords: self.coords.iter().map(|&c| f(c)).collect(),
        }
    }

    /// Concatenates two vectors, e.g. primal and dual blocks.
    pub fn stack(top: &Self, bottom: &Self) -> Self {
        let mut coords = Vec::with_capacity(top.dim() + bottom.dim());
        coords.extend_from_slice(&top.coords);
        coords.extend_from_slice(&bottom.coords);
        Vector { coords }
    }

    /// Inverse of [`Vector::stack`].
    pub fn split_at(&self, mid: usize) -> (Self, Self) {
        let (a, b) = self.coords.split_at(mid);
        (Vector::from_vec(a.to_vec()), Vector::from_vec(b.to_vec()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()))
    }

    pub fn check_dim(&self, context: &'static str, expected: usize) -> Result<()> {
        check_dim(context, expected, self.dim())
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.coords[i]
    }
}

impl<T> FromIterator<T> for Vector<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Vector {
            coords: iter.into_iter().collect(),
        }
    }
}

impl<'a, T: Scalar> Add<&'a Vector<T>> for &'a Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: &'a Vector<T>) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        self.coords
            .iter()
            .zip(&rhs.coords)
            .map(|(&a, &b)| a + b)
            .collect()
    }
}

impl<'a, T: Scalar> Sub<&'a Vector<T>> for &'a Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: &'a Vector<T>) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        self.coords
            .iter()
            .zip(&rhs.coords)
            .map(|(&a, &b)| a - b)
            .collect()
    }
}

impl<T: Scalar> Add for Vector<T> {
    type Output = Vector<T>;
    fn add(mut self, rhs: Vector<T>) -> Vector<T> {
        self += &rhs;
        self
    }
}

impl<T: Scalar> Sub for Vector<T> {
    type Output = Vector<T>;
    fn sub(mut self, rhs: Vector<T>) -> Vector<T> {
        self -= &rhs;
        self
    }
}

impl<T: Scalar> Mul<T> for &Vector<T> {
    type Output = Vector<T>;
    fn mul(self, alpha: T) -> Vector<T> {
        self.scaled(alpha)
    }
}

impl<T: Scalar> Mul<T> for Vector<T> {
    type Output = Vector<T>;
    fn mul(mut self, alpha: T) -> Vector<T> {
        for c in &mut self.coords {
            *c *= alpha;
        }
        self
    }
}

impl<T: Scalar> Neg for &Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        self.map(|c| -c)
    }
}

impl<T: Scalar> AddAssign<&Vector<T>> for Vector<T> {
    fn add_assign(&mut self, rhs: &Vector<T>) {
        debug_assert_eq!(self.dim(), rhs.dim());
        for (a, &b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl<T: Scalar> SubAssign<&Vector<T>> for Vector<T> {
    fn sub_assign(&mut self, rhs: &Vector<T>) {
        debug_assert_eq!(self.dim(), rhs.dim());
        for (a, &b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a -= b;
        }
    }
}
