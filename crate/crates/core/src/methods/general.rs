use super::trace::{ResidualTrace, TraceRecord};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Vector;
use crate::operators::Resolvent;
use crate::scalar::{Field, Scalar};

/// Lower-triangular step coefficients `h_{i,k}`, `1 ≤ k ≤ i ≤ N − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCoeffs<F> {
    horizon: usize,
    rows: Vec<Vec<F>>,
}

impl<F: Field> StepCoeffs<F> {
    /// `rows[i − 1]` holds `h_{i,1..=i}`; exactly `horizon − 1` rows.
    pub fn new(horizon: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        if horizon < 1 {
            return Err(Error::InvalidParameter("step-coefficient horizon must be at least 1".into()));
        }
        check_dim("step-coefficient rows", horizon - 1, rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            check_dim("step-coefficient row length", i + 1, row.len())?;
        }
        Ok(StepCoeffs { horizon, rows })
    }

    pub fn from_fn(horizon: usize, h: impl Fn(usize, usize) -> F) -> Self {
        let rows = (1..horizon)
            .map(|i| (1..=i).map(|k| h(i, k)).collect())
            .collect();
        StepCoeffs { horizon, rows }
    }

    /// `h_{i,i} = 1`, all others zero: the plain proximal point method.
    pub fn ppm(horizon: usize) -> Self {
        Self::from_fn(horizon, |i, k| if i == k { F::one() } else { F::zero() })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `h_{i,k}`, zero above the diagonal.
    pub fn get(&self, i: usize, k: usize) -> F {
        assert!(i >= 1 && i < self.horizon && k >= 1, "h_{{{i},{k}}} out of range");
        if k > i {
            F::zero()
        } else {
            self.rows[i - 1][k - 1].clone()
        }
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.rows[i - 1]
    }
}

impl<T: Scalar> StepCoeffs<T> {
    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|v| v.is_finite())
    }
}

/// `x_{i+1} = J(y_i)`, `y_{i+1} = y_i + Σ_{k=0}^{i} h_{i+1,k+1}(x_{k+1} − y_k)`.
/// Keeps every update `x_{k+1} − y_k`.
pub fn general_ppm<T: Scalar, R: Resolvent<T>>(
    resolvent: &R,
    h: &StepCoeffs<T>,
    y0: &Vector<T>,
    iters: usize,
) -> Result<ResidualTrace<T>> {
    if iters == 0 || iters > h.horizon() {
        return Err(Error::InvalidParameter(format!(
            "iteration count {iters} must lie in 1..={}",
            h.horizon()
        )));
    }
    if !h.is_finite() {
        return Err(Error::InvalidParameter("step coefficients must be finite".into()));
    }
    check_dim("initial point", resolvent.dim(), y0.dim())?;

    let mut updates: Vec<Vector<T>> = Vec::with_capacity(iters);
    let mut records = Vec::with_capacity(iters);
    let mut y = y0.clone();
    let mut x = y0.clone();
    for i in 0..iters {
        x = resolvent.apply(&y)?;
        let d = &x - &y;
        let mut record = TraceRecord::new(i + 1, resolvent.metric(&d));
        record.x = Some(x.clone());
        record.y_prev = Some(y.clone());
        records.push(record);
        updates.push(d);
        if i + 1 < iters {
            for (k, dk) in updates.iter().enumerate() {
                let coeff = h.get(i + 1, k + 1);
                if coeff != T::zero() {
                    y.axpy(coeff, dk);
                }
            }
        }
    }
    Ok(ResidualTrace {
        records,
        initial_gap: None,
        final_x: x,
        final_y: y,
    })
}
