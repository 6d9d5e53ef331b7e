use super::trace::{ResidualTrace, TraceRecord};
use crate::error::{check_dim, Result};
use crate::linalg::Vector;
use crate::operators::{validate_step, Operator};
use crate::scalar::Scalar;

/// `y_{i+1} = (I − βM) y_i`. Record `i` holds `y_i`, `y_{i−1}` and
/// `‖y_i − y_{i−1}‖² = β²‖M y_{i−1}‖²`. `M` should be β-cocoercive.
pub fn forward_method<T: Scalar, M: Operator<T>>(
    op: &M,
    beta: T,
    y0: &Vector<T>,
    iters: usize,
) -> Result<ResidualTrace<T>> {
    validate_step("beta", beta)?;
    check_dim("initial point", op.dim(), y0.dim())?;
    let mut y = y0.clone();
    let mut records = Vec::with_capacity(iters);
    for i in 1..=iters {
        let my = op.apply(&y)?;
        let mut next = y.clone();
        next.axpy(-beta, &my);
        let mut record = TraceRecord::new(i, next.dist_sq(&y));
        record.x = Some(next.clone());
        record.y_prev = Some(y);
        records.push(record);
        y = next;
    }
    Ok(ResidualTrace {
        records,
        initial_gap: None,
        final_x: y.clone(),
        final_y: y,
    })
}
