use crate::linalg::Vector;
use crate::scalar::Scalar;

/// One iteration of a run. Record `i` describes `x_i`, the output of the
/// `i`-th resolvent call, and `y_{i−1}`, the point it was evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<T> {
    pub iteration: usize,
    /// Fixed-point residual `‖x_i − y_{i−1}‖²` (or its preconditioned variant).
    pub residual: T,
    /// Worst-case bound at this iteration, when the initial distance is known.
    pub bound: Option<T>,
    /// Constraint violation `‖A x_{i+1} + B z_i − c‖²` for ADMM runs.
    pub infeasibility: Option<T>,
    /// Saddle gap `φ(u_i, v*) − φ(u*, v_i)` for saddle runs.
    pub gap: Option<T>,
    /// The method was re-initialized at `x_i` right after this record.
    pub restart: bool,
    pub x: Option<Vector<T>>,
    pub y_prev: Option<Vector<T>>,
}

impl<T: Scalar> TraceRecord<T> {
    pub(crate) fn new(iteration: usize, residual: T) -> Self {
        TraceRecord {
            iteration,
            residual,
            bound: None,
            infeasibility: None,
            gap: None,
            restart: false,
            x: None,
            y_prev: None,
        }
    }
}

/// Per-iteration history of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTrace<T> {
    pub records: Vec<TraceRecord<T>>,
    /// Gap at the starting point, for saddle runs.
    pub initial_gap: Option<T>,
    pub final_x: Vector<T>,
    pub final_y: Vector<T>,
}

/// Splitting methods report through the same record layout.
pub type SplittingTrace<T> = ResidualTrace<T>;

impl<T: Scalar> ResidualTrace<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record for iteration `i` (1-based).
    pub fn record(&self, i: usize) -> &TraceRecord<T> {
        &self.records[i - 1]
    }

    pub fn residual(&self, i: usize) -> T {
        self.record(i).residual
    }

    pub fn residuals(&self) -> Vec<T> {
        self.records.iter().map(|r| r.residual).collect()
    }

    /// `x_i`; panics if the run did not keep iterates.
    pub fn x(&self, i: usize) -> &Vector<T> {
        self.record(i)
            .x
            .as_ref()
            .expect("trace was recorded without iterates")
    }

    /// `y_{i−1}`; panics if the run did not keep iterates.
    pub fn y_prev(&self, i: usize) -> &Vector<T> {
        self.record(i)
            .y_prev
            .as_ref()
            .expect("trace was recorded without iterates")
    }

    pub fn restart_points(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter(|r| r.restart)
            .map(|r| r.iteration)
            .collect()
    }
}
