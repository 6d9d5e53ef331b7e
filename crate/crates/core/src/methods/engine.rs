//! The proximal point family as one loop: `x_{i+1} = J(y_i)` followed by a
//! scheme-specific update of `y`.

use std::fmt;
use std::str::FromStr;

use super::trace::{ResidualTrace, TraceRecord};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Vector;
use crate::operators::Resolvent;
use crate::scalar::Scalar;

/// How `y_{i+1}` is formed from the latest resolvent output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `y_{i+1} = x_{i+1}`
    Ppm,
    /// Inertia `i/(i+2)` plus the correction term `−i/(i+2)·(x_i − y_{i−1})`.
    Accelerated,
    /// Güler's first method (FISTA-type inertia) with `M` in place of `∂f`.
    GulerFirst,
    /// Güler's second method.
    GulerSecond,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Ppm,
        Scheme::Accelerated,
        Scheme::GulerFirst,
        Scheme::GulerSecond,
    ];

    /// Worst-case residual bound at iteration `i ≥ 1` for initial distance `r`.
    pub fn bound<T: Scalar>(self, i: usize, r: T) -> Option<T> {
        let fi = T::of_usize(i);
        match self {
            Scheme::Ppm => Some(ppm_bound(i, r)),
            Scheme::Accelerated => Some(r * r / (fi * fi)),
            Scheme::GulerFirst | Scheme::GulerSecond => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ppm => "ppm",
            Scheme::Accelerated => "accel",
            Scheme::GulerFirst => "guler1",
            Scheme::GulerSecond => "guler2",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scheme `{s}`")))
    }
}

/// `(1 − 1/i)^{i−1} R²/i`, the exact worst case of the proximal point method.
pub fn ppm_bound<T: Scalar>(i: usize, r: T) -> T {
    let fi = T::of_usize(i);
    (T::one() - T::one() / fi).powi(i as i32 - 1) * r * r / fi
}

/// State of the `y` update. `step` is the loop index `i` of the update that
/// produces `y_{i+1}`.
#[derive(Debug, Clone)]
pub struct Extrapolator<T> {
    scheme: Scheme,
    step: usize,
    t: T,
}

impl<T: Scalar> Extrapolator<T> {
    pub fn new(scheme: Scheme) -> Self {
        Extrapolator {
            scheme,
            step: 0,
            t: T::one(),
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Back to the start of a run: `i = 0`, `t_0 = 1`.
    pub fn reset(&mut self) {
        self.step = 0;
        self.t = T::one();
    }

    /// `y_{i+1}` from `x_{i+1}`, `x_i`, `y_i`, `y_{i−1}`; advances `i`.
    pub fn next(&mut self, x_next: &Vector<T>, x_cur: &Vector<T>, y_cur: &Vector<T>, y_prev: &Vector<T>) -> Vector<T> {
        let i = T::of_usize(self.step);
        self.step += 1;
        match self.scheme {
            Scheme::Ppm => x_next.clone(),
            Scheme::Accelerated => {
                let alpha = i / (i + T::of(2.0));
                let mut y = x_next.clone();
                if alpha != T::zero() {
                    y.axpy(alpha, &(x_next - x_cur));
                    y.axpy(-alpha, &(x_cur - y_prev));
                }
                y
            }
            Scheme::GulerFirst | Scheme::GulerSecond => {
                let t = self.t;
                let t_next = (T::one() + (T::one() + T::of(4.0) * t * t).sqrt()) / T::of(2.0);
                self.t = t_next;
                let mut y = x_next.clone();
                y.axpy((t - T::one()) / t_next, &(x_next - x_cur));
                if self.scheme == Scheme::GulerSecond {
                    y.axpy(t / t_next, &(x_next - y_cur));
                }
                y
            }
        }
    }
}

/// `t_{i+1} = (1 + √(1 + 4 t_i²)) / 2` from `t_0 = 1`; returns `t_0..=t_n`.
pub fn guler_t_sequence<T: Scalar>(n: usize) -> Vec<T> {
    let mut t = vec![T::one()];
    for _ in 0..n {
        let last = *t.last().unwrap();
        t.push((T::one() + (T::one() + T::of(4.0) * last * last).sqrt()) / T::of(2.0));
    }
    t
}

/// When to re-initialize `x_0 = y_0 = y_{−1}` at the current iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RestartPolicy {
    /// Restart after every `k` iterations.
    pub interval: Option<usize>,
    /// Restart whenever the residual increases from one iteration to the next.
    pub adaptive: bool,
}

impl RestartPolicy {
    pub fn none() -> Self {
        RestartPolicy::default()
    }

    pub fn every(k: usize) -> Self {
        RestartPolicy {
            interval: Some(k),
            adaptive: false,
        }
    }

    pub fn is_active(&self) -> bool {
        self.interval.is_some() || self.adaptive
    }

    pub fn validate(&self) -> Result<()> {
        if self.interval == Some(0) {
            return Err(Error::InvalidParameter("restart interval must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn fires<T: Scalar>(&self, iteration: usize, residual: T, previous: Option<T>) -> bool {
        let periodic = self.interval.is_some_and(|k| iteration.is_multiple_of(k));
        let increase = self.adaptive && previous.is_some_and(|p| residual > p);
        periodic || increase
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions<T> {
    pub iters: usize,
    /// Initial distance `R ≥ ‖x_0 − x*‖`; enables the bound column.
    pub radius: Option<T>,
    pub restart: RestartPolicy,
    pub keep_iterates: bool,
}

impl<T: Scalar> RunOptions<T> {
    pub fn new(iters: usize) -> Self {
        RunOptions {
            iters,
            radius: None,
            restart: RestartPolicy::none(),
            keep_iterates: true,
        }
    }

    pub fn with_radius(mut self, r: T) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn with_restart(mut self, restart: RestartPolicy) -> Self {
        self.restart = restart;
        self
    }

    pub fn without_iterates(mut self) -> Self {
        self.keep_iterates = false;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.iters == 0 {
            return Err(Error::InvalidParameter("iteration count must be at least 1".into()));
        }
        if let Some(r) = self.radius {
            if !(r >= T::zero()) || !r.is_finite() {
                return Err(Error::InvalidParameter(format!("radius must be nonnegative, got {r}")));
            }
        }
        self.restart.validate()
    }
}

/// Runs `scheme` on `resolvent` from `x0`, recording residuals in the
/// resolvent's metric.
pub fn run_scheme<T: Scalar, R: Resolvent<T>>(
    resolvent: &R,
    scheme: Scheme,
    x0: &Vector<T>,
    options: &RunOptions<T>,
) -> Result<ResidualTrace<T>> {
    run_scheme_observed(resolvent, scheme, x0, options, |_| None)
}

/// [`run_scheme`] with an observer evaluated at `x0` and every `x_i`; its
/// value fills the gap column.
pub fn run_scheme_observed<T: Scalar, R: Resolvent<T>>(
    resolvent: &R,
    scheme: Scheme,
    x0: &Vector<T>,
    options: &RunOptions<T>,
    mut observe: impl FnMut(&Vector<T>) -> Option<T>,
) -> Result<ResidualTrace<T>> {
    options.validate()?;
    check_dim("initial point", resolvent.dim(), x0.dim())?;

    let mut extrapolator = Extrapolator::new(scheme);
    let mut x = x0.clone();
    let mut y = x0.clone();
    let mut y_prev = x0.clone();
    let initial_gap = observe(x0);
    let mut previous_residual = None;
    let mut records = Vec::with_capacity(options.iters);

    for i in 1..=options.iters {
        let x_next = resolvent.apply(&y)?;
        let residual = resolvent.metric(&(&x_next - &y));

        let mut record = TraceRecord::new(i, residual);
        if !options.restart.is_active() {
            record.bound = options.radius.and_then(|r| scheme.bound(i, r));
        }
        record.gap = observe(&x_next);
        if options.keep_iterates {
            record.x = Some(x_next.clone());
            record.y_prev = Some(y.clone());
        }

        if options.restart.fires(i, residual, previous_residual) && i < options.iters {
            record.restart = true;
            extrapolator.reset();
            y_prev = x_next.clone();
            y = x_next.clone();
            x = x_next;
        } else {
            let y_next = extrapolator.next(&x_next, &x, &y, &y_prev);
            y_prev = std::mem::replace(&mut y, y_next);
            x = x_next;
        }
        previous_residual = Some(residual);
        records.push(record);
    }

    Ok(ResidualTrace {
        records,
        initial_gap,
        final_x: x,
        final_y: y,
    })
}

/// Proximal point method `x_{i+1} = J(x_i)`.
pub fn ppm<T: Scalar, R: Resolvent<T>>(resolvent: &R, x0: &Vector<T>, options: &RunOptions<T>) -> Result<ResidualTrace<T>> {
    run_scheme(resolvent, Scheme::Ppm, x0, options)
}

/// The accelerated proximal point method with the `O(1/i²)` residual rate.
pub fn accelerated_ppm<T: Scalar, R: Resolvent<T>>(
    resolvent: &R,
    x0: &Vector<T>,
    options: &RunOptions<T>,
) -> Result<ResidualTrace<T>> {
    run_scheme(resolvent, Scheme::Accelerated, x0, options)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GulerVariant {
    First,
    Second,
}

pub fn guler<T: Scalar, R: Resolvent<T>>(
    variant: GulerVariant,
    resolvent: &R,
    x0: &Vector<T>,
    options: &RunOptions<T>,
) -> Result<ResidualTrace<T>> {
    let scheme = match variant {
        GulerVariant::First => Scheme::GulerFirst,
        GulerVariant::Second => Scheme::GulerSecond,
    };
    run_scheme(resolvent, scheme, x0, options)
}

/// Runs `scheme` for `iters` iterations in total, restarting every `interval`
/// iterations from the latest `x`.
pub fn restarted<T: Scalar, R: Resolvent<T>>(
    scheme: Scheme,
    resolvent: &R,
    x0: &Vector<T>,
    interval: usize,
    iters: usize,
) -> Result<ResidualTrace<T>> {
    let options = RunOptions::new(iters).with_restart(RestartPolicy::every(interval));
    run_scheme(resolvent, scheme, x0, &options)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartMode {
    /// Residual contraction: `k ≈ e/(λμ)`.
    Operator,
    /// Saddle-gap contraction: `k ≈ e/(2λμ)`.
    Function,
}

/// Restart interval minimizing the restart bound's overall rate, at least 1.
pub fn optimal_restart_interval(lambda: f64, mu: f64, mode: RestartMode) -> Result<usize> {
    let product = lambda * mu;
    if !(product > 0.0) || !product.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda * mu must be positive, got {product}"
        )));
    }
    let k = match mode {
        RestartMode::Operator => std::f64::consts::E / product,
        RestartMode::Function => std::f64::consts::E / (2.0 * product),
    };
    Ok((k.round() as usize).max(1))
}

/// Estimates a fixed point by `iters` plain proximal point steps.
pub fn fixed_point_estimate<T: Scalar, R: Resolvent<T>>(resolvent: &R, x0: &Vector<T>, iters: usize) -> Result<Vector<T>> {
    check_dim("initial point", resolvent.dim(), x0.dim())?;
    let mut x = x0.clone();
    for _ in 0..iters {
        x = resolvent.apply(&x)?;
    }
    Ok(x)
}
