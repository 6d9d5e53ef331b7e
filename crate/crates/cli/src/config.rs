use std::fmt;
use std::str::FromStr;

use accelprox::methods::{RestartPolicy, Scheme};
use accelprox::problems::{Preset, PresetParams, Scale};
use accelprox::splitting::InnerSolverConfig;

use crate::RunError;

/// Oracle pre-run length for bound columns whose radius is unknown.
pub const ORACLE_ITERS: usize = 10_000;
pub const DEFAULT_NMAX: usize = 60;

/// One method of a run: an extrapolation scheme, optionally restarted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSpec {
    Plain(Scheme),
    /// Accelerated scheme restarted every `k` iterations.
    Restarted(usize),
    /// Accelerated scheme restarted whenever the residual increases.
    Adaptive,
}

impl MethodSpec {
    pub fn scheme(self) -> Scheme {
        match self {
            MethodSpec::Plain(s) => s,
            MethodSpec::Restarted(_) | MethodSpec::Adaptive => Scheme::Accelerated,
        }
    }

    pub fn restart(self) -> RestartPolicy {
        match self {
            MethodSpec::Plain(_) => RestartPolicy::none(),
            MethodSpec::Restarted(k) => RestartPolicy::every(k),
            MethodSpec::Adaptive => RestartPolicy {
                interval: None,
                adaptive: true,
            },
        }
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodSpec::Plain(s) => f.write_str(s.name()),
            MethodSpec::Restarted(k) => write!(f, "restarted@{k}"),
            MethodSpec::Adaptive => f.write_str("adaptive"),
        }
    }
}

impl FromStr for MethodSpec {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, RunError> {
        if s == "adaptive" {
            return Ok(MethodSpec::Adaptive);
        }
        if let Some(k) = s.strip_prefix("restarted@") {
            return match k.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(MethodSpec::Restarted(k)),
                _ => Err(RunError::Config(format!("bad restart interval in method '{s}'"))),
            };
        }
        s.parse::<Scheme>().map(MethodSpec::Plain).map_err(|_| {
            RunError::Config(format!(
                "unknown method '{s}' (expected ppm, accel, guler1, guler2, restarted@K or adaptive)"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Figure(Preset),
    /// Certificate report for every horizon up to `nmax`.
    Cert,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Experiment::Figure(p) => write!(f, "{p}"),
            Experiment::Cert => f.write_str("cert"),
        }
    }
}

impl FromStr for Experiment {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, RunError> {
        if s == "cert" {
            return Ok(Experiment::Cert);
        }
        s.parse::<Preset>()
            .map(Experiment::Figure)
            .map_err(|_| RunError::Config(format!("unknown experiment '{s}' (expected fig1..fig5 or cert)")))
    }
}

/// Command-line overrides of a preset. `None` keeps the preset value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub methods: Vec<String>,
    pub iters: Option<usize>,
    pub n: Option<usize>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub sigma: Option<f64>,
    pub gamma: Option<f64>,
    pub d1: Option<usize>,
    pub d2: Option<usize>,
    pub p: Option<usize>,
    pub seed: Option<u64>,
    /// Adds `restarted@k` for each value.
    pub restart: Vec<usize>,
    /// Adds the `adaptive` method.
    pub adaptive_restart: bool,
    pub nmax: Option<usize>,
    pub oracle_iters: Option<usize>,
    /// Iteration cap of the inner FISTA solver.
    pub inner_iters: Option<usize>,
    pub scale: Scale,
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub scale: Scale,
    pub methods: Vec<MethodSpec>,
    pub params: PresetParams,
    pub nmax: usize,
    pub oracle_iters: usize,
    pub inner: InnerSolverConfig,
}

fn positive(name: &str, value: Option<f64>) -> Result<(), RunError> {
    match value {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(RunError::Config(format!("--{name} must be positive, got {v}"))),
        _ => Ok(()),
    }
}

impl RunConfig {
    /// Resolves names and overrides against the preset; fails before any
    /// computation on unknown names or out-of-range values.
    pub fn resolve(experiment: &str, overrides: Overrides) -> Result<Self, RunError> {
        let experiment: Experiment = experiment.parse()?;
        let mut methods = overrides
            .methods
            .iter()
            .map(|m| m.parse::<MethodSpec>())
            .collect::<Result<Vec<_>, _>>()?;
        for &k in &overrides.restart {
            if k == 0 {
                return Err(RunError::Config("--restart must be at least 1".into()));
            }
        }
        let preset = match experiment {
            Experiment::Figure(p) => p,
            Experiment::Cert => {
                let nmax = overrides.nmax.unwrap_or(DEFAULT_NMAX);
                if nmax < 2 {
                    return Err(RunError::Config(format!("--nmax must be at least 2, got {nmax}")));
                }
                return Ok(RunConfig {
                    experiment,
                    scale: overrides.scale,
                    methods: Vec::new(),
                    params: PresetParams {
                        methods: Vec::new(),
                        ..Preset::Fig1.params(overrides.scale)
                    },
                    nmax,
                    oracle_iters: 0,
                    inner: InnerSolverConfig::default(),
                });
            }
        };

        let mut params = preset.params(overrides.scale);
        if methods.is_empty() {
            methods = params
                .methods
                .iter()
                .map(|m| m.parse::<MethodSpec>())
                .collect::<Result<Vec<_>, _>>()?;
        }
        for &k in &overrides.restart {
            let spec = MethodSpec::Restarted(k);
            if !methods.contains(&spec) {
                methods.push(spec);
            }
        }
        if overrides.adaptive_restart && !methods.contains(&MethodSpec::Adaptive) {
            methods.push(MethodSpec::Adaptive);
        }

        for (name, value) in [
            ("lambda", overrides.lambda),
            ("mu", overrides.mu),
            ("rho", overrides.rho),
            ("tau", overrides.tau),
            ("sigma", overrides.sigma),
            ("gamma", overrides.gamma),
        ] {
            positive(name, value)?;
        }
        if overrides.iters == Some(0) {
            return Err(RunError::Config("--iters must be at least 1".into()));
        }
        if overrides.n.is_some_and(|n| n < 2) {
            return Err(RunError::Config("--n must be at least 2".into()));
        }
        if overrides.inner_iters == Some(0) {
            return Err(RunError::Config("--inner-iters must be at least 1".into()));
        }
        if overrides.oracle_iters == Some(0) {
            return Err(RunError::Config("--oracle-iters must be at least 1".into()));
        }
        if overrides.tau.is_some() != overrides.sigma.is_some() && preset == Preset::Fig4 {
            return Err(RunError::Config("--tau and --sigma must be given together".into()));
        }

        macro_rules! apply {
            ($($field:ident),*) => {
                $(if overrides.$field.is_some() { params.$field = overrides.$field; })*
            };
        }
        apply!(n, lambda, mu, rho, tau, sigma, gamma, d1, d2, p, seed);
        if let Some(iters) = overrides.iters {
            params.iters = iters;
        }
        params.methods = methods.iter().map(|m| m.to_string()).collect();

        Ok(RunConfig {
            experiment,
            scale: overrides.scale,
            methods,
            params,
            nmax: overrides.nmax.unwrap_or(DEFAULT_NMAX),
            oracle_iters: overrides.oracle_iters.unwrap_or(ORACLE_ITERS),
            inner: InnerSolverConfig {
                max_iters: overrides.inner_iters.unwrap_or(InnerSolverConfig::default().max_iters),
                ..InnerSolverConfig::default()
            },
        })
    }
}
