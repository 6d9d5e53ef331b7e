use std::fmt::Write as _;
use std::thread;

use accelprox::linalg::{spectral_norm, Vector};
use accelprox::methods::{fixed_point_estimate, run_scheme, run_scheme_observed, ResidualTrace, RunOptions, Scheme};
use accelprox::operators::{LinearResolvent, Resolvent};
use accelprox::pep_cert::{verify_certificate, verify_certificate_exact};
use accelprox::problems::{
    basis_pursuit_instance, bilinear_game_instance, rotation_worst_case, strongly_monotone_toy,
    strongly_monotone_toy_saddle, toy_start, tv_instance, Preset, ProblemInstance, TV_NOISE_SCALE,
};
use accelprox::splitting::{
    admm, AffineConstraint, MultiplierStep, PdhgStep, ProxDescriptor, NORM_MAX_ITERS, NORM_REL_TOL,
};
use accelprox::DenseMatrix;

use crate::config::{Experiment, MethodSpec, RunConfig};
use crate::RunError;

pub const CSV_COLUMNS: &str = "experiment,method,iteration,residual,bound,infeasibility,gap,restart";
pub const CERT_COLUMNS: &str = "N,deviation,min_eig,dual_value,exact,pass";

/// PDHG steps default to `τ = σ = PDHG_STEP_FACTOR/‖K‖`.
pub const PDHG_STEP_FACTOR: f64 = 0.99;

fn required<T>(value: Option<T>, name: &str) -> Result<T, RunError> {
    value.ok_or_else(|| RunError::Config(format!("parameter {name} is required for this experiment")))
}

/// Runs each method on its own thread; results come back in method order.
fn run_methods<F>(methods: &[MethodSpec], run: F) -> Result<Vec<ResidualTrace<f64>>, RunError>
where
    F: Fn(MethodSpec) -> accelprox::Result<ResidualTrace<f64>> + Sync,
{
    let run = &run;
    thread::scope(|s| {
        let handles: Vec<_> = methods.iter().map(|&m| s.spawn(move || run(m))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("method worker panicked").map_err(RunError::from))
            .collect()
    })
}

fn options(iters: usize, method: MethodSpec, radius: f64) -> RunOptions<f64> {
    RunOptions::new(iters)
        .with_radius(radius)
        .with_restart(method.restart())
        .without_iterates()
}

fn opt(value: Option<f64>) -> String {
    value.map(|v| format!("{v:e}")).unwrap_or_default()
}

struct Outcome {
    meta: Vec<(String, String)>,
    traces: Vec<ResidualTrace<f64>>,
}

/// Runs the configured experiment and returns the CSV text.
pub fn run_experiment(config: &RunConfig) -> Result<String, RunError> {
    let preset = match config.experiment {
        Experiment::Cert => return certificate_csv(config.nmax),
        Experiment::Figure(p) => p,
    };
    let outcome = match preset {
        Preset::Fig1 | Preset::Fig2 => toy(config, preset)?,
        Preset::Fig3 => basis_pursuit(config)?,
        Preset::Fig4 => bilinear_game(config)?,
        Preset::Fig5 => total_variation(config)?,
    };

    let p = &config.params;
    let mut out = format!("# experiment={preset} scale={:?}", config.scale).to_lowercase();
    write!(out, " methods={} iters={}", p.methods.join(";"), p.iters).unwrap();
    let scalars = [
        ("N", p.n.map(|v| v.to_string())),
        ("lambda", p.lambda.map(|v| v.to_string())),
        ("mu", p.mu.map(|v| v.to_string())),
        ("rho", p.rho.map(|v| v.to_string())),
        ("gamma", p.gamma.map(|v| v.to_string())),
        ("d1", p.d1.map(|v| v.to_string())),
        ("d2", p.d2.map(|v| v.to_string())),
        ("p", p.p.map(|v| v.to_string())),
        ("seed", p.seed.map(|v| v.to_string())),
    ];
    for (k, v) in scalars.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))) {
        write!(out, " {k}={v}").unwrap();
    }
    for (k, v) in &outcome.meta {
        write!(out, " {k}={v}").unwrap();
    }
    out.push('\n');
    out.push_str(CSV_COLUMNS);
    out.push('\n');
    for (method, trace) in config.methods.iter().zip(&outcome.traces) {
        for r in &trace.records {
            writeln!(
                out,
                "{preset},{method},{},{:e},{},{},{},{}",
                r.iteration,
                r.residual,
                opt(r.bound),
                opt(r.infeasibility),
                opt(r.gap),
                u8::from(r.restart)
            )
            .unwrap();
        }
    }
    Ok(out)
}

/// Rotation (fig1) or strongly monotone (fig2) toy from `[1, 0]`; `x* = 0`
/// so `R = 1` exactly. The strongly monotone run also records the gap of its
/// saddle function.
fn toy(config: &RunConfig, preset: Preset) -> Result<Outcome, RunError> {
    let p = &config.params;
    let n = required(p.n, "N")?;
    let lambda = required(p.lambda, "lambda")?;
    let (m, phi) = if preset == Preset::Fig1 {
        (rotation_worst_case(n, lambda)?, None)
    } else {
        let mu = required(p.mu, "mu")?;
        (strongly_monotone_toy(n, lambda, mu)?, Some(strongly_monotone_toy_saddle(n, lambda, mu)?))
    };
    let j = LinearResolvent::new(&m, lambda)?;
    let x0 = toy_start::<f64>();
    let zero = Vector::zeros(1);
    let traces = run_methods(&config.methods, |method| {
        run_scheme_observed(&j, method.scheme(), &x0, &options(p.iters, method, 1.0), |x| {
            phi.as_ref().map(|phi| {
                let (u, v) = x.split_at(1);
                phi.gap(&u, &v, &zero, &zero)
            })
        })
    })?;
    Ok(Outcome {
        meta: vec![("radius".into(), "1".into()), ("radius_source".into(), "exact".into())],
        traces,
    })
}

fn oracle_meta(radius: f64, iters: usize) -> Vec<(String, String)> {
    vec![
        ("radius".into(), format!("{radius:e}")),
        ("radius_source".into(), format!("estimate:{iters}-plain-iterations")),
    ]
}

/// Proximal method of multipliers on basis pursuit from zero.
fn basis_pursuit(config: &RunConfig) -> Result<Outcome, RunError> {
    let p = &config.params;
    let (a, b, _) = basis_pursuit_instance::<f64>(required(p.d1, "d1")?, required(p.d2, "d2")?, required(p.seed, "seed")?)?;
    let lambda = required(p.lambda, "lambda")?;
    let step = MultiplierStep::new(&ProxDescriptor::l1(1.0)?, a.clone(), b, lambda, config.inner)?;
    let x0 = Vector::zeros(a.rows() + a.cols());
    let fixed = fixed_point_estimate(&step, &x0, config.oracle_iters)?;
    let radius = x0.dist_sq(&fixed).sqrt();
    let traces = run_methods(&config.methods, |method| {
        run_scheme(&step, method.scheme(), &x0, &options(p.iters, method, radius))
    })?;
    Ok(Outcome {
        meta: oracle_meta(radius, config.oracle_iters),
        traces,
    })
}

fn pdhg_steps(k: &DenseMatrix, tau: Option<f64>, sigma: Option<f64>) -> (f64, f64) {
    match (tau, sigma) {
        (Some(t), Some(s)) => (t, s),
        _ => {
            let step = PDHG_STEP_FACTOR / spectral_norm(k, NORM_REL_TOL, NORM_MAX_ITERS);
            (step, step)
        }
    }
}

/// PDHG on the bilinear game from the constant start; residuals and the
/// radius are in the preconditioner metric.
fn bilinear_game(config: &RunConfig) -> Result<Outcome, RunError> {
    let p = &config.params;
    let (d1, d2) = (required(p.d1, "d1")?, required(p.d2, "d2")?);
    let (k, a, b) = bilinear_game_instance::<f64>(d1, d2, required(p.seed, "seed")?)?;
    let (tau, sigma) = pdhg_steps(&k, p.tau, p.sigma);
    let step = PdhgStep::new(&ProxDescriptor::Linear { a }, &ProxDescriptor::Linear { a: b }, k, tau, sigma)?;
    let x0 = Vector::filled(d1 + d2, p.init);
    let fixed = fixed_point_estimate(&step, &x0, config.oracle_iters)?;
    let radius = step.metric(&(&x0 - &fixed)).max(0.0).sqrt();
    let traces = run_methods(&config.methods, |method| {
        run_scheme(&step, method.scheme(), &x0, &options(p.iters, method, radius))
    })?;
    let mut meta = vec![("tau".into(), tau.to_string()), ("sigma".into(), sigma.to_string())];
    meta.extend(oracle_meta(radius, config.oracle_iters));
    Ok(Outcome { meta, traces })
}

/// ADMM on `½‖Hx − b‖² + γ‖z‖₁` s.t. `Dx − z = 0` from `z = 0`, `ν̂ = 0`.
fn total_variation(config: &RunConfig) -> Result<Outcome, RunError> {
    let p = &config.params;
    let d1 = required(p.d1, "d1")?;
    let tv = tv_instance::<f64>(d1, required(p.p, "p")?, required(p.seed, "seed")?, TV_NOISE_SCALE)?;
    let rho = required(p.rho, "rho")?;
    let f = ProxDescriptor::quadratic(tv.h, tv.b)?;
    let g = ProxDescriptor::l1(required(p.gamma, "gamma")?)?;
    let cons = AffineConstraint::new(tv.d, DenseMatrix::identity(d1 - 1).scaled(&-1.0), Vector::zeros(d1 - 1))?;
    let init = (Vector::zeros(d1 - 1), Vector::zeros(d1 - 1));
    let run = |scheme: Scheme, opts: &RunOptions<f64>| {
        admm(&f, &g, &cons, rho, (&init.0, &init.1), scheme, opts, config.inner)
    };
    let oracle = run(Scheme::Ppm, &RunOptions::new(config.oracle_iters).without_iterates())?;
    let radius = oracle.nu0.dist_sq(&oracle.trace.final_x).sqrt();
    let traces = run_methods(&config.methods, |method| {
        run(method.scheme(), &options(p.iters, method, radius)).map(|t| t.trace)
    })?;
    Ok(Outcome {
        meta: oracle_meta(radius, config.oracle_iters),
        traces,
    })
}

/// One row per horizon `2..=nmax`.
pub fn certificate_csv(nmax: usize) -> Result<String, RunError> {
    let mut out = format!("# experiment=cert nmax={nmax}\n{CERT_COLUMNS}\n");
    for n in 2..=nmax {
        let report = verify_certificate(n)?;
        let exact = verify_certificate_exact(n)?;
        let dual_exact = report.dual_value == 1.0 / (n * n) as f64;
        let pass = report.passes() && exact && dual_exact;
        writeln!(
            out,
            "{n},{:e},{:e},{:e},{},{}",
            report.max_rank1_deviation,
            report.min_eigenvalue,
            report.dual_value,
            u8::from(exact),
            u8::from(pass)
        )
        .unwrap();
    }
    Ok(out)
}

/// The instance behind a figure preset, in the plain-text instance format.
pub fn instance_csv(config: &RunConfig) -> Result<String, RunError> {
    let p = &config.params;
    let preset = match config.experiment {
        Experiment::Figure(p) => p,
        Experiment::Cert => return Err(RunError::Config("the cert experiment has no instance".into())),
    };
    let instance = match preset {
        Preset::Fig1 => ProblemInstance::rotation(required(p.n, "N")?, required(p.lambda, "lambda")?)?,
        Preset::Fig2 => {
            ProblemInstance::strongly_monotone(required(p.n, "N")?, required(p.lambda, "lambda")?, required(p.mu, "mu")?)?
        }
        Preset::Fig3 => ProblemInstance::basis_pursuit(required(p.d1, "d1")?, required(p.d2, "d2")?, required(p.seed, "seed")?)?,
        Preset::Fig4 => ProblemInstance::bilinear_game(required(p.d1, "d1")?, required(p.d2, "d2")?, required(p.seed, "seed")?)?,
        Preset::Fig5 => ProblemInstance::total_variation(
            required(p.d1, "d1")?,
            required(p.p, "p")?,
            required(p.seed, "seed")?,
            TV_NOISE_SCALE,
        )?,
    };
    Ok(instance.to_csv())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;

    fn config(name: &str, overrides: Overrides) -> RunConfig {
        RunConfig::resolve(name, overrides).unwrap()
    }

    #[test]
    fn fig1_shape_and_ordering() {
        let csv = run_experiment(&config("fig1", Overrides::default())).unwrap();
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# experiment=fig1 scale=full methods=ppm;guler1;accel iters=100 N=100"));
        assert_eq!(lines.next(), Some(CSV_COLUMNS));
        let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 300);
        let residual = |method: &str, i: &str| -> f64 {
            rows.iter().find(|r| r[1] == method && r[2] == i).unwrap()[3].parse().unwrap()
        };
        assert!(residual("guler1", "100") > residual("guler1", "1"));
        assert!(residual("accel", "100") < residual("ppm", "100"));
        // ppm bound column is (1 − 1/i)^{i−1}/i with R = 1
        let ppm_row = rows.iter().find(|r| r[1] == "ppm" && r[2] == "100").unwrap();
        let bound: f64 = ppm_row[4].parse().unwrap();
        assert!((bound - 0.99f64.powi(99) / 100.0).abs() < 1e-15);
    }

    #[test]
    fn fig2_restart_rows_and_gap() {
        let csv = run_experiment(&config(
            "fig2",
            Overrides {
                methods: vec!["accel".into()],
                restart: vec![68],
                ..Overrides::default()
            },
        ))
        .unwrap();
        let restarted: Vec<&str> = csv.lines().filter(|l| l.starts_with("fig2,restarted@68,")).collect();
        assert_eq!(restarted.len(), 200);
        let fired: Vec<&str> = restarted.iter().filter(|l| l.ends_with(",1")).map(|l| l.split(',').nth(2).unwrap()).collect();
        assert_eq!(fired, ["68", "136"]);
        // bound column empty under restarts, gap present
        let fields: Vec<&str> = restarted[0].split(',').collect();
        assert_eq!(fields[4], "");
        assert!(fields[6].parse::<f64>().unwrap() >= 0.0);
    }

    #[test]
    fn certificate_rows_pass() {
        let csv = certificate_csv(8).unwrap();
        let rows: Vec<&str> = csv.lines().skip(2).collect();
        assert_eq!(rows.len(), 7);
        assert!(rows.iter().all(|r| r.ends_with(",1,1")));
        assert!(rows[0].starts_with("2,"));
    }

    #[test]
    fn instance_dump_matches_generator() {
        let csv = instance_csv(&config("fig5", Overrides { scale: accelprox::problems::Scale::Desk, ..Overrides::default() })).unwrap();
        let inst = ProblemInstance::from_csv(&csv).unwrap();
        assert_eq!(inst.regenerate().unwrap(), inst);
        assert_eq!(inst.matrix("H").unwrap().shape(), (5, 40));
    }
}
