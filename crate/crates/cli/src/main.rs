use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use accelprox::problems::Scale;
use accelprox_cli::{instance_csv, run_experiment, Overrides, RunConfig, RunError};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "accelprox", version, about = "Runs the accelerated proximal point experiments and writes CSV")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a figure preset (fig1..fig5) or the certificate report (cert).
    Experiment {
        /// Experiment name; alternatively pass --experiment.
        name: Option<String>,
        #[arg(long = "experiment", conflicts_with = "name")]
        experiment: Option<String>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Write the problem instance behind a figure preset.
    Instance {
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args, Debug)]
struct Flags {
    /// Method to run: ppm, accel, guler1, guler2, restarted@K, adaptive. Repeatable.
    #[arg(long = "method")]
    methods: Vec<String>,
    #[arg(long)]
    iters: Option<usize>,
    /// Horizon N of the toy operators.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    d1: Option<usize>,
    #[arg(long)]
    d2: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also run the accelerated method restarted every K iterations. Repeatable.
    #[arg(long)]
    restart: Vec<usize>,
    /// Also run the accelerated method restarted when the residual increases.
    #[arg(long)]
    adaptive_restart: bool,
    /// Largest horizon of the certificate report.
    #[arg(long)]
    nmax: Option<usize>,
    /// Length of the plain pre-run that estimates the fixed point.
    #[arg(long)]
    oracle_iters: Option<usize>,
    /// Iteration cap of the inner solver for subproblems without closed form.
    #[arg(long)]
    inner_iters: Option<usize>,
    /// full or desk.
    #[arg(long, default_value = "full")]
    scale: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn overrides(&self) -> Result<Overrides, RunError> {
        let scale: Scale = self.scale.parse().map_err(|e: accelprox::Error| RunError::Config(e.to_string()))?;
        Ok(Overrides {
            methods: self.methods.clone(),
            iters: self.iters,
            n: self.n,
            lambda: self.lambda,
            mu: self.mu,
            rho: self.rho,
            tau: self.tau,
            sigma: self.sigma,
            gamma: self.gamma,
            d1: self.d1,
            d2: self.d2,
            p: self.p,
            seed: self.seed,
            restart: self.restart.clone(),
            adaptive_restart: self.adaptive_restart,
            nmax: self.nmax,
            oracle_iters: self.oracle_iters,
            inner_iters: self.inner_iters,
            scale,
        })
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), RunError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            // a closed reader (e.g. `| head`) is not an error
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        },
    }
    Ok(())
}

fn execute(command: Command) -> Result<(), RunError> {
    match command {
        Command::Experiment { name, experiment, flags } => {
            let name = name
                .or(experiment)
                .ok_or_else(|| RunError::Config("missing experiment name".into()))?;
            let config = RunConfig::resolve(&name, flags.overrides()?)?;
            emit(&run_experiment(&config)?, flags.out.as_ref())
        }
        Command::Instance { name, flags } => {
            let config = RunConfig::resolve(&name, flags.overrides()?)?;
            emit(&instance_csv(&config)?, flags.out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("accelprox: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
