use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use fracdiff::io::{format_float, load_config, weights_csv, write_outputs, RunManifest};
use fracdiff::verification::{convergence_study, AnalyticKernel, Suite};
use fracdiff::{max_stable_dt, run, ConfigError, Initial, Params, SimulationError, WeightTable};

#[derive(Parser)]
#[command(
    name = "fracdiff",
    version,
    about = "Space-fractional diffusion on a bounded interval"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write snapshots, a manifest and a gnuplot script.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the stencil weights w_k for -kmax..=kmax as CSV.
    Weights {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        theta: f64,
        #[arg(long)]
        kmax: usize,
    },
    /// Print the largest stable explicit time step.
    Stability {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        k_alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
    },
    /// Run the acceptance checks; exits non-zero if any fails.
    Verify {
        /// table1, identities, kernels or schemes; all suites when omitted.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Grid refinement study of a point-source config against its analytic kernel.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Restrict the error to nodes in [a, b].
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["A", "B"])]
        window: Option<Vec<f64>>,
    },
}

enum Failure {
    /// Bad input: exit code 2.
    Invalid(String),
    /// Everything else: exit code 1.
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Runtime(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<SimulationError> for Failure {
    fn from(e: SimulationError) -> Self {
        match e {
            SimulationError::ConfigInvalid(_) | SimulationError::Grid(_) => {
                Failure::Invalid(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn params(alpha: f64, theta: f64) -> Result<Params, Failure> {
    Params::new(alpha, theta).map_err(|e| Failure::Invalid(e.to_string()))
}

fn simulate(config: PathBuf, out: Option<PathBuf>) -> Result<(), Failure> {
    let run_cfg = load_config(&config)?;
    let dir = out
        .or(run_cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("output"));
    let start = Instant::now();
    let series = run(&run_cfg.simulation)?;
    let elapsed = start.elapsed().as_secs_f64();
    let manifest = RunManifest::new(
        &run_cfg.simulation,
        run_cfg.output_dir.clone(),
        series.dt(),
        series.n_steps,
        elapsed,
    );
    write_outputs(&series, &manifest, &dir)?;
    println!(
        "{} steps of dt = {}, {} snapshots written to {} ({elapsed:.2}s)",
        series.n_steps,
        format_float(series.dt()),
        series.snapshots.len(),
        dir.display()
    );
    Ok(())
}

fn converge(config: PathBuf, levels: usize, window: Option<Vec<f64>>) -> Result<(), Failure> {
    let cfg = load_config(&config)?.simulation;
    let (alpha, theta) = (cfg.params.alpha(), cfg.params.theta());
    let (l, r) = (cfg.grid.left(), cfg.grid.right());
    if cfg.initial != Initial::Delta || (l + r).abs() > 1e-12 * (r - l) {
        return Err(Failure::Invalid(
            "convergence studies need a delta initial condition on a domain centred at 0".into(),
        ));
    }
    let (kernel, default_window) = if alpha == 2.0 {
        (AnalyticKernel::gauss(cfg.k_alpha), None)
    } else if theta == 0.0 && (alpha - 1.0).abs() <= 0.01 {
        // the heavy tail is cut by the domain, so score the inner part only
        (
            AnalyticKernel::cauchy(cfg.k_alpha),
            Some((0.7 * l, 0.7 * r)),
        )
    } else {
        return Err(Failure::Invalid(format!(
            "no analytic kernel for alpha = {alpha}, theta = {theta}"
        )));
    };
    let window = window.map(|w| (w[0], w[1])).or(default_window);
    let table = convergence_study(&cfg, &kernel, levels, window)?;
    print!("{}", table.to_csv());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { config, out } => simulate(config, out),
        Command::Weights { alpha, theta, kmax } => {
            let table = WeightTable::symmetric(params(alpha, theta)?, kmax);
            print!("{}", weights_csv(&table));
            Ok(())
        }
        Command::Stability {
            alpha,
            theta,
            k_alpha,
            h,
        } => {
            if !(k_alpha > 0.0 && h > 0.0) {
                return Err(Failure::Invalid("k-alpha and h must be positive".into()));
            }
            let dt = max_stable_dt(&params(alpha, theta)?, k_alpha, h);
            // 15 significant digits hide the last-bit noise of h^alpha
            let rounded: f64 = format!("{dt:.14e}").parse().expect("formatted float");
            println!("{}", format_float(rounded));
            Ok(())
        }
        Command::Verify { suite } => {
            let suites = match suite.as_deref() {
                None => Suite::ALL.to_vec(),
                Some(name) => vec![Suite::parse(name).ok_or_else(|| {
                    Failure::Invalid(format!(
                        "unknown suite `{name}` (expected table1, identities, kernels or schemes)"
                    ))
                })?],
            };
            let mut failed = 0;
            for s in suites {
                for check in s.checks() {
                    println!("{check}");
                    failed += usize::from(!check.passed);
                }
            }
            if failed > 0 {
                return Err(Failure::Runtime(format!("{failed} check(s) failed")));
            }
            Ok(())
        }
        Command::Converge {
            config,
            levels,
            window,
        } => converge(config, levels, window),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
