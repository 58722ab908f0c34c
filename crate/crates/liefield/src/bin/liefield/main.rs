//! `liefield` command-line front end.
//!
//! Exit codes: 0 success, 1 check failed, 2 usage or config error,
//! 3 numeric failure.

mod numeric;
mod output;
mod symbolic;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liefield_core::normal::DEFAULT_MAX_DEGREE;
use liefield_core::{Mode, Strategy};

use numeric::{KernelArgs, Overrides, PsdArgs, Route, TensorCheck};
use output::{CliError, Report, Status};

#[derive(Parser, Debug)]
#[command(
    name = "liefield",
    version,
    about = "Deformed free-field algebra: symbolic rewriting and numeric checks"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Algebra mode; defaults to the config file's mode, then classical.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Worker threads for parallel sums. Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Model configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the deformation parameter of the config.
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Classical,
    Quantum,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Classical => Mode::Classical,
            ModeArg::Quantum => Mode::Quantum,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Leftmost => Strategy::Leftmost,
            StrategyArg::Rightmost => Strategy::Rightmost,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an expression and print it canonically.
    Parse { expr: String },
    /// Rewrite an expression into normal order.
    NormalOrder {
        expr: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Leftmost)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Normal-ordered commutator of two expressions.
    Commutator {
        lhs: String,
        rhs: String,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Vacuum expectation value; evaluated numerically when a config is given.
    Vev { expr: String },
    /// Moments <phi_f^k> for k = 1..n.
    Moments {
        #[arg(long, default_value = "f")]
        label: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Cumulants C_1..C_n by two routes, with their Eulerian weights.
    Cumulants {
        #[arg(long, default_value = "f")]
        label: String,
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Connected correlator of the given labels, leftmost first.
    Connected {
        #[arg(required = true)]
        labels: Vec<String>,
    },
    /// Jacobi identity over basis monomials up to a total degree.
    Jacobi {
        #[arg(long, value_delimiter = ',', default_value = "f,g,h")]
        labels: Vec<String>,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Leftmost)]
        strategy: StrategyArg,
    },
    /// Orthogonalized n-particle state.
    GsState {
        #[arg(required = true)]
        labels: Vec<String>,
    },
    /// Orthogonalized inner product against the partition-sum formula.
    GsipVerify {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Particle number of the bra; defaults to n.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Positivity of the Gram matrix of few-particle states on the lattice.
    PsdCheck {
        #[arg(long)]
        max_particles: usize,
        #[arg(long)]
        seed: u64,
        /// Label pool; defaults to every function in the config.
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<String>>,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long, default_value_t = 1e-10)]
        partition_tolerance: f64,
    },
    /// Two-point kernel C, Q+, QC or gQ+ between two gaussian test functions.
    Kernel {
        #[arg(long, default_value = "QC")]
        variant: String,
        #[arg(long, default_value = "g")]
        g: String,
        #[arg(long, default_value = "f")]
        f: String,
        #[arg(long, default_value_t = 48)]
        order: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 7.0)]
        sigmas: f64,
    },
    /// Evaluate a scalar expression through the configured model.
    EvalForm {
        expr: String,
        #[arg(long, value_enum, default_value_t = Route::Momentum)]
        route: Route,
    },
    /// Field measurements in a one-particle state.
    Scattering {
        #[arg(long, default_value = "g")]
        g: String,
        #[arg(long, default_value = "f")]
        f: String,
    },
    /// Overlap conditions of momentum boxes, written lo:hi per axis.
    Overlap {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        s1: String,
        #[arg(long, allow_hyphen_values = true)]
        s2: String,
    },
    /// Tensor-layer identities.
    Tensor {
        #[arg(value_enum)]
        check: TensorCheck,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::NormalOrder { .. } => "normal-order",
            Command::Commutator { .. } => "commutator",
            Command::Vev { .. } => "vev",
            Command::Moments { .. } => "moments",
            Command::Cumulants { .. } => "cumulants",
            Command::Connected { .. } => "connected",
            Command::Jacobi { .. } => "jacobi",
            Command::GsState { .. } => "gs-state",
            Command::GsipVerify { .. } => "gsip-verify",
            Command::PsdCheck { .. } => "psd-check",
            Command::Kernel { .. } => "kernel",
            Command::EvalForm { .. } => "eval-form",
            Command::Scattering { .. } => "scattering",
            Command::Overlap { .. } => "overlap",
            Command::Tensor { .. } => "tensor",
        }
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    let overrides = Overrides {
        mode: g.mode.map(Mode::from),
        lambda: g.lambda,
    };
    // symbolic commands read the mode from the config only when one is given
    let symbolic_mode = || -> Result<Mode, CliError> {
        match (overrides.mode, &g.config) {
            (Some(m), _) => Ok(m),
            (None, Some(p)) => Ok(numeric::load(Some(p), overrides)?.spec.mode),
            (None, None) => Ok(Mode::Classical),
        }
    };
    let config = || numeric::load(g.config.as_deref(), overrides);
    match &cli.command {
        Command::Parse { expr } => symbolic::parse(expr, symbolic_mode()?),
        Command::NormalOrder {
            expr,
            strategy,
            max_degree,
        } => symbolic::normal_order(expr, symbolic_mode()?, (*strategy).into(), *max_degree),
        Command::Commutator {
            lhs,
            rhs,
            max_degree,
        } => symbolic::commutator(lhs, rhs, symbolic_mode()?, *max_degree),
        Command::Vev { expr } => match &g.config {
            Some(_) => {
                let cfg = config()?;
                numeric::vev(expr, cfg.spec.mode, Some(&cfg))
            }
            None => numeric::vev(expr, symbolic_mode()?, None),
        },
        Command::Moments { label, n } => symbolic::moments_report(label, *n, symbolic_mode()?),
        Command::Cumulants { label, n } => symbolic::cumulants_report(label, *n, symbolic_mode()?),
        Command::Connected { labels } => symbolic::connected(labels, symbolic_mode()?),
        Command::Jacobi {
            labels,
            degree,
            strategy,
        } => symbolic::jacobi(labels, *degree, symbolic_mode()?, (*strategy).into()),
        Command::GsState { labels } => symbolic::gs_state(labels, symbolic_mode()?),
        Command::GsipVerify { n, m } => {
            symbolic::gsip_verify(m.unwrap_or(*n), *n, symbolic_mode()?)
        }
        Command::PsdCheck {
            max_particles,
            seed,
            labels,
            tolerance,
            partition_tolerance,
        } => numeric::psd(
            config()?,
            &PsdArgs {
                labels: labels.as_deref(),
                max_particles: *max_particles,
                seed: *seed,
                tolerance: *tolerance,
                partition_tolerance: *partition_tolerance,
            },
        ),
        Command::Kernel {
            variant,
            g: gl,
            f,
            order,
            tolerance,
            sigmas,
        } => numeric::kernel(
            &config()?,
            &KernelArgs {
                variant,
                g: gl,
                f,
                order: *order,
                tolerance: *tolerance,
                sigmas: *sigmas,
            },
        ),
        Command::EvalForm { expr, route } => numeric::eval_form(expr, *route, &config()?),
        Command::Scattering { g: gl, f } => numeric::scattering(&config()?, gl, f),
        Command::Overlap { s, s1, s2 } => numeric::overlap(s, s1, s2),
        Command::Tensor {
            check,
            k,
            samples,
            seed,
        } => numeric::tensor(*check, *k, *samples, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.global.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} workers: {e}"))),
        },
        None => run(&cli),
    };
    match result {
        Ok(report) => {
            let text = output::render(
                cli.command.name(),
                &report,
                cli.global.format == FormatArg::Machine,
            );
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            match report.status {
                Status::Passed => ExitCode::SUCCESS,
                Status::Failed => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
