mod commands;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use settings::Settings;

#[derive(Parser, Debug)]
#[command(name = "kekule", version, about = "Colored-lattice Floquet codes, monitored dynamics and Majorana spectra")]
pub struct Cli {
    /// key = value file of run defaults
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// worker threads (0 uses every core)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lattice construction, invariant checks and fixtures
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Check-measurement schedules
    #[command(subcommand)]
    Floquet(FloquetCmd),
    /// Measurement-only dynamics over the color simplex
    #[command(subcommand)]
    Monitored(MonitoredCmd),
    /// Free-Majorana spectra
    #[command(subcommand)]
    Fermion(FermionCmd),
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// lattice family
    pub name: Option<String>,
    /// cells along each axis (2d lattices take two values)
    pub dims: Vec<usize>,
    #[arg(long = "lattice")]
    pub lattice_flag: Option<String>,
    #[arg(long = "dims", num_args = 2..=3)]
    pub dims_flag: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Run the invariant suite; exit status 1 when any invariant fails
    Validate {
        #[command(flatten)]
        target: Target,
        /// check a fixture file instead of a generated lattice
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the lattice as a fixture file
    Export {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FloquetCmd {
    /// Run cycles of a schedule and write the measurement record
    Run {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "3round")]
        schedule: String,
        #[arg(long)]
        cycles: Option<usize>,
        /// logical initialization: z (lines) or x (membranes)
        #[arg(long, default_value = "z")]
        init: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// also extract syndromes of the last cycle into this file
        #[arg(long)]
        syndromes: Option<PathBuf>,
    },
    /// Check that every schedule preserves the logicals; exit status 1 otherwise
    Verify {
        #[command(flatten)]
        target: Target,
        /// one schedule, or every schedule the lattice supports when omitted
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        cycles: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct DynamicsOpts {
    #[arg(long, default_value = "kekule3d")]
    pub lattice: String,
    /// linear sizes L1 < L2 of the two-size ratio
    #[arg(long, num_args = 2, default_values_t = [2usize, 4])]
    pub sizes: Vec<usize>,
    #[arg(long)]
    pub t_eq: Option<f64>,
    #[arg(long)]
    pub snapshots: Option<usize>,
    #[arg(long)]
    pub spacing: Option<f64>,
    #[arg(long)]
    pub trajectories: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// initial state: lines, membranes, or product-x / product-y / product-z
    #[arg(long, default_value = "lines")]
    pub init: String,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or jsonl
    #[arg(long, default_value = "csv")]
    pub format: String,
}

#[derive(Subcommand, Debug)]
pub enum MonitoredCmd {
    /// Two-size ratio over a grid of the simplex
    Sweep {
        #[command(flatten)]
        opts: DynamicsOpts,
        /// points per simplex edge
        #[arg(long, default_value_t = 10)]
        grid: usize,
    },
    /// Two-size ratio along the edge where one color is absent
    Edge {
        #[command(flatten)]
        opts: DynamicsOpts,
        #[arg(long)]
        absent: String,
        /// shares of the first remaining color; defaults to 0, 0.1, ..., 1
        #[arg(long, value_delimiter = ',')]
        fractions: Option<Vec<f64>>,
    },
    /// Two-size ratio at one point
    Point {
        #[command(flatten)]
        opts: DynamicsOpts,
        #[arg(long, num_args = 3, allow_negative_numbers = true)]
        p: Vec<f64>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FermionOpts {
    #[arg(long, default_value = "kekule3d")]
    pub lattice: String,
    /// lieb (solved for the Lieb sector) or reference (the fixed sign set, kekule3d only)
    #[arg(long, default_value = "lieb")]
    pub gauge: String,
    /// sublattice or oriented
    #[arg(long, default_value = "sublattice")]
    pub convention: String,
    /// flip the assigned p3 fluxes
    #[arg(long)]
    pub flip_p3: bool,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum FermionCmd {
    /// Bulk gap at one coupling
    Gap {
        #[command(flatten)]
        opts: FermionOpts,
        #[arg(long = "J", num_args = 3)]
        j: Vec<f64>,
        /// k-points per axis
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Gap over a grid of the coupling simplex
    Map {
        #[command(flatten)]
        opts: FermionOpts,
        /// coupling points per simplex edge
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long)]
        kgrid: Option<usize>,
    },
    /// Gapless interval of J_z along J_x = J_y around the isotropic point
    Window {
        #[command(flatten)]
        opts: FermionOpts,
        #[arg(long)]
        kgrid: Option<usize>,
        #[arg(long, default_value_t = 0.02)]
        step: f64,
        #[arg(long, default_value_t = 0.0025)]
        tol: f64,
    },
    /// Flux of the chosen gauge on every plaquette class; exit status 1 on any mismatch
    Flux {
        #[command(flatten)]
        opts: FermionOpts,
    },
}

/// Exit statuses: 0 success, 1 failed verification, 2 bad input or I/O.
pub enum Failure {
    Verification(String),
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match Settings::load(cli.config.as_deref(), |k| std::env::var(k).ok()) {
        Ok(mut s) => {
            if let Some(t) = cli.threads {
                s.threads = t;
            }
            s
        }
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    if settings.threads > 0 {
        // Only fails when a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(settings.threads).build_global();
    }
    let r = match cli.command {
        Command::Lattice(c) => commands::lattice(c, &settings),
        Command::Floquet(c) => commands::floquet(c, &settings),
        Command::Monitored(c) => commands::monitored(c, &settings),
        Command::Fermion(c) => commands::fermion(c, &settings),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {}", m);
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
    }
}
