//! `qinfo` command-line front end.
//!
//! Exit status: 0 on success, 1 when a computation or input file is rejected,
//! 2 on malformed command lines. Data goes to stdout or the named output file,
//! diagnostics to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qinfo", version, about = "Information measures for finite quantum systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropy, uncertainty and information of one outcome distribution.
    Info {
        /// Comma-separated probabilities, e.g. 0.6,0.4.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        p: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Scheme::Unit)]
        scheme: Scheme,
    },
    /// Describe a state: density matrix, information vector, total information.
    #[command(group(ArgGroup::new("input").required(true).args(["state", "info"])))]
    State {
        /// State file: {"dim","re","im"} or {"i"}.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Qubit information vector, e.g. 0,0,1.
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        info: Option<[f64; 3]>,
        #[arg(long, value_enum, default_value_t = Scheme::Unit)]
        scheme: Scheme,
    },
    /// Build and verify a complete set of mutually unbiased bases.
    Mub {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=16))]
        dim: u32,
        /// Write the bases here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Tabulate the rotation-law ODE against cos nθ and the Malus probabilities.
    Malus {
        /// Rotation-law parameter n > 0 (0.5 spin, 1 photon, 2 graviton).
        #[arg(long, value_parser = positive_f64)]
        n: f64,
        /// start:stop:count, endpoints included.
        #[arg(long, value_parser = parse_sweep, allow_hyphen_values = true)]
        sweep: Sweep,
        /// RK4 steps per 2π of θ.
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u32).range(100..))]
        steps_per_turn: u32,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Correlation tensor, CHSH value and correlation information of two qubits.
    Entangle {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = Planes::Canonical)]
        planes: Planes,
    },
    /// Integrate di/dt = u × i for a qubit under a constant Hamiltonian.
    Evolve {
        #[arg(long)]
        state: PathBuf,
        /// 2×2 Hermitian matrix file {"dim","re","im"}.
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long, value_parser = non_negative_f64)]
        t: f64,
        #[arg(long, default_value_t = 1e-3, value_parser = positive_f64)]
        dt: f64,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Seeded Stern–Gerlach trials, optionally with a Chebyshev check.
    SgSim {
        /// Angle between preparation and measurement direction, radians.
        #[arg(long, value_parser = finite_f64, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = positive_f64)]
        chebyshev_k: Option<f64>,
        #[arg(long, default_value_t = 1000, requires = "chebyshev_k", value_parser = clap::value_parser!(u64).range(100..))]
        runs: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scheme {
    Unit,
    Bits,
}

impl From<Scheme> for qinfo::infomeasure::NormalizationScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Unit => Self::Unit,
            Scheme::Bits => Self::Bits,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Planes {
    /// x-y plane on both sides.
    Canonical,
    /// Maximize over all plane pairs with the numeric optimizer.
    Optimize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Sweep {
    start: f64,
    stop: f64,
    count: usize,
}

impl Sweep {
    fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.start + step * k as f64).collect()
    }
}

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, k] = parts.as_slice() else {
        return Err("expected start:stop:count".into());
    };
    let start = finite_f64(a)?;
    let stop = finite_f64(b)?;
    let count: usize = k.parse().map_err(|_| format!("count '{k}' is not a positive integer"))?;
    if count == 0 {
        return Err("count must be at least 1".into());
    }
    Ok(Sweep { start, stop, count })
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected three comma-separated numbers, got {}", parts.len()));
    };
    Ok([finite_f64(a)?, finite_f64(b)?, finite_f64(c)?])
}

fn finite_f64(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("'{s}' is not a finite number")),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let x = finite_f64(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{x} must be positive"))
    }
}

fn non_negative_f64(s: &str) -> Result<f64, String> {
    let x = finite_f64(s)?;
    if x >= 0.0 {
        Ok(x)
    } else {
        Err(format!("{x} must not be negative"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qinfo: error: {e}");
            ExitCode::from(1)
        }
    }
}
