use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csbattery::Objective;

#[derive(Debug, Parser)]
#[command(name = "csbattery", version, about = "Charging dynamics of central-spin quantum batteries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Battery populations, entropy, injected energy and ergotropy on a time grid
    Trace(TraceArgs),
    /// Charging time and the battery state it produces
    Charge(ChargeArgs),
    /// Charging summaries over a range of charger excitations
    Sweep(SweepArgs),
    /// Measured charging time against the two limiting predictions
    Regimes(SweepArgs),
    /// Compare the ladder engine with a full Hilbert-space simulation
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Number of battery spins
    #[arg(long)]
    pub nb: usize,
    /// Number of charger spins
    #[arg(long)]
    pub nc: usize,
    /// Battery field
    #[arg(long = "B", default_value_t = 1.0, allow_negative_numbers = true)]
    pub b_field: f64,
    /// Charger field
    #[arg(long = "h", default_value_t = 1.0, allow_negative_numbers = true)]
    pub h_field: f64,
    /// Flip-flop coupling
    #[arg(long = "A", default_value_t = 1.0, allow_negative_numbers = true)]
    pub coupling: f64,
    /// Ising coupling
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    /// Injected energy
    De,
    /// Ergotropy
    Erg,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::De => Objective::InjectedEnergy,
            ObjectiveArg::Erg => Objective::Ergotropy,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value = "de")]
    pub objective: ObjectiveArg,
    /// End of the search window; defaults to one period of the slowest beat
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Samples in the coarse search
    #[arg(long, default_value_t = csbattery::analysis::DEFAULT_SAMPLES)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Charger excitations
    #[arg(long)]
    pub m: usize,
    /// End of the time grid; defaults to one period of the slowest beat
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Grid points, endpoints included
    #[arg(long, default_value_t = csbattery::analysis::DEFAULT_TRACE_POINTS)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ChargeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1)]
    pub m_min: usize,
    /// Defaults to the charger size
    #[arg(long)]
    pub m_max: Option<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub m: usize,
    /// End of the comparison grid; defaults to one period of the slowest beat
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Comparison times
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    /// Largest accepted deviation
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
