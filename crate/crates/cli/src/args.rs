use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

/// Force-noise spectra, stability maps and SQL analysis for an optomechanical
/// cavity with linear and quadratic coupling.
///
/// Parameters come from the preset (or the built-in baseline), then the
/// config file, then `--set` overrides.
#[derive(Debug, Parser)]
#[command(name = "softmode", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Parameter file of `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Built-in parameter set and grid: fig2, fig3 or fig4.
    #[arg(long, global = true, value_name = "NAME")]
    pub preset: Option<String>,

    /// Write the result here instead of stdout (overwrites).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format; defaults to text for single points and csv for tables.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Shorthand for --format json.
    #[arg(long, global = true, conflicts_with = "format")]
    pub json: bool,

    /// Parameter override, e.g. `--set power_uW=12`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Use the general transfer-function spectrum instead of the closed form.
    #[arg(long, global = true)]
    pub full_formula: bool,

    /// Read --omega, --omega-min and --omega-max as ordinary frequencies (Hz).
    #[arg(long, global = true)]
    pub hz: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the mean-field steady state.
    Steady,
    /// Classify the linearised dynamics at the operating point.
    Stability,
    /// Stability status over a (power, g_q/g_l) grid.
    StabilityMap(GridArgs),
    /// Noise spectrum versus analysis frequency.
    Spectrum(SpectrumArgs),
    /// Noise terms versus input power.
    Powersweep(PowerSweepArgs),
    /// Total noise over a (power, g_q/g_l) grid.
    Map(GridArgs),
    /// The standard-quantum-limit bound at one frequency.
    Sql(SqlArgs),
    /// Input power that minimises the total added noise.
    OptimalPower(OptimalPowerArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Lowest analysis frequency, rad/s (Hz with --hz).
    #[arg(long)]
    pub omega_min: Option<f64>,
    /// Highest analysis frequency, rad/s (Hz with --hz).
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PowerSweepArgs {
    #[arg(long, value_name = "UW")]
    pub p_min_uw: Option<f64>,
    #[arg(long, value_name = "UW")]
    pub p_max_uw: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Fixed analysis frequency; defaults to the soft-mode resonance.
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_name = "UW")]
    pub p_min_uw: Option<f64>,
    #[arg(long, value_name = "UW")]
    pub p_max_uw: Option<f64>,
    #[arg(long)]
    pub power_points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub ratio_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ratio_max: Option<f64>,
    #[arg(long)]
    pub ratio_points: Option<usize>,
    /// Fixed analysis frequency; defaults to the soft-mode resonance.
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SqlArgs {
    /// Analysis frequency; defaults to ω_m.
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OptimalPowerArgs {
    #[arg(long, value_name = "UW", default_value_t = 0.1)]
    pub p_min_uw: f64,
    #[arg(long, value_name = "UW", default_value_t = 1e4)]
    pub p_max_uw: f64,
    /// Fixed analysis frequency; defaults to the soft-mode resonance.
    #[arg(long)]
    pub omega: Option<f64>,
}
