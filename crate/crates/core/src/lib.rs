//! Force-sensing noise analysis for a dispersive optomechanical cavity with
//! linear and quadratic optomechanical coupling.
//!
//! The crate is `no_std` (it needs `alloc` for sweep tables) and is organised
//! bottom-up:
//!
//! * [`params`]: physical inputs, derived pump scalars and SI conversion.
//! * [`steady_state`]: the self-consistent mean-field solution.
//! * [`stability`]: drift matrix, Routh–Hurwitz test and eigenvalue cross-check.
//! * [`noise`]: transfer functions, added-force-noise spectra and the SQL.
//! * [`sweep`]: frequency, power and (power × g_q/g_l) sweeps plus built-in presets.
//!
//! Frequencies and rates are angular (rad/s) throughout. Force-noise spectra
//! are dimensionless unless converted with [`params::to_si_spectrum`].

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod constants;
pub mod noise;
pub mod optimize;
pub mod params;
pub mod stability;
pub mod steady_state;
pub mod sweep;

pub use noise::{
    evaluate, optimal_power, s_ff_full, s_ff_no_qoc, s_ff_resonant, spectrum_at, sql_bound, susceptibility,
    thermal_noise, transfer_functions, EvalFrequency, Formula, NoiseBreakdown, NoiseError, OptimalPower,
    TransferFunctions,
};
pub use params::{derive_scalars, normalize_force, to_si_spectrum, DerivedScalars, Detuning, ParamError, SystemParams};
pub use stability::{
    analyze, build_drift_matrix, classify, routh_hurwitz, DriftMatrix, StabilityError, StabilityReport, StabilityStatus,
};
pub use steady_state::{
    find_all_branches, solve_mean_field, solve_steady_state, steady_state_residual, SteadyState, SteadyStateError,
};
pub use sweep::{
    run_frequency_sweep, run_map, run_power_sweep, Axis, AxisVar, PointOutcome, Preset, Scale, SweepError, SweepKind,
    SweepResult, SweepRow, SweepSpec,
};
