//! Frequency, power and (power × g_q/g_l) sweeps, and the built-in presets
//! that tabulate the reference figures.
//!
//! Rows are evaluated independently and emitted in grid order. Grid nodes are
//! computed from `i/(n−1)` so refining an axis from `n` to `2n−1` points
//! reproduces every coarse node bit for bit.

use alloc::vec::Vec;

use crate::noise::{evaluate, EvalFrequency, Formula, NoiseBreakdown, NoiseError};
use crate::params::{ParamError, SystemParams};
use crate::stability::{analyze, StabilityReport, StabilityStatus};
use crate::steady_state::{solve_steady_state, SteadyStateError};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(&'static str),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("base operating point is {}", .0.status)]
    UnstableBase(StabilityReport),
    #[error(transparent)]
    Noise(#[from] NoiseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    FrequencySweep,
    PowerSweep,
    Map2D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisVar {
    /// Analysis frequency, rad/s.
    Omega,
    /// Input power, W.
    Power,
    /// g_q/g_l.
    GqOverGl,
}

impl AxisVar {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisVar::Omega => "omega",
            AxisVar::Power => "power",
            AxisVar::GqOverGl => "gq_over_gl",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub var: AxisVar,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
    pub scale: Scale,
}

impl Axis {
    pub fn linear(var: AxisVar, min: f64, max: f64, n_points: usize) -> Self {
        Axis { var, min, max, n_points, scale: Scale::Linear }
    }

    pub fn log(var: AxisVar, min: f64, max: f64, n_points: usize) -> Self {
        Axis { var, min, max, n_points, scale: Scale::Log }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.n_points < 2 {
            return Err(SweepError::InvalidSpec("an axis needs at least 2 points"));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(SweepError::InvalidSpec("axis bounds must be finite"));
        }
        // A frequency axis may repeat one point; other axes must span a range.
        let ordered = match self.var {
            AxisVar::Omega => self.min <= self.max,
            _ => self.min < self.max,
        };
        if !ordered {
            return Err(SweepError::InvalidSpec("axis minimum must be below its maximum"));
        }
        if self.scale == Scale::Log && !(self.min > 0.0) {
            return Err(SweepError::InvalidSpec("log-scaled axis requires a positive minimum"));
        }
        if self.var == AxisVar::Power && !(self.min > 0.0) {
            return Err(SweepError::InvalidSpec("power axis requires a positive minimum"));
        }
        Ok(())
    }

    pub fn value(&self, index: usize) -> f64 {
        let last = self.n_points - 1;
        if index == 0 {
            return self.min;
        }
        if index == last {
            return self.max;
        }
        let t = index as f64 / last as f64;
        match self.scale {
            Scale::Linear => self.min + (self.max - self.min) * t,
            Scale::Log => {
                let (a, b) = (libm::log(self.min), libm::log(self.max));
                libm::exp(a + (b - a) * t)
            }
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub eval_frequency: EvalFrequency,
    pub base: SystemParams,
    pub formula: Formula,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointOutcome {
    Noise(NoiseBreakdown),
    /// The point is not stable; carries the reason.
    Status(StabilityStatus),
}

impl PointOutcome {
    pub fn breakdown(&self) -> Option<&NoiseBreakdown> {
        match self {
            PointOutcome::Noise(b) => Some(b),
            PointOutcome::Status(_) => None,
        }
    }

    pub fn status(&self) -> StabilityStatus {
        match self {
            PointOutcome::Noise(_) => StabilityStatus::Stable,
            PointOutcome::Status(s) => *s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis1: f64,
    pub axis2: Option<f64>,
    /// ω̃_m at this point, when a steady state exists.
    pub omega_m_eff: Option<f64>,
    pub outcome: PointOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

fn evaluate_point(
    params: &SystemParams,
    eval: EvalFrequency,
    formula: Formula,
) -> Result<(Option<f64>, PointOutcome), SweepError> {
    let ss = match solve_steady_state(params) {
        Ok(ss) => ss,
        Err(SteadyStateError::UnphysicalSoftMode { omega_m_eff }) => {
            return Ok((Some(omega_m_eff), PointOutcome::Status(StabilityStatus::Unphysical)))
        }
        Err(SteadyStateError::NonConvergence { .. }) => {
            return Ok((None, PointOutcome::Status(StabilityStatus::Unresolved)))
        }
        Err(SteadyStateError::Params(e)) => return Err(e.into()),
    };
    let report = analyze(params, &ss);
    if report.status != StabilityStatus::Stable {
        return Ok((Some(ss.omega_m_eff), PointOutcome::Status(report.status)));
    }
    let omega = eval.resolve(params, &ss);
    let b = evaluate(params, &ss, omega, formula)?;
    Ok((Some(ss.omega_m_eff), PointOutcome::Noise(b)))
}

/// Spectrum versus analysis frequency at one operating point.
pub fn run_frequency_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    if spec.kind != SweepKind::FrequencySweep || spec.axis1.var != AxisVar::Omega {
        return Err(SweepError::InvalidSpec("frequency sweep needs a single omega axis"));
    }
    spec.axis1.validate()?;
    let params = spec.base;
    let ss = match solve_steady_state(&params) {
        Ok(ss) => ss,
        Err(SteadyStateError::Params(e)) => return Err(e.into()),
        Err(_) => return Err(SweepError::UnstableBase(crate::stability::classify(&params)?)),
    };
    let report = analyze(&params, &ss);
    if report.status != StabilityStatus::Stable {
        return Err(SweepError::UnstableBase(report));
    }
    let rows = spec
        .axis1
        .values()
        .into_iter()
        .map(|omega| {
            let b = evaluate(&params, &ss, omega, spec.formula)?;
            Ok(SweepRow {
                axis1: omega,
                axis2: None,
                omega_m_eff: Some(ss.omega_m_eff),
                outcome: PointOutcome::Noise(b),
            })
        })
        .collect::<Result<Vec<_>, SweepError>>()?;
    Ok(SweepResult { spec: *spec, rows })
}

/// Noise decomposition versus input power.
pub fn run_power_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    if spec.kind != SweepKind::PowerSweep || spec.axis1.var != AxisVar::Power {
        return Err(SweepError::InvalidSpec("power sweep needs a single power axis"));
    }
    spec.axis1.validate()?;
    spec.base.validate()?;
    let rows = spec
        .axis1
        .values()
        .into_iter()
        .map(|power| {
            let params = spec.base.with_power(power);
            let (omega_m_eff, outcome) = evaluate_point(&params, spec.eval_frequency, spec.formula)?;
            Ok(SweepRow { axis1: power, axis2: None, omega_m_eff, outcome })
        })
        .collect::<Result<Vec<_>, SweepError>>()?;
    Ok(SweepResult { spec: *spec, rows })
}

/// Sensitivity and stability over (power, g_q/g_l). Rows are power-major:
/// the g_q/g_l axis varies fastest.
pub fn run_map(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    let ratio_axis = match spec.axis2 {
        Some(a) if spec.kind == SweepKind::Map2D && spec.axis1.var == AxisVar::Power && a.var == AxisVar::GqOverGl => a,
        _ => return Err(SweepError::InvalidSpec("map needs a power axis and a gq_over_gl axis")),
    };
    spec.axis1.validate()?;
    ratio_axis.validate()?;
    spec.base.validate()?;
    let ratios = ratio_axis.values();
    let mut rows = Vec::with_capacity(spec.axis1.n_points * ratio_axis.n_points);
    for power in spec.axis1.values() {
        for &ratio in &ratios {
            let params = spec.base.with_power(power).with_gq_ratio(ratio);
            let (omega_m_eff, outcome) = evaluate_point(&params, spec.eval_frequency, spec.formula)?;
            rows.push(SweepRow { axis1: power, axis2: Some(ratio), omega_m_eff, outcome });
        }
    }
    Ok(SweepResult { spec: *spec, rows })
}

/// Dispatches on `spec.kind`.
pub fn run(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    match spec.kind {
        SweepKind::FrequencySweep => run_frequency_sweep(spec),
        SweepKind::PowerSweep => run_power_sweep(spec),
        SweepKind::Map2D => run_map(spec),
    }
}

/// Reference figure set-ups, all at ω_m/2π = 10 MHz, γ_m/2π = 100 Hz,
/// g_l/2π = 215 Hz, κ/2π = 500 MHz, λ = 810 nm, T = 0, Δ̃ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Spectrum versus ω at P = 10 µW.
    Fig2,
    /// Noise terms versus power at the soft-mode resonance.
    Fig3,
    /// Total noise over (power, g_q/g_l) at the soft-mode resonance.
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Fig2, Preset::Fig3, Preset::Fig4];

    pub fn from_name(name: &str) -> Option<Self> {
        Preset::ALL.into_iter().find(|p| p.name().eq_ignore_ascii_case(name))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    /// The g_q/g_l values of the individual curves in the 1-D presets.
    pub fn curve_ratios(&self) -> &'static [f64] {
        match self {
            Preset::Fig2 | Preset::Fig3 => &[0.0, -0.25, -0.6],
            Preset::Fig4 => &[],
        }
    }

    /// Base parameters. The 1-D presets default to the strongest softening curve.
    pub fn base_params(&self) -> SystemParams {
        let base = SystemParams::baseline();
        match self {
            Preset::Fig2 | Preset::Fig3 => base.with_gq_ratio(-0.6),
            Preset::Fig4 => base,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        let base = self.base_params();
        let wm = base.omega_m;
        match self {
            Preset::Fig2 => SweepSpec {
                kind: SweepKind::FrequencySweep,
                axis1: Axis::linear(AxisVar::Omega, 0.1 * wm, 2.0 * wm, 2000),
                axis2: None,
                eval_frequency: EvalFrequency::Fixed(wm),
                base,
                formula: Formula::Resonant,
            },
            Preset::Fig3 => SweepSpec {
                kind: SweepKind::PowerSweep,
                axis1: Axis::log(AxisVar::Power, 1e-7, 1e-3, 401),
                axis2: None,
                eval_frequency: EvalFrequency::SoftModeResonance,
                base,
                formula: Formula::Resonant,
            },
            Preset::Fig4 => SweepSpec {
                kind: SweepKind::Map2D,
                axis1: Axis::log(AxisVar::Power, 1e-6, 1e-3, 200),
                axis2: Some(Axis::linear(AxisVar::GqOverGl, -1.0, 0.0, 200)),
                eval_frequency: EvalFrequency::SoftModeResonance,
                base,
                formula: Formula::Resonant,
            },
        }
    }

    /// One spec per curve for the 1-D presets; the map preset yields itself.
    pub fn curve_specs(&self) -> Vec<SweepSpec> {
        let spec = self.sweep_spec();
        if self.curve_ratios().is_empty() {
            return alloc::vec![spec];
        }
        self.curve_ratios().iter().map(|&r| SweepSpec { base: spec.base.with_gq_ratio(r), ..spec }).collect()
    }
}
