//! System parameters, derived pump scalars and dimensional bookkeeping.

use crate::constants::{HBAR, SPEED_OF_LIGHT, TWO_PI};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    Invalid { field: &'static str, value: f64, reason: &'static str },
    #[error("mass required for SI conversion")]
    MassRequired,
}

/// How the laser detuning is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Detuning {
    /// Bare detuning Δ = ω_c − ω_p, rad/s. The effective detuning follows
    /// self-consistently from the static displacement.
    Bare(f64),
    /// Effective detuning Δ̃ = Δ + g_l·x_s + g_q·x_s², rad/s, held fixed.
    /// The bare detuning is whatever value realises it.
    Effective(f64),
}

impl Detuning {
    pub fn value(&self) -> f64 {
        match *self {
            Detuning::Bare(d) | Detuning::Effective(d) => d,
        }
    }
}

/// Physical inputs of the optomechanical system. All rates in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega_m: f64,
    pub gamma_m: f64,
    pub g_l: f64,
    /// Quadratic coupling; negative values soften the mechanical spring.
    pub g_q: f64,
    pub kappa: f64,
    /// Input laser power, W.
    pub power: f64,
    /// Pump wavelength, m.
    pub wavelength: f64,
    /// Bath temperature, K.
    pub temperature: f64,
    pub detuning: Detuning,
    /// Effective mass in kg; only needed for SI conversion.
    pub mass: Option<f64>,
}

impl SystemParams {
    /// The reference parameter set used by the figure presets:
    /// ω_m/2π = 10 MHz, γ_m/2π = 100 Hz, g_l/2π = 215 Hz, κ/2π = 500 MHz,
    /// λ = 810 nm, P = 10 µW, T = 0, Δ̃ = 0 and no quadratic coupling.
    pub fn baseline() -> Self {
        SystemParams {
            omega_m: TWO_PI * 10.0e6,
            gamma_m: TWO_PI * 100.0,
            g_l: TWO_PI * 215.0,
            g_q: 0.0,
            kappa: TWO_PI * 500.0e6,
            power: 10.0e-6,
            wavelength: 810.0e-9,
            temperature: 0.0,
            detuning: Detuning::Effective(0.0),
            mass: None,
        }
    }

    pub fn with_power(mut self, power: f64) -> Self {
        self.power = power;
        self
    }

    /// Sets g_q = ratio · g_l.
    pub fn with_gq_ratio(mut self, ratio: f64) -> Self {
        self.g_q = ratio * self.g_l;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn with_detuning(mut self, detuning: Detuning) -> Self {
        self.detuning = detuning;
        self
    }

    /// g_q/g_l, or 0 when g_l = 0.
    pub fn gq_ratio(&self) -> f64 {
        if self.g_l == 0.0 {
            0.0
        } else {
            self.g_q / self.g_l
        }
    }

    /// Pump angular frequency ω_p = 2πc/λ.
    pub fn pump_frequency(&self) -> f64 {
        TWO_PI * SPEED_OF_LIGHT / self.wavelength
    }

    /// ε² = 2Pκ/(ħω_p), the squared pump amplitude in (rad/s)².
    pub(crate) fn epsilon_sq(&self) -> f64 {
        2.0 * self.power * self.kappa / (HBAR * self.pump_frequency())
    }

    /// Checks the domain invariants and names the first offending field.
    pub fn validate(&self) -> Result<(), ParamError> {
        fn positive(field: &'static str, value: f64) -> Result<(), ParamError> {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(ParamError::Invalid { field, value, reason: "must be finite and > 0" })
            }
        }
        fn non_negative(field: &'static str, value: f64) -> Result<(), ParamError> {
            if value.is_finite() && value >= 0.0 {
                Ok(())
            } else {
                Err(ParamError::Invalid { field, value, reason: "must be finite and >= 0" })
            }
        }
        positive("omega_m", self.omega_m)?;
        positive("gamma_m", self.gamma_m)?;
        non_negative("g_l", self.g_l)?;
        if !self.g_q.is_finite() {
            return Err(ParamError::Invalid { field: "g_q", value: self.g_q, reason: "must be finite" });
        }
        positive("kappa", self.kappa)?;
        non_negative("power", self.power)?;
        positive("wavelength", self.wavelength)?;
        non_negative("temperature", self.temperature)?;
        let d = self.detuning.value();
        if !d.is_finite() {
            return Err(ParamError::Invalid { field: "detuning", value: d, reason: "must be finite" });
        }
        if let Some(m) = self.mass {
            positive("mass", m)?;
        }
        Ok(())
    }

    /// ħ·m·ω_m·γ_m, the squared force scale in N²/Hz.
    fn force_scale_sq(&self) -> Result<f64, ParamError> {
        let mass = self.mass.ok_or(ParamError::MassRequired)?;
        if !(mass.is_finite() && mass > 0.0) {
            return Err(ParamError::Invalid { field: "mass", value: mass, reason: "must be finite and > 0" });
        }
        Ok(HBAR * mass * self.omega_m * self.gamma_m)
    }
}

/// Pump-derived scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScalars {
    /// ε = sqrt(2Pκ/(ħω_p)), rad/s.
    pub epsilon: f64,
    /// I₀ = ε²/κ², the resonant intracavity photon number.
    pub photon_number_nominal: f64,
    /// ζ = 4·g_l²·I/κ, rad/s, evaluated at the supplied photon number.
    pub zeta: f64,
}

/// Computes ε, I₀ and ζ. `photon_number` is used for ζ (rather than I₀) so
/// that detuned steady states go through the same path.
pub fn derive_scalars(params: &SystemParams, photon_number: f64) -> Result<DerivedScalars, ParamError> {
    params.validate()?;
    if !(photon_number.is_finite() && photon_number >= 0.0) {
        return Err(ParamError::Invalid {
            field: "photon_number",
            value: photon_number,
            reason: "must be finite and >= 0",
        });
    }
    let eps_sq = params.epsilon_sq();
    Ok(DerivedScalars {
        epsilon: libm::sqrt(eps_sq),
        photon_number_nominal: eps_sq / (params.kappa * params.kappa),
        zeta: 4.0 * params.g_l * params.g_l * photon_number / params.kappa,
    })
}

/// Converts a dimensionless force-noise spectrum to N²/Hz: ħ·m·ω_m·γ_m·S.
pub fn to_si_spectrum(s_ff: f64, params: &SystemParams) -> Result<f64, ParamError> {
    Ok(params.force_scale_sq()? * s_ff)
}

/// Converts a force in newtons to the dimensionless force F/sqrt(ħ·m·ω_m·γ_m).
pub fn normalize_force(f_si: f64, params: &SystemParams) -> Result<f64, ParamError> {
    Ok(f_si / libm::sqrt(params.force_scale_sq()?))
}
