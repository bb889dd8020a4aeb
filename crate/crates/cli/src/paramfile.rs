//! Flat `key = value` parameter files and `--set` overrides.
//!
//! Keys are case-insensitive and carry their unit in the name; frequencies
//! are ordinary frequencies in Hz and are converted to rad/s on load.
//!
//! ```text
//! # conventional optomechanics
//! power_uW = 12
//! g_q_over_g_l = -0.45
//! ```

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::path::Path;

use softmode_core::{Detuning, SystemParams};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Key {
    OmegaMHz,
    GammaMHz,
    GlHz,
    GqHz,
    GqOverGl,
    KappaHz,
    PowerUw,
    WavelengthNm,
    TemperatureK,
    DetuningMode,
    DetuningHz,
    MassKg,
}

impl Key {
    pub const ALL: [Key; 12] = [
        Key::OmegaMHz,
        Key::GammaMHz,
        Key::GlHz,
        Key::GqHz,
        Key::GqOverGl,
        Key::KappaHz,
        Key::PowerUw,
        Key::WavelengthNm,
        Key::TemperatureK,
        Key::DetuningMode,
        Key::DetuningHz,
        Key::MassKg,
    ];

    /// Canonical spelling, as used in the docs.
    pub fn name(&self) -> &'static str {
        match self {
            Key::OmegaMHz => "omega_m_hz",
            Key::GammaMHz => "gamma_m_hz",
            Key::GlHz => "g_l_hz",
            Key::GqHz => "g_q_hz",
            Key::GqOverGl => "g_q_over_g_l",
            Key::KappaHz => "kappa_hz",
            Key::PowerUw => "power_uW",
            Key::WavelengthNm => "wavelength_nm",
            Key::TemperatureK => "temperature_K",
            Key::DetuningMode => "detuning_mode",
            Key::DetuningHz => "detuning_hz",
            Key::MassKg => "mass_kg",
        }
    }

    pub fn parse(s: &str) -> Option<Key> {
        Key::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

/// One assignment and where it came from, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Setting {
    pub key: Key,
    pub value: String,
    pub origin: String,
}

impl Setting {
    fn number(&self) -> Result<f64, CliError> {
        self.value.parse::<f64>().map_err(|_| {
            CliError::invalid(format!("{}: `{}` expects a number, got `{}`", self.origin, self.key.name(), self.value))
        })
    }
}

fn parse_assignment(text: &str, origin: String) -> Result<Setting, CliError> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| CliError::invalid(format!("{origin}: expected `key = value`, got `{text}`")))?;
    let (key, value) = (key.trim(), value.trim());
    let key = Key::parse(key).ok_or_else(|| {
        let known: Vec<_> = Key::ALL.iter().map(|k| k.name()).collect();
        CliError::invalid(format!("{origin}: unknown key `{key}` (known keys: {})", known.join(", ")))
    })?;
    if value.is_empty() {
        return Err(CliError::invalid(format!("{origin}: `{}` has no value", key.name())));
    }
    Ok(Setting { key, value: value.to_string(), origin })
}

pub fn parse_str(text: &str, source: &str) -> Result<Vec<Setting>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_assignment(line, format!("{source}:{}", n + 1))?);
    }
    Ok(out)
}

pub fn parse_file(path: &Path) -> Result<Vec<Setting>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Config { path: path.to_path_buf(), source })?;
    parse_str(&text, &path.display().to_string())
}

/// A `--set key=value` flag.
pub fn parse_override(text: &str) -> Result<Setting, CliError> {
    parse_assignment(text, format!("--set {text}"))
}

/// Applies settings on top of `base`; later settings win. When neither g_q
/// key is given, the base g_q/g_l ratio is kept even if g_l changes.
pub fn apply(base: SystemParams, settings: &[Setting]) -> Result<SystemParams, CliError> {
    let mut latest: HashMap<Key, (usize, &Setting)> = HashMap::new();
    for (i, s) in settings.iter().enumerate() {
        latest.insert(s.key, (i, s));
    }
    let get = |k: Key| latest.get(&k).map(|(_, s)| *s);

    let mut p = base;
    let base_ratio = base.gq_ratio();
    if let Some(s) = get(Key::OmegaMHz) {
        p.omega_m = TAU * s.number()?;
    }
    if let Some(s) = get(Key::GammaMHz) {
        p.gamma_m = TAU * s.number()?;
    }
    if let Some(s) = get(Key::GlHz) {
        p.g_l = TAU * s.number()?;
    }
    if let Some(s) = get(Key::KappaHz) {
        p.kappa = TAU * s.number()?;
    }
    if let Some(s) = get(Key::PowerUw) {
        p.power = s.number()? / 1e6;
    }
    if let Some(s) = get(Key::WavelengthNm) {
        p.wavelength = s.number()? / 1e9;
    }
    if let Some(s) = get(Key::TemperatureK) {
        p.temperature = s.number()?;
    }
    if let Some(s) = get(Key::MassKg) {
        p.mass = Some(s.number()?);
    }

    let bare = match get(Key::DetuningMode) {
        None => matches!(base.detuning, Detuning::Bare(_)),
        Some(s) => match s.value.to_ascii_lowercase().as_str() {
            "bare" => true,
            "effective" => false,
            _ => {
                return Err(CliError::invalid(format!(
                    "{}: `detuning_mode` must be `bare` or `effective`, got `{}`",
                    s.origin, s.value
                )))
            }
        },
    };
    let delta = match get(Key::DetuningHz) {
        Some(s) => TAU * s.number()?,
        None => base.detuning.value(),
    };
    p.detuning = if bare { Detuning::Bare(delta) } else { Detuning::Effective(delta) };

    let absolute = latest.get(&Key::GqHz);
    let ratio = latest.get(&Key::GqOverGl);
    p.g_q = match (absolute, ratio) {
        (Some((i, a)), Some((j, _))) if i > j => TAU * a.number()?,
        (Some((_, a)), None) => TAU * a.number()?,
        (_, Some((_, r))) => r.number()? * p.g_l,
        (None, None) => base_ratio * p.g_l,
    };

    p.validate()?;
    Ok(p)
}
