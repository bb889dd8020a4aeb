//! Added force noise seen through the output phase quadrature.
//!
//! The measured quadrature, rescaled so that the external force appears with
//! unit gain, is `F_ext + F_N`. Three evaluations of the symmetrised spectral
//! density of `F_N` are provided:
//!
//! * [`s_ff_full`]: the general expression built from the transfer
//!   functions P_x, P_p, P_ξ and D.
//! * [`s_ff_resonant`]: the closed form valid at Δ̃ = 0 and κ ≫ ω.
//! * [`s_ff_no_qoc`]: the conventional-system reference with the bare
//!   susceptibility.
//!
//! The thermal term is 2·k_B·T/(ħ·ω_m). Note that the often-quoted figure of
//! 2.068 for T = 1 mK at ω_m/2π = 10 MHz matches k_B·T/(ħ·ω_m) ≈ 2.08, not
//! the factor-two expression used here (≈ 4.17).

use num_complex::Complex64;

use crate::constants::{BOLTZMANN, HBAR};
use crate::optimize::golden_section;
use crate::params::{Detuning, ParamError, SystemParams};
use crate::stability::{analyze, StabilityReport, StabilityStatus};
use crate::steady_state::{solve_steady_state, SteadyState, SteadyStateError};

/// Coarse log-power grid used to bracket the optimum.
const OPT_GRID: usize = 65;
/// Golden-section tolerance in ln P, i.e. relative tolerance in power.
const OPT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum NoiseError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    SteadyState(#[from] SteadyStateError),
    #[error("divergent sensitivity: the measurement carries no force signal")]
    DivergentSensitivity,
    #[error("system is {} at this operating point", .0.status)]
    Unstable(StabilityReport),
    #[error("resonant closed form requires an effective detuning of exactly zero")]
    ResonantRequiresZeroDetuning,
    #[error("bracket error: {0}")]
    Bracket(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    /// General transfer-function expression.
    Full,
    /// Δ̃ = 0, κ ≫ ω closed form.
    Resonant,
    /// Conventional system with the bare susceptibility.
    NoQoc,
}

impl Formula {
    pub fn as_str(&self) -> &'static str {
        match self {
            Formula::Full => "full",
            Formula::Resonant => "resonant",
            Formula::NoQoc => "no_qoc",
        }
    }
}

/// Dimensionless noise decomposition at one analysis frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBreakdown {
    pub omega: f64,
    pub thermal: f64,
    pub backaction: f64,
    pub shot: f64,
    /// thermal + backaction + shot.
    pub total: f64,
    pub formula: Formula,
}

impl NoiseBreakdown {
    fn new(omega: f64, thermal: f64, backaction: f64, shot: f64, formula: Formula) -> Self {
        NoiseBreakdown { omega, thermal, backaction, shot, total: thermal + backaction + shot, formula }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferFunctions {
    pub p_x: Complex64,
    pub p_p: Complex64,
    pub p_xi: Complex64,
    pub d: Complex64,
}

/// ω² + iγ_mω − ω_m·ω̃_m, the inverse-susceptibility polynomial.
fn mechanical_denominator(params: &SystemParams, omega: f64, omega_m_eff: f64) -> Complex64 {
    Complex64::new(omega * omega - params.omega_m * omega_m_eff, params.gamma_m * omega)
}

/// χ̃_m(ω) = ω_m/(ω² + iγ_mω − ω_m·ω̃_m). Pass `omega_m_eff = ω_m` for the bare χ_m.
pub fn susceptibility(params: &SystemParams, omega: f64, omega_m_eff: f64) -> Complex64 {
    Complex64::new(params.omega_m, 0.0) / mechanical_denominator(params, omega, omega_m_eff)
}

pub fn transfer_functions(params: &SystemParams, ss: &SteadyState, omega: f64) -> TransferFunctions {
    let root_2k = libm::sqrt(2.0 * params.kappa);
    let l = mechanical_denominator(params, omega, ss.omega_m_eff);
    let k = Complex64::new(params.kappa, -omega);
    let g2 = ss.g_eff * ss.g_eff;
    let (xs, ps, delta) = (ss.x_quad, ss.p_quad, ss.delta_eff);
    let wm = params.omega_m;

    let p_x = -root_2k * (Complex64::new(wm * g2 * xs * xs, 0.0) + l * delta);
    let p_p = -root_2k * (Complex64::new(wm * g2 * xs * ps, 0.0) - k * l);
    let p_xi = ss.g_eff * wm * libm::sqrt(params.gamma_m) * (k * xs + ps * delta);
    let d = (k * k + delta * delta) * l + 2.0 * g2 * ss.photon_number * delta * wm;
    TransferFunctions { p_x, p_p, p_xi, d }
}

/// Flat thermal contribution 2·k_B·T/(ħ·ω_m).
pub fn thermal_noise(params: &SystemParams) -> f64 {
    2.0 * BOLTZMANN * params.temperature / (HBAR * params.omega_m)
}

fn check_physical(ss: &SteadyState) -> Result<(), NoiseError> {
    if ss.is_physical() {
        Ok(())
    } else {
        Err(SteadyStateError::UnphysicalSoftMode { omega_m_eff: ss.omega_m_eff }.into())
    }
}

/// General spectrum. The δx_in channel (|P_x|²) is reported as backaction and
/// the δp_in channel (|P_p − D/√(2κ)|²) as shot noise.
///
/// Stability is not re-checked here; use [`spectrum_at`] for a gated evaluation.
pub fn s_ff_full(params: &SystemParams, ss: &SteadyState, omega: f64) -> Result<NoiseBreakdown, NoiseError> {
    check_physical(ss)?;
    let tf = transfer_functions(params, ss, omega);
    let signal = tf.p_xi.norm_sqr();
    if !(signal > 0.0) {
        return Err(NoiseError::DivergentSensitivity);
    }
    let shot_amp = tf.p_p - tf.d / libm::sqrt(2.0 * params.kappa);
    let backaction = tf.p_x.norm_sqr() / (2.0 * signal);
    let shot = shot_amp.norm_sqr() / (2.0 * signal);
    Ok(NoiseBreakdown::new(omega, thermal_noise(params), backaction, shot, Formula::Full))
}

fn measurement_rate(params: &SystemParams, ss: &SteadyState) -> Result<f64, NoiseError> {
    let zeta = 4.0 * params.g_l * params.g_l * ss.photon_number / params.kappa;
    if zeta > 0.0 && zeta.is_finite() {
        Ok(zeta)
    } else {
        Err(NoiseError::DivergentSensitivity)
    }
}

/// Closed form at Δ̃ = 0 and κ ≫ ω:
/// backaction = (ζ/2γ_m)(ω_m/ω̃_m)², shot = (ω̃_m/ω_m)²/(2ζγ_m|χ̃_m|²).
pub fn s_ff_resonant(params: &SystemParams, ss: &SteadyState, omega: f64) -> Result<NoiseBreakdown, NoiseError> {
    if params.detuning != Detuning::Effective(0.0) {
        return Err(NoiseError::ResonantRequiresZeroDetuning);
    }
    check_physical(ss)?;
    let zeta = measurement_rate(params, ss)?;
    let softening = ss.omega_m_eff / params.omega_m;
    let l2 = mechanical_denominator(params, omega, ss.omega_m_eff).norm_sqr();
    let wm2 = params.omega_m * params.omega_m;
    let backaction = zeta / (2.0 * params.gamma_m) / (softening * softening);
    // 1/|χ̃_m|² = |L|²/ω_m²
    let shot = l2 / wm2 / (2.0 * zeta * params.gamma_m) * (softening * softening);
    Ok(NoiseBreakdown::new(omega, thermal_noise(params), backaction, shot, Formula::Resonant))
}

/// Conventional reference: ζ/2γ_m + 1/(2ζγ_m|χ_m|²) plus the thermal term,
/// with the bare susceptibility regardless of g_q.
pub fn s_ff_no_qoc(params: &SystemParams, ss: &SteadyState, omega: f64) -> Result<NoiseBreakdown, NoiseError> {
    let zeta = measurement_rate(params, ss)?;
    let chi2 = susceptibility(params, omega, params.omega_m).norm_sqr();
    let backaction = zeta / (2.0 * params.gamma_m);
    let shot = 1.0 / (2.0 * zeta * params.gamma_m * chi2);
    Ok(NoiseBreakdown::new(omega, thermal_noise(params), backaction, shot, Formula::NoQoc))
}

pub fn evaluate(
    params: &SystemParams,
    ss: &SteadyState,
    omega: f64,
    formula: Formula,
) -> Result<NoiseBreakdown, NoiseError> {
    match formula {
        Formula::Full => s_ff_full(params, ss, omega),
        Formula::Resonant => s_ff_resonant(params, ss, omega),
        Formula::NoQoc => s_ff_no_qoc(params, ss, omega),
    }
}

/// Lower bound 1/(γ_m·|χ̃_m(ω)|) on backaction + shot at fixed ω̃_m.
/// With `omega_m_eff = ω_m` this is the bare standard quantum limit.
pub fn sql_bound(params: &SystemParams, omega: f64, omega_m_eff: f64) -> f64 {
    mechanical_denominator(params, omega, omega_m_eff).norm() / (params.gamma_m * params.omega_m)
}

/// Where in frequency a spectrum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalFrequency {
    Fixed(f64),
    /// sqrt(ω_m·ω̃_m), recomputed from each operating point.
    SoftModeResonance,
}

impl EvalFrequency {
    pub fn resolve(&self, params: &SystemParams, ss: &SteadyState) -> f64 {
        match *self {
            EvalFrequency::Fixed(omega) => omega,
            EvalFrequency::SoftModeResonance => libm::sqrt(params.omega_m * ss.omega_m_eff.max(0.0)),
        }
    }
}

/// Solves, classifies and evaluates; unstable operating points are an error.
pub fn spectrum_at(
    params: &SystemParams,
    eval: EvalFrequency,
    formula: Formula,
) -> Result<(SteadyState, NoiseBreakdown), NoiseError> {
    let ss = solve_steady_state(params)?;
    let report = analyze(params, &ss);
    if report.status != StabilityStatus::Stable {
        return Err(NoiseError::Unstable(report));
    }
    let omega = eval.resolve(params, &ss);
    Ok((ss, evaluate(params, &ss, omega, formula)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPower {
    pub power: f64,
    pub s_min: f64,
    /// Analysis frequency at the optimum.
    pub omega: f64,
    /// The minimum sits on the edge of the stable/physical region.
    pub constrained: bool,
}

/// Minimises the resonant closed-form total over log-power within `p_range`,
/// re-solving the steady state (and ω̃_m) at every trial power.
pub fn optimal_power(
    params: &SystemParams,
    eval: EvalFrequency,
    p_range: (f64, f64),
) -> Result<OptimalPower, NoiseError> {
    params.validate()?;
    let (p_lo, p_hi) = p_range;
    if !(p_lo > 0.0 && p_hi > p_lo && p_hi.is_finite()) {
        return Err(NoiseError::Bracket("power range must satisfy 0 < p_min < p_max"));
    }
    if params.detuning != Detuning::Effective(0.0) {
        return Err(NoiseError::ResonantRequiresZeroDetuning);
    }

    let objective = |ln_p: f64| -> Option<(f64, f64)> {
        let p = params.with_power(libm::exp(ln_p));
        let (_, b) = spectrum_at(&p, eval, Formula::Resonant).ok()?;
        Some((b.total, b.omega))
    };
    let cost = |ln_p: f64| objective(ln_p).map_or(f64::INFINITY, |(t, _)| t);

    let (a, b) = (libm::log(p_lo), libm::log(p_hi));
    let node = |k: usize| a + (b - a) * (k as f64 / (OPT_GRID - 1) as f64);
    let values: alloc::vec::Vec<f64> = (0..OPT_GRID).map(|k| cost(node(k))).collect();

    let best = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(k, _)| k)
        .ok_or(NoiseError::Bracket("no stable operating point in the power range"))?;

    if best == 0 || best == OPT_GRID - 1 {
        return Err(NoiseError::Bracket("minimum lies on the edge of the power range"));
    }

    // Pull the upper/lower end in to the feasibility edge when a neighbour is infeasible.
    let mut lo = node(best - 1);
    let mut hi = node(best + 1);
    let mut edge = None;
    if !values[best + 1].is_finite() {
        hi = feasibility_edge(&cost, node(best), hi);
        edge = Some(hi);
    }
    if !values[best - 1].is_finite() {
        lo = feasibility_edge(&cost, node(best), lo);
        edge = Some(lo);
    }

    let r = golden_section(cost, lo, hi, OPT_TOL);
    let (s_min, omega) = objective(r.x).ok_or(NoiseError::Bracket("optimum landed on an infeasible point"))?;
    let constrained = edge.is_some_and(|e| (r.x - e).abs() <= 2.0 * OPT_TOL);
    Ok(OptimalPower { power: libm::exp(r.x), s_min, omega, constrained })
}

/// Bisects between a feasible and an infeasible ln-power.
fn feasibility_edge(cost: &impl Fn(f64) -> f64, mut feasible: f64, mut infeasible: f64) -> f64 {
    for _ in 0..100 {
        if (infeasible - feasible).abs() <= 0.1 * OPT_TOL {
            break;
        }
        let mid = 0.5 * (feasible + infeasible);
        if cost(mid).is_finite() {
            feasible = mid;
        } else {
            infeasible = mid;
        }
    }
    feasible
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::TWO_PI;
    use crate::params::derive_scalars;

    fn reference() -> SystemParams {
        SystemParams::baseline()
    }

    fn power_for_zeta_equal_gamma(p: &SystemParams) -> f64 {
        // ζ is linear in P at Δ̃ = 0
        let i1 = derive_scalars(&p.with_power(1.0), 0.0).unwrap().photon_number_nominal;
        let zeta1 = 4.0 * p.g_l * p.g_l * i1 / p.kappa;
        p.gamma_m / zeta1
    }

    #[test]
    fn zero_detuning_transfer_functions() {
        let p = reference().with_gq_ratio(-0.3);
        let ss = solve_steady_state(&p).unwrap();
        let w = 0.8 * p.omega_m;
        let tf = transfer_functions(&p, &ss, w);
        let k = Complex64::new(p.kappa, -w);
        let l = Complex64::new(w * w - p.omega_m * ss.omega_m_eff, p.gamma_m * w);
        let d = k * k * l;
        assert!((tf.d - d).norm() <= 1e-14 * d.norm());
        let pxi = ss.g_eff * p.omega_m * libm::sqrt(p.gamma_m) * k * ss.x_quad;
        assert!((tf.p_xi - pxi).norm() <= 1e-14 * pxi.norm());
    }

    #[test]
    fn thermal_term() {
        let p = reference();
        let ss = solve_steady_state(&p).unwrap();
        assert_eq!(s_ff_full(&p, &ss, p.omega_m).unwrap().thermal, 0.0);
        let warm = p.with_temperature(1e-3);
        let t = thermal_noise(&warm);
        assert!((t - 4.17).abs() < 0.01, "thermal = {t}");
        // the factor-one reading
        assert!((0.5 * t - 2.08).abs() < 0.01);
    }

    #[test]
    fn full_formula_reaches_sql_at_balanced_power() {
        let base = reference();
        let p = base.with_power(power_for_zeta_equal_gamma(&base));
        let ss = solve_steady_state(&p).unwrap();
        let b = s_ff_full(&p, &ss, p.omega_m).unwrap();
        assert!((b.total - 1.0).abs() < 1e-6, "total = {}", b.total);
    }

    #[test]
    fn resonant_examples() {
        let base = reference();
        let p = base.with_power(power_for_zeta_equal_gamma(&base));
        let ss = solve_steady_state(&p).unwrap();
        let b = s_ff_resonant(&p, &ss, p.omega_m).unwrap();
        assert!((b.total - 1.0).abs() < 1e-12);
        assert!((b.backaction - b.shot).abs() < 1e-12);
        assert_eq!(b.total, b.thermal + b.backaction + b.shot);

        let zero = reference().with_power(0.0);
        let ss0 = solve_steady_state(&zero).unwrap();
        assert_eq!(s_ff_resonant(&zero, &ss0, zero.omega_m), Err(NoiseError::DivergentSensitivity));

        let detuned = reference().with_detuning(Detuning::Effective(1.0));
        let ssd = solve_steady_state(&detuned).unwrap();
        assert_eq!(s_ff_resonant(&detuned, &ssd, 1.0), Err(NoiseError::ResonantRequiresZeroDetuning));
    }

    #[test]
    fn zero_signal_is_divergent() {
        let p = reference().with_power(0.0);
        let ss = solve_steady_state(&p).unwrap();
        assert_eq!(s_ff_full(&p, &ss, p.omega_m), Err(NoiseError::DivergentSensitivity));
    }

    #[test]
    fn sql_bound_examples() {
        let p = reference();
        assert!((sql_bound(&p, p.omega_m, p.omega_m) - 1.0).abs() < 1e-15);
        let w = 1e4 * p.omega_m;
        let ratio = sql_bound(&p, w, p.omega_m) / (w * w / (p.gamma_m * p.omega_m));
        assert!((ratio - 1.0).abs() < 1e-6);
        let eff = 0.33 * p.omega_m;
        let soft = libm::sqrt(p.omega_m * eff);
        assert!((sql_bound(&p, soft, eff) - soft / p.omega_m).abs() < 1e-12);
        assert!((sql_bound(&p, soft, eff) - 0.574).abs() < 1e-3);
    }

    #[test]
    fn optimal_power_without_quadratic_coupling() {
        let p = reference();
        let r = optimal_power(&p, EvalFrequency::Fixed(p.omega_m), (1e-7, 1e-2)).unwrap();
        assert!((r.s_min - 1.0).abs() < 1e-6);
        let expected = power_for_zeta_equal_gamma(&p);
        assert!((r.power - expected).abs() / expected < 1e-6);
        assert!(!r.constrained);
    }

    #[test]
    fn soft_mode_optimum_moves_to_lower_power() {
        let p0 = reference();
        let conventional = optimal_power(&p0, EvalFrequency::SoftModeResonance, (1e-7, 1e-2)).unwrap();
        for ratio in [-0.25, -0.6] {
            let p = reference().with_gq_ratio(ratio);
            let r = optimal_power(&p, EvalFrequency::SoftModeResonance, (1e-7, 1e-2)).unwrap();
            assert!(r.s_min < 1.0, "ratio {ratio}: {}", r.s_min);
            assert!(r.power < conventional.power);
        }
    }

    #[test]
    fn optimal_power_bracket_errors() {
        let p = reference();
        assert!(matches!(
            optimal_power(&p, EvalFrequency::Fixed(p.omega_m), (1e-3, 1e-2)),
            Err(NoiseError::Bracket(_))
        ));
        assert!(matches!(
            optimal_power(&p, EvalFrequency::Fixed(p.omega_m), (1e-5, 1e-5)),
            Err(NoiseError::Bracket(_))
        ));
        assert!(matches!(optimal_power(&p, EvalFrequency::Fixed(p.omega_m), (0.0, 1e-5)), Err(NoiseError::Bracket(_))));
    }

    #[test]
    fn fixed_zeta_prime_minimum_is_the_bound() {
        // ζ'/(2γ) + 1/(2ζ'γ|χ̃|²) is minimised at ζ' = 1/|χ̃| with value 1/(γ|χ̃|)
        let p = reference();
        let eff = 0.5 * p.omega_m;
        let w = TWO_PI * 7.3e6;
        let chi = susceptibility(&p, w, eff).norm();
        let f = |z: f64| z / (2.0 * p.gamma_m) + 1.0 / (2.0 * z * p.gamma_m * chi * chi);
        let z_star = 1.0 / chi;
        assert!((f(z_star) - sql_bound(&p, w, eff)).abs() <= 1e-12 * f(z_star));
        assert!(f(1.01 * z_star) > f(z_star) && f(0.99 * z_star) > f(z_star));
    }
}
