//! Mean-field steady state of the coupled cavity–oscillator system.
//!
//! The stationary displacement and intracavity amplitude satisfy
//!
//! ```text
//! x_s = −g_l·I / (ω_m + 2·g_q·I),    c_s = ε / (κ + i·Δ̃),    I = |c_s|²
//! Δ̃   = Δ + g_l·x_s + g_q·x_s²
//! ```
//!
//! with ⟨x²⟩ identified with x_s². With the detuning given in effective form
//! the system is explicit. With a bare detuning it reduces to the scalar
//! equation `I·(κ² + Δ̃(I)²) = ε²`, solved by damped fixed-point iteration
//! with a bracketing fallback.
//!
//! Close to the soft-mode collapse (ω̃_m ≪ ω_m) the denominator
//! ω_m + 2·g_q·I cancels and x_s becomes ill-conditioned in I; residuals
//! there are limited by that cancellation rather than by the root finder.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::params::{Detuning, ParamError, SystemParams};

const DAMPING: f64 = 0.5;
const MAX_ITERATIONS: usize = 100_000;
const FIXED_POINT_TOL: f64 = 1e-13;
const BRANCH_GRID: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SteadyStateError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("steady-state iteration did not converge after {iterations} iterations (bistable or critical regime)")]
    NonConvergence { iterations: usize },
    #[error("unphysical soft mode: effective mechanical frequency {omega_m_eff} rad/s is not positive")]
    UnphysicalSoftMode { omega_m_eff: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    /// Dimensionless static displacement.
    pub x_s: f64,
    /// Intracavity amplitude.
    pub c_s: Complex64,
    /// I = |c_s|².
    pub photon_number: f64,
    /// ω̃_m = ω_m + 2·g_q·I.
    pub omega_m_eff: f64,
    /// G̃ = g_l + 2·g_q·x_s.
    pub g_eff: f64,
    /// Δ̃ = Δ + g_l·x_s + g_q·x_s².
    pub delta_eff: f64,
    /// X_s = √2·Re c_s.
    pub x_quad: f64,
    /// P_s = √2·Im c_s.
    pub p_quad: f64,
}

impl SteadyState {
    pub fn is_physical(&self) -> bool {
        self.omega_m_eff > 0.0
    }

    /// Undriven state: no photons, no displacement.
    fn zero(params: &SystemParams) -> Self {
        let delta_eff = params.detuning.value();
        SteadyState {
            x_s: 0.0,
            c_s: Complex64::new(0.0, 0.0),
            photon_number: 0.0,
            omega_m_eff: params.omega_m,
            g_eff: params.g_l,
            delta_eff,
            x_quad: 0.0,
            p_quad: 0.0,
        }
    }

    /// Assembles a state from a photon number and the effective detuning it implies.
    fn assemble(params: &SystemParams, eps: f64, photon_number: f64, x_s: f64, delta_eff: f64) -> Self {
        let c_s = Complex64::new(eps, 0.0) / Complex64::new(params.kappa, delta_eff);
        SteadyState {
            x_s,
            c_s,
            photon_number,
            omega_m_eff: params.omega_m + 2.0 * params.g_q * photon_number,
            g_eff: params.g_l + 2.0 * params.g_q * x_s,
            delta_eff,
            x_quad: core::f64::consts::SQRT_2 * c_s.re,
            p_quad: core::f64::consts::SQRT_2 * c_s.im,
        }
    }
}

fn displacement(params: &SystemParams, photon_number: f64) -> f64 {
    if params.g_l == 0.0 || photon_number == 0.0 {
        return 0.0;
    }
    -params.g_l * photon_number / (params.omega_m + 2.0 * params.g_q * photon_number)
}

fn bare_effective_detuning(params: &SystemParams, delta: f64, x_s: f64) -> f64 {
    delta + params.g_l * x_s + params.g_q * x_s * x_s
}

/// Scalar self-consistency residual f(I) = I·(κ² + Δ̃(I)²) − ε² for a bare detuning.
fn scalar_residual(params: &SystemParams, delta: f64, eps_sq: f64, photon_number: f64) -> f64 {
    let x = displacement(params, photon_number);
    let d = bare_effective_detuning(params, delta, x);
    photon_number * (params.kappa * params.kappa + d * d) - eps_sq
}

fn state_from_photon_number(params: &SystemParams, eps: f64, delta: f64, photon_number: f64) -> SteadyState {
    let x_s = displacement(params, photon_number);
    let delta_eff = bare_effective_detuning(params, delta, x_s);
    SteadyState::assemble(params, eps, photon_number, x_s, delta_eff)
}

/// Mean-field solution without the physicality gate: the returned state may
/// have ω̃_m ≤ 0. Used by the stability classifier to report on unphysical
/// points; most callers want [`solve_steady_state`].
pub fn solve_mean_field(params: &SystemParams) -> Result<SteadyState, SteadyStateError> {
    params.validate()?;
    let eps_sq = params.epsilon_sq();
    if eps_sq == 0.0 {
        return Ok(SteadyState::zero(params));
    }
    let eps = libm::sqrt(eps_sq);
    match params.detuning {
        Detuning::Effective(delta_eff) => {
            let photon_number = eps_sq / (params.kappa * params.kappa + delta_eff * delta_eff);
            let x_s = displacement(params, photon_number);
            Ok(SteadyState::assemble(params, eps, photon_number, x_s, delta_eff))
        }
        Detuning::Bare(delta) => {
            let fixed_point = iterate_fixed_point(params, delta, eps_sq).map(|i| polish_root(params, delta, eps_sq, i));
            let nominal = eps_sq / (params.kappa * params.kappa);
            // Roots lying below the fixed point belong to the branch reached
            // by ramping the power up from zero.
            let upper = match fixed_point {
                Some(i) => i * (1.0 - 1e-9),
                None => nominal * (1.0 + 1e-12),
            };
            let lower_root = bracket_roots(params, delta, eps_sq, upper).into_iter().next();
            let photon_number = match (fixed_point, lower_root) {
                (_, Some(root)) => root,
                (Some(i), None) => i,
                (None, None) => return Err(SteadyStateError::NonConvergence { iterations: MAX_ITERATIONS }),
            };
            Ok(state_from_photon_number(params, eps, delta, photon_number))
        }
    }
}

/// Solves the mean-field equations and rejects states with ω̃_m ≤ 0.
///
/// When several self-consistent roots exist (bare detuning only), the one
/// with the smallest photon number is returned; the others are available
/// from [`find_all_branches`].
pub fn solve_steady_state(params: &SystemParams) -> Result<SteadyState, SteadyStateError> {
    let ss = solve_mean_field(params)?;
    if ss.is_physical() {
        Ok(ss)
    } else {
        Err(SteadyStateError::UnphysicalSoftMode { omega_m_eff: ss.omega_m_eff })
    }
}

fn iterate_fixed_point(params: &SystemParams, delta: f64, eps_sq: f64) -> Option<f64> {
    let k2 = params.kappa * params.kappa;
    let mut photon_number = eps_sq / k2;
    for _ in 0..MAX_ITERATIONS {
        let x = displacement(params, photon_number);
        let d = bare_effective_detuning(params, delta, x);
        let target = eps_sq / (k2 + d * d);
        let next = (1.0 - DAMPING) * photon_number + DAMPING * target;
        if !next.is_finite() {
            return None;
        }
        if (next - photon_number).abs() <= FIXED_POINT_TOL * next {
            return Some(next);
        }
        photon_number = next;
    }
    None
}

/// Tightens a fixed-point estimate by bisecting a small bracket around it.
fn polish_root(params: &SystemParams, delta: f64, eps_sq: f64, estimate: f64) -> f64 {
    let f = |i: f64| scalar_residual(params, delta, eps_sq, i);
    let mut width = 1e-12 * estimate;
    for _ in 0..8 {
        let (lo, hi) = (estimate - width, estimate + width);
        let (f_lo, f_hi) = (f(lo), f(hi));
        if f_lo == 0.0 {
            return lo;
        }
        if f_hi == 0.0 {
            return hi;
        }
        if (f_lo < 0.0) != (f_hi < 0.0) {
            return bisect(&f, lo, hi, f_lo);
        }
        width *= 10.0;
    }
    estimate
}

/// Sign-change bracketing of f(I) on a uniform grid over `[0, i_max]`,
/// each bracket refined by bisection. Returns roots in ascending order.
fn bracket_roots(params: &SystemParams, delta: f64, eps_sq: f64, i_max: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    if !(i_max > 0.0) {
        return roots;
    }
    let f = |i: f64| scalar_residual(params, delta, eps_sq, i);
    let node = |k: usize| i_max * (k as f64 / BRANCH_GRID as f64);
    let mut left = 0.0;
    let mut f_left = f(left);
    if f_left == 0.0 {
        roots.push(0.0);
    }
    for k in 1..=BRANCH_GRID {
        let right = node(k);
        let f_right = f(right);
        if f_right == 0.0 {
            roots.push(right);
        } else if f_left != 0.0 && (f_left < 0.0) != (f_right < 0.0) {
            roots.push(bisect(&f, left, right, f_left));
        }
        left = right;
        f_left = f_right;
    }
    roots
}

/// Bisects to full double precision (well below the 1e-12 relative bracket
/// width the residual checks need; near the soft-mode pole the displacement
/// amplifies photon-number error by orders of magnitude).
fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let lo_negative = f_lo < 0.0;
    for _ in 0..1100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Every self-consistent root with photon number in `[0, i_max]`, sorted by
/// photon number. Unphysical roots (ω̃_m ≤ 0) are included. An empty list
/// means no root in range.
pub fn find_all_branches(params: &SystemParams, i_max: f64) -> Result<Vec<SteadyState>, SteadyStateError> {
    params.validate()?;
    if !(i_max.is_finite() && i_max > 0.0) {
        return Err(ParamError::Invalid { field: "i_max", value: i_max, reason: "must be finite and > 0" }.into());
    }
    let eps_sq = params.epsilon_sq();
    if eps_sq == 0.0 {
        return Ok(alloc::vec![SteadyState::zero(params)]);
    }
    match params.detuning {
        Detuning::Effective(_) => {
            let ss = solve_mean_field(params)?;
            Ok(if ss.photon_number <= i_max { alloc::vec![ss] } else { Vec::new() })
        }
        Detuning::Bare(delta) => {
            let eps = libm::sqrt(eps_sq);
            Ok(bracket_roots(params, delta, eps_sq, i_max)
                .into_iter()
                .map(|i| state_from_photon_number(params, eps, delta, i))
                .collect())
        }
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Relative residuals `(r1, r2)` of the displacement and amplitude equations
/// evaluated at `candidate`. Both vanish for an exact solution.
pub fn steady_state_residual(params: &SystemParams, candidate: &SteadyState) -> (f64, f64) {
    let intensity = candidate.c_s.norm_sqr();
    let x_pred = displacement(params, intensity);
    let r1 = relative_gap(candidate.x_s, x_pred);

    let eps = libm::sqrt(params.epsilon_sq());
    let detuning = match params.detuning {
        Detuning::Bare(delta) => bare_effective_detuning(params, delta, candidate.x_s),
        Detuning::Effective(delta_eff) => delta_eff,
    };
    let c_pred = Complex64::new(eps, 0.0) / Complex64::new(params.kappa, detuning);
    let scale = candidate.c_s.norm().max(c_pred.norm());
    let r2 = if scale == 0.0 { 0.0 } else { (candidate.c_s - c_pred).norm() / scale };
    (r1, r2)
}
