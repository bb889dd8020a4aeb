//! Linear stability of the fluctuation dynamics u̇ = M·u + noise over the
//! basis (δx, δp, δX, δP).
//!
//! The characteristic polynomial of M is expanded in closed form from the
//! matrix entries and tested with the quartic Routh–Hurwitz conditions.
//! The eigenvalues of M, computed numerically, serve as the independent
//! cross-check.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::params::{ParamError, SystemParams};
use crate::steady_state::{solve_mean_field, SteadyState, SteadyStateError};

/// Relative width (in units of κ) of the band in which the Routh–Hurwitz and
/// eigenvalue verdicts are required to agree.
pub const AGREEMENT_MARGIN: f64 = 1e-6;

/// Relative width of the marginal band, in units of min(κ, γ_m).
pub const MARGINAL_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum StabilityError {
    #[error("characteristic polynomial has a non-finite coefficient a{index} = {value}")]
    NonFinite { index: usize, value: f64 },
    #[error("leading coefficient must be positive, got {0}")]
    LeadingCoefficient(f64),
}

/// Drift matrix in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub m: [[f64; 4]; 4],
}

pub fn build_drift_matrix(params: &SystemParams, ss: &SteadyState) -> DriftMatrix {
    let gx = ss.g_eff * ss.x_quad;
    let gp = ss.g_eff * ss.p_quad;
    let kappa = params.kappa;
    let delta = ss.delta_eff;
    DriftMatrix {
        m: [
            [0.0, params.omega_m, 0.0, 0.0],
            [-ss.omega_m_eff, -params.gamma_m, -gx, -gp],
            [gp, 0.0, -kappa, delta],
            [-gx, 0.0, -delta, -kappa],
        ],
    }
}

impl DriftMatrix {
    fn to_nalgebra(self) -> Matrix4<f64> {
        Matrix4::from_fn(|r, c| self.m[r][c])
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|k| self.m[k][k]).sum()
    }

    pub fn determinant(&self) -> f64 {
        self.to_nalgebra().determinant()
    }

    /// Coefficients `[a0, a1, a2, a3, a4]` of det(sI − M), with a4 = 1.
    ///
    /// Eliminating the optical block gives
    /// `(s² + γ s + ω_m ω̃_m)((s + κ)² + Δ̃²) − ω_m (A² + B²) Δ̃`
    /// where A = G̃X_s and B = G̃P_s are read off row 2.
    pub fn characteristic_polynomial(&self) -> [f64; 5] {
        let m = &self.m;
        let omega_m = m[0][1];
        let stiffness = omega_m * -m[1][0];
        let gamma = -m[1][1];
        let a = -m[1][2];
        let b = -m[1][3];
        let kappa = -m[2][2];
        let delta = m[2][3];

        let optical = kappa * kappa + delta * delta;
        let coupling = omega_m * (a * a + b * b) * delta;
        [
            stiffness * optical - coupling,
            gamma * optical + 2.0 * kappa * stiffness,
            optical + 2.0 * kappa * gamma + stiffness,
            2.0 * kappa + gamma,
            1.0,
        ]
    }

    pub fn eigenvalues(&self) -> [Complex64; 4] {
        let ev = self.to_nalgebra().complex_eigenvalues();
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Quartic Routh–Hurwitz test: all roots of `a4 s⁴ + … + a0` lie strictly in
/// the left half-plane iff a0..a3 > 0 and a3·a2·a1 − a1² − a3²·a0 > 0
/// (after normalising to a4 = 1).
pub fn routh_hurwitz(char_poly: &[f64; 5]) -> Result<bool, StabilityError> {
    for (index, &value) in char_poly.iter().enumerate() {
        if !value.is_finite() {
            return Err(StabilityError::NonFinite { index, value });
        }
    }
    let lead = char_poly[4];
    if !(lead > 0.0) {
        return Err(StabilityError::LeadingCoefficient(lead));
    }
    let [a0, a1, a2, a3] = [char_poly[0] / lead, char_poly[1] / lead, char_poly[2] / lead, char_poly[3] / lead];
    if !(a0 > 0.0 && a1 > 0.0 && a2 > 0.0 && a3 > 0.0) {
        return Ok(false);
    }
    Ok(a3 * a2 * a1 - a1 * a1 - a3 * a3 * a0 > 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityStatus {
    Stable,
    Unstable,
    /// Largest real part within the marginal band; treated as unstable on maps.
    Marginal,
    /// ω̃_m ≤ 0.
    Unphysical,
    /// The steady-state solver did not converge.
    Unresolved,
}

impl StabilityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityStatus::Stable => "stable",
            StabilityStatus::Unstable => "unstable",
            StabilityStatus::Marginal => "marginal",
            StabilityStatus::Unphysical => "unphysical",
            StabilityStatus::Unresolved => "unresolved",
        }
    }
}

impl core::fmt::Display for StabilityStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// `[a0..a4]` of det(sI − M); `None` when no finite matrix exists.
    pub char_poly: Option<[f64; 5]>,
    pub routh_hurwitz_stable: bool,
    pub eigen_stable: bool,
    pub physical: bool,
    pub max_real_part: Option<f64>,
    pub status: StabilityStatus,
}

impl StabilityReport {
    fn unresolved() -> Self {
        StabilityReport {
            char_poly: None,
            routh_hurwitz_stable: false,
            eigen_stable: false,
            physical: false,
            max_real_part: None,
            status: StabilityStatus::Unresolved,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.status == StabilityStatus::Stable
    }
}

/// Stability analysis of a given mean-field state.
///
/// Unphysical states (ω̃_m ≤ 0) still get their polynomial and spectrum
/// filled in, but both stability verdicts are forced to `false`.
pub fn analyze(params: &SystemParams, ss: &SteadyState) -> StabilityReport {
    let drift = build_drift_matrix(params, ss);
    let finite = drift.m.iter().flatten().all(|v| v.is_finite());
    if !finite {
        return StabilityReport {
            physical: ss.is_physical(),
            status: if ss.is_physical() { StabilityStatus::Unresolved } else { StabilityStatus::Unphysical },
            ..StabilityReport::unresolved()
        };
    }
    let char_poly = drift.characteristic_polynomial();
    let max_real = drift.max_real_part();
    let rh = routh_hurwitz(&char_poly).unwrap_or(false);
    let eig = max_real < 0.0;
    let physical = ss.is_physical();

    let margin = MARGINAL_MARGIN * params.kappa.min(params.gamma_m);
    let status = if !physical {
        StabilityStatus::Unphysical
    } else if max_real.abs() <= margin {
        StabilityStatus::Marginal
    } else if rh {
        StabilityStatus::Stable
    } else {
        StabilityStatus::Unstable
    };

    StabilityReport {
        char_poly: Some(char_poly),
        routh_hurwitz_stable: rh && physical,
        eigen_stable: eig && physical,
        physical,
        max_real_part: Some(max_real),
        status,
    }
}

/// Solves the steady state and classifies it. Non-convergence of the solver
/// yields an `Unresolved` report rather than an error.
pub fn classify(params: &SystemParams) -> Result<StabilityReport, ParamError> {
    match solve_mean_field(params) {
        Ok(ss) => Ok(analyze(params, &ss)),
        Err(SteadyStateError::Params(e)) => Err(e),
        Err(_) => Ok(StabilityReport::unresolved()),
    }
}
