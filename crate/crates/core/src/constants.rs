//! Physical constants (CODATA 2018 / SI 2019 exact values).

use core::f64::consts::PI;

/// Planck constant, J·s (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant ħ = h/2π, J·s.
pub const HBAR: f64 = 1.054_571_817_646_156_5e-34;

/// Boltzmann constant, J/K (exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const TWO_PI: f64 = 2.0 * PI;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_matches_planck_over_two_pi() {
        let rel = (PLANCK / TWO_PI - HBAR).abs() / HBAR;
        assert!(rel < 1e-15, "rel = {rel}");
    }
}
