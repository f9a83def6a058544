//! Unit system: lengths in nm, energies in eV, masses in units of m₀.
//! A single constant ties them together.

use crate::error::{Error, Result};

/// ħ²/(2m₀) in eV·nm².
pub const HBAR2_OVER_2M0: f64 = 0.0380998;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// ħ²/(2m₀) in eV·nm². Wavenumbers follow as k = √(m̃(E−V)/this).
    pub hbar2_over_2m0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar2_over_2m0: HBAR2_OVER_2M0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar2_over_2m0: f64) -> Result<Self> {
        if !(hbar2_over_2m0 > 0.0) || !hbar2_over_2m0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "hbar2_over_2m0 must be a positive finite number, got {hbar2_over_2m0}"
            )));
        }
        Ok(Self { hbar2_over_2m0 })
    }
}
