//! Problem definition: domain, profiles, boundary conditions, and the local
//! wavenumber derived from them.

use num_complex::Complex64;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::profile::Profile;

/// Uniform semi-infinite region attached at a domain edge for scattering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lead {
    /// Effective mass in the lead, in units of m₀.
    pub mass: f64,
    /// Constant potential in the lead, in eV.
    pub potential: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Boundary {
    /// ψ = 0 at both domain edges (bound states).
    HardWall,
    /// Plane-wave leads attached at x_min and x_max (transmission).
    Scattering { left: Lead, right: Lead },
}

/// A fully specified 1D problem on `[x_min, x_max]`.
#[derive(Debug, Clone)]
pub struct Problem {
    x_min: f64,
    x_max: f64,
    mass: Profile,
    potential: Profile,
    boundary: Boundary,
    constants: PhysicalConstants,
}

impl Problem {
    pub fn new(
        x_min: f64,
        x_max: f64,
        mass: Profile,
        potential: Profile,
        boundary: Boundary,
        constants: PhysicalConstants,
    ) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || x_min >= x_max {
            return Err(Error::InvalidInput(format!(
                "domain needs x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        mass.validate("mass", true)?;
        potential.validate("potential", false)?;
        if let Boundary::Scattering { left, right } = &boundary {
            for (side, lead) in [("left", left), ("right", right)] {
                if !(lead.mass > 0.0) || !lead.mass.is_finite() || !lead.potential.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "{side} lead needs positive mass and finite potential, got {lead:?}"
                    )));
                }
            }
        }
        Ok(Self {
            x_min,
            x_max,
            mass,
            potential,
            boundary,
            constants,
        })
    }

    /// Hard-wall problem with the default constants.
    pub fn hard_wall(x_min: f64, x_max: f64, mass: Profile, potential: Profile) -> Result<Self> {
        Self::new(
            x_min,
            x_max,
            mass,
            potential,
            Boundary::HardWall,
            PhysicalConstants::default(),
        )
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn span(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    pub fn mass_profile(&self) -> &Profile {
        &self.mass
    }

    pub fn potential_profile(&self) -> &Profile {
        &self.potential
    }

    pub fn mass_at(&self, x: f64) -> f64 {
        self.mass.eval(self.span(), x)
    }

    pub fn potential_at(&self, x: f64) -> f64 {
        self.potential.eval(self.span(), x)
    }

    pub fn mass_derivative_at(&self, x: f64) -> f64 {
        self.mass.derivative(self.span(), x)
    }

    pub fn mass_second_derivative_at(&self, x: f64) -> f64 {
        self.mass.second_derivative(self.span(), x)
    }

    pub fn potential_derivative_at(&self, x: f64) -> f64 {
        self.potential.derivative(self.span(), x)
    }

    /// Local wavenumber k(x) at energy `E`:
    /// real √(m̃(E−V)/c) where the region is classically allowed,
    /// +i√(m̃(V−E)/c) where it is forbidden.
    pub fn wavenumber(&self, energy: f64, x: f64) -> Complex64 {
        wavenumber_from(
            self.constants.hbar2_over_2m0,
            self.mass_at(x),
            self.potential_at(x),
            energy,
        )
    }

    /// k(x)/m̃(x), the quantity conserved in probability flux and matched
    /// (as ψ′/m*) across interfaces.
    pub fn flux_velocity(&self, energy: f64, x: f64) -> Complex64 {
        self.wavenumber(energy, x) / self.mass_at(x)
    }
}

/// Wavenumber for a uniform region: mass in m₀, potential and energy in eV.
pub fn wavenumber_from(hbar2_over_2m0: f64, mass: f64, potential: f64, energy: f64) -> Complex64 {
    let q = mass * (energy - potential) / hbar2_over_2m0;
    if q >= 0.0 {
        Complex64::new(q.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-q).sqrt())
    }
}

/// Wavenumber inside a lead.
pub fn lead_wavenumber(constants: PhysicalConstants, lead: Lead, energy: f64) -> Complex64 {
    wavenumber_from(constants.hbar2_over_2m0, lead.mass, lead.potential, energy)
}
