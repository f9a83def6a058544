//! TOML configuration: problem geometry, engine selection, numerical knobs,
//! and output destinations. Parsing is strict — unknown keys are rejected so
//! typos surface as errors naming the offending key.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::constants::PhysicalConstants;
use crate::engine::SolveOptions;
use crate::error::{Error, Result};
use crate::problem::{Boundary, Lead, Problem};
use crate::profile::Profile;

/// Schema revision this build reads.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    pub problem: ProblemConfig,
    #[serde(default)]
    pub engine: EngineConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub transmission: Option<TransmissionConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub x_min_nm: f64,
    pub x_max_nm: f64,
    pub mass: ProfileConfig,
    pub potential: ProfileConfig,
    #[serde(default)]
    pub boundary: BoundaryConfig,
    #[serde(default)]
    pub hbar2_over_2m0_ev_nm2: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileConfig {
    Constant(ConstantProfile),
    Linear(LinearProfile),
    PiecewiseConstant(PiecewiseProfile),
    Tabulated(TabulatedProfile),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantProfile {
    pub value: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearProfile {
    pub value_at_left: f64,
    pub value_at_right: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseProfile {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedProfile {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

impl ProfileConfig {
    fn to_profile(&self) -> Profile {
        match self {
            ProfileConfig::Constant(p) => Profile::Constant(p.value),
            ProfileConfig::Linear(p) => Profile::Linear {
                value_at_left: p.value_at_left,
                value_at_right: p.value_at_right,
            },
            ProfileConfig::PiecewiseConstant(p) => Profile::PiecewiseConstant {
                breakpoints: p.breakpoints.clone(),
                values: p.values.clone(),
            },
            ProfileConfig::Tabulated(p) => Profile::Tabulated {
                x: p.x.clone(),
                values: p.values.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryConfig {
    HardWall(HardWallBoundary),
    Scattering(ScatteringBoundary),
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        BoundaryConfig::HardWall(HardWallBoundary {})
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardWallBoundary {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringBoundary {
    pub left_lead: LeadConfig,
    pub right_lead: LeadConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeadConfig {
    pub mass: f64,
    pub potential_ev: f64,
}

impl LeadConfig {
    fn to_lead(&self) -> Lead {
        Lead {
            mass: self.mass,
            potential: self.potential_ev,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    #[serde(default = "default_engine_name")]
    pub name: String,
}

fn default_engine_name() -> String {
    "all".into()
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            name: default_engine_name(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    pub slabs: Option<usize>,
    pub scan_points: Option<usize>,
    pub tolerance_ev: Option<f64>,
    pub ode_steps: Option<usize>,
    pub grid_points: Option<usize>,
    pub energy_min_ev: Option<f64>,
    pub energy_max_ev: Option<f64>,
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmissionConfig {
    pub energy_min_ev: f64,
    pub energy_max_ev: f64,
    pub points: usize,
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Config> {
        let config: Config =
            toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("could not read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidInput(format!(
                "schema_version must be {SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        if let Some(t) = &self.transmission {
            if !t.energy_min_ev.is_finite()
                || !t.energy_max_ev.is_finite()
                || t.energy_min_ev >= t.energy_max_ev
            {
                return Err(Error::InvalidInput(format!(
                    "transmission.energy_min_ev must be below transmission.energy_max_ev, \
                     got [{}, {}]",
                    t.energy_min_ev, t.energy_max_ev
                )));
            }
            if t.points < 2 {
                return Err(Error::InvalidInput(format!(
                    "transmission.points must be at least 2, got {}",
                    t.points
                )));
            }
        }
        Ok(())
    }

    pub fn build_problem(&self) -> Result<Problem> {
        let constants = match self.problem.hbar2_over_2m0_ev_nm2 {
            Some(value) => PhysicalConstants::new(value)?,
            None => PhysicalConstants::default(),
        };
        let boundary = match &self.problem.boundary {
            BoundaryConfig::HardWall(_) => Boundary::HardWall,
            BoundaryConfig::Scattering(s) => Boundary::Scattering {
                left: s.left_lead.to_lead(),
                right: s.right_lead.to_lead(),
            },
        };
        Problem::new(
            self.problem.x_min_nm,
            self.problem.x_max_nm,
            self.problem.mass.to_profile(),
            self.problem.potential.to_profile(),
            boundary,
            constants,
        )
    }

    pub fn solve_options(&self) -> Result<SolveOptions> {
        let defaults = SolveOptions::default();
        let n = &self.numerics;
        let options = SolveOptions {
            slabs: n.slabs.unwrap_or(defaults.slabs),
            scan_points: n.scan_points.unwrap_or(defaults.scan_points),
            tol: n.tolerance_ev.unwrap_or(defaults.tol),
            ode_steps: n.ode_steps.unwrap_or(defaults.ode_steps),
            grid_points: n.grid_points.unwrap_or(defaults.grid_points),
            e_lo: n.energy_min_ev.unwrap_or(defaults.e_lo),
            e_hi: n.energy_max_ev.unwrap_or(defaults.e_hi),
            n_max: n.n_max,
        };
        options.validate()?;
        Ok(options)
    }

    pub fn engine_name(&self) -> &str {
        &self.engine.name
    }
}
