//! Runtime-selectable solver strategies behind a common trait.
//!
//! Every solver (slab transfer matrices, coupled amplitudes, the
//! semiclassical quantization, and the closed-form benchmark) implements
//! [`Engine`] and registers under a short name, so configuration files and
//! the command line pick strategies without compile-time wiring. The `all`
//! selector expands to the production trio — `tmm`, `wkb`, `exact` — while
//! the coupled-amplitude engine is available by explicit name for
//! cross-checks.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coupled;
use crate::error::{Error, Result};
use crate::exact;
use crate::numeric::linspace;
use crate::problem::{Boundary, Problem};
use crate::profile::Profile;
use crate::semiclassical;
use crate::tmm;
use crate::wavefunction::{EngineKind, Wavefunction};

/// Engine names expanded by the `all` selector, in output order.
pub const DEFAULT_SET: [&str; 3] = ["tmm", "wkb", "exact"];

/// Knobs shared by every engine; each engine reads the ones it understands.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Slab count for the transfer-matrix discretization.
    pub slabs: usize,
    /// Energy-scan resolution used to bracket eigenvalues.
    pub scan_points: usize,
    /// Absolute energy tolerance for root refinement (eV).
    pub tol: f64,
    /// Runge–Kutta step count for the coupled-amplitude integration.
    pub ode_steps: usize,
    /// Sample count for returned wavefunctions.
    pub grid_points: usize,
    /// Lower edge of the eigenvalue search window (eV).
    pub e_lo: f64,
    /// Upper edge of the eigenvalue search window (eV).
    pub e_hi: f64,
    /// Optional cap on the number of levels returned.
    pub n_max: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            slabs: 20_000,
            scan_points: 2_000,
            tol: 1e-9,
            ode_steps: 4_096,
            grid_points: 2_048,
            e_lo: 1e-3,
            e_hi: 2.6,
            n_max: None,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.slabs < 2 {
            return Err(Error::InvalidInput(format!(
                "numerics.slabs must be at least 2, got {}",
                self.slabs
            )));
        }
        if self.scan_points < 2 {
            return Err(Error::InvalidInput(format!(
                "numerics.scan_points must be at least 2, got {}",
                self.scan_points
            )));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::InvalidInput(format!(
                "numerics.tolerance_ev must be positive, got {}",
                self.tol
            )));
        }
        if self.ode_steps < 16 {
            return Err(Error::InvalidInput(format!(
                "numerics.ode_steps must be at least 16, got {}",
                self.ode_steps
            )));
        }
        if self.grid_points < 2 {
            return Err(Error::InvalidInput(format!(
                "numerics.grid_points must be at least 2, got {}",
                self.grid_points
            )));
        }
        if !self.e_lo.is_finite() || !self.e_hi.is_finite() || self.e_lo >= self.e_hi {
            return Err(Error::InvalidInput(format!(
                "numerics.energy_min_ev must be below numerics.energy_max_ev, got [{}, {}]",
                self.e_lo, self.e_hi
            )));
        }
        if self.n_max == Some(0) {
            return Err(Error::InvalidInput(
                "numerics.n_max must be at least 1 when set".into(),
            ));
        }
        Ok(())
    }
}

/// One bound state: quantum number (1-based) and energy in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
}

/// A strategy that can enumerate bound states and sample eigenfunctions.
pub trait Engine {
    fn name(&self) -> &'static str;

    /// Levels with energy inside `[e_lo, e_hi]`, at most `n_max` of them.
    fn spectrum(&self, problem: &Problem, options: &SolveOptions) -> Result<Vec<Level>>;

    /// Unnormalized eigenfunction of state `n` (1-based).
    fn wavefunction(
        &self,
        problem: &Problem,
        n: usize,
        options: &SolveOptions,
    ) -> Result<Wavefunction>;
}

fn cap_levels(mut levels: Vec<Level>, n_max: Option<usize>) -> Vec<Level> {
    if let Some(k) = n_max {
        levels.truncate(k);
    }
    levels
}

fn pick_level(levels: &[Level], n: usize, engine: &str) -> Result<f64> {
    levels
        .iter()
        .find(|l| l.n == n)
        .map(|l| l.energy)
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "state n={n} not found by the {engine} engine in the configured energy window"
            ))
        })
}

/// Slab transfer-matrix solver.
pub struct TmmEngine;

impl Engine for TmmEngine {
    fn name(&self) -> &'static str {
        "tmm"
    }

    fn spectrum(&self, problem: &Problem, options: &SolveOptions) -> Result<Vec<Level>> {
        let found = tmm::find_eigenvalues(
            problem,
            options.e_lo,
            options.e_hi,
            options.slabs,
            options.scan_points,
            options.tol,
        )?;
        let levels = found
            .into_iter()
            .map(|(n, energy)| Level { n, energy })
            .collect();
        Ok(cap_levels(levels, options.n_max))
    }

    fn wavefunction(
        &self,
        problem: &Problem,
        n: usize,
        options: &SolveOptions,
    ) -> Result<Wavefunction> {
        let levels = self.spectrum(problem, options)?;
        let energy = pick_level(&levels, n, self.name())?;
        let slabs = tmm::build_slabs(problem, options.slabs)?;
        let propagation = tmm::propagate_hard_wall(problem, &slabs, energy)?;
        let per_slab = (options.grid_points / options.slabs).max(1);
        tmm::reconstruct_wavefunction(&slabs, &propagation, energy, per_slab)
    }
}

/// Coupled-amplitude ODE solver.
pub struct CoupledEngine;

impl Engine for CoupledEngine {
    fn name(&self) -> &'static str {
        "coupled"
    }

    fn spectrum(&self, problem: &Problem, options: &SolveOptions) -> Result<Vec<Level>> {
        let found = coupled::find_eigenvalues(
            problem,
            options.e_lo,
            options.e_hi,
            options.ode_steps,
            options.scan_points,
            options.tol,
        )?;
        let levels = found
            .into_iter()
            .map(|(n, energy)| Level { n, energy })
            .collect();
        Ok(cap_levels(levels, options.n_max))
    }

    fn wavefunction(
        &self,
        problem: &Problem,
        n: usize,
        options: &SolveOptions,
    ) -> Result<Wavefunction> {
        let levels = self.spectrum(problem, options)?;
        let energy = pick_level(&levels, n, self.name())?;
        let launch = coupled::hard_wall_launch(problem, energy);
        let trajectory = coupled::integrate_coupled(
            problem,
            energy,
            problem.x_min(),
            problem.x_max(),
            launch,
            options.ode_steps,
        )?;
        trajectory.wavefunction(problem)
    }
}

/// Semiclassical phase-quantization solver.
pub struct WkbEngine;

impl WkbEngine {
    fn quantum_number_range(problem: &Problem, options: &SolveOptions) -> Result<(usize, usize)> {
        let theta_lo =
            semiclassical::phase_integral(problem, options.e_lo, problem.x_min(), problem.x_max())?;
        let theta_hi =
            semiclassical::phase_integral(problem, options.e_hi, problem.x_min(), problem.x_max())?;
        let first = ((theta_lo / PI).ceil() as usize).max(1);
        let last = (theta_hi / PI).floor() as usize;
        Ok((first, last))
    }
}

impl Engine for WkbEngine {
    fn name(&self) -> &'static str {
        "wkb"
    }

    fn spectrum(&self, problem: &Problem, options: &SolveOptions) -> Result<Vec<Level>> {
        if !matches!(problem.boundary(), Boundary::HardWall) {
            return Err(Error::Unsupported(
                "the wkb engine quantizes hard-wall problems only".into(),
            ));
        }
        let (first, last) = Self::quantum_number_range(problem, options)?;
        let mut levels = Vec::new();
        for n in first..=last {
            let energy = semiclassical::hard_wall_quantize(problem, n, options.e_lo, options.e_hi)?;
            levels.push(Level { n, energy });
            if options.n_max.is_some_and(|k| levels.len() >= k) {
                break;
            }
        }
        Ok(levels)
    }

    fn wavefunction(
        &self,
        problem: &Problem,
        n: usize,
        options: &SolveOptions,
    ) -> Result<Wavefunction> {
        let energy = semiclassical::hard_wall_quantize(problem, n, options.e_lo, options.e_hi)
            .map_err(|e| match e {
                Error::Convergence(_) => Error::InvalidInput(format!(
                    "state n={n} not found by the wkb engine in the configured energy window"
                )),
                other => other,
            })?;
        semiclassical::wkb_standing_wave(problem, energy, options.grid_points)
    }
}

/// The well shapes the closed-form benchmark engine recognizes.
enum BenchmarkShape {
    Uniform { mass: f64 },
    LinearMass { left_mass: f64, right_mass: f64 },
}

/// Closed-form benchmark solver for hard-wall wells with flat potential and
/// constant or linearly graded mass.
pub struct ExactEngine;

impl ExactEngine {
    fn classify(problem: &Problem) -> Result<(BenchmarkShape, f64)> {
        if !matches!(problem.boundary(), Boundary::HardWall) {
            return Err(Error::Unsupported(
                "the exact engine handles hard-wall wells only".into(),
            ));
        }
        let floor = match problem.potential_profile() {
            Profile::Constant(v) => *v,
            _ => {
                return Err(Error::Unsupported(
                    "the exact engine needs a flat potential".into(),
                ))
            }
        };
        let shape = match problem.mass_profile() {
            Profile::Constant(m) => BenchmarkShape::Uniform { mass: *m },
            Profile::Linear {
                value_at_left,
                value_at_right,
            } => {
                if (value_at_left - value_at_right).abs()
                    < 1e-12 * value_at_left.max(*value_at_right)
                {
                    BenchmarkShape::Uniform {
                        mass: *value_at_left,
                    }
                } else {
                    BenchmarkShape::LinearMass {
                        left_mass: *value_at_left,
                        right_mass: *value_at_right,
                    }
                }
            }
            _ => {
                return Err(Error::Unsupported(
                    "the exact engine needs a constant or linear mass profile".into(),
                ))
            }
        };
        Ok((shape, floor))
    }

    fn uniform_level(problem: &Problem, mass: f64, n: usize) -> f64 {
        let width = problem.x_max() - problem.x_min();
        let c = problem.constants().hbar2_over_2m0;
        let k = n as f64 * PI / width;
        c * k * k / mass
    }

    fn linear_levels(problem: &Problem, left_mass: f64, right_mass: f64, count: usize) -> Result<Vec<f64>> {
        let half_width = 0.5 * (problem.x_max() - problem.x_min());
        let spectrum = exact::linear_well_exact_spectrum(
            problem.constants(),
            right_mass,
            left_mass,
            half_width,
            count,
        )?;
        Ok(spectrum.levels)
    }

    fn level_budget(problem: &Problem, shape: &BenchmarkShape, floor: f64, options: &SolveOptions) -> Result<usize> {
        if let Some(k) = options.n_max {
            return Ok(k);
        }
        let half_width = 0.5 * (problem.x_max() - problem.x_min());
        let mut n = 1usize;
        loop {
            let estimate = match shape {
                BenchmarkShape::Uniform { mass } => Self::uniform_level(problem, *mass, n),
                BenchmarkShape::LinearMass {
                    left_mass,
                    right_mass,
                } => semiclassical::linear_well_energy(
                    problem.constants(),
                    *right_mass,
                    *left_mass,
                    half_width,
                    n,
                )?,
            };
            if floor + estimate > options.e_hi || n >= 512 {
                return Ok(n + 1);
            }
            n += 1;
        }
    }
}

impl Engine for ExactEngine {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn spectrum(&self, problem: &Problem, options: &SolveOptions) -> Result<Vec<Level>> {
        let (shape, floor) = Self::classify(problem)?;
        let budget = Self::level_budget(problem, &shape, floor, options)?;
        let raw = match shape {
            BenchmarkShape::Uniform { mass } => (1..=budget)
                .map(|n| Self::uniform_level(problem, mass, n))
                .collect(),
            BenchmarkShape::LinearMass {
                left_mass,
                right_mass,
            } => Self::linear_levels(problem, left_mass, right_mass, budget)?,
        };
        let levels = raw
            .into_iter()
            .enumerate()
            .map(|(i, e)| Level {
                n: i + 1,
                energy: e + floor,
            })
            .filter(|l| l.energy >= options.e_lo && l.energy <= options.e_hi)
            .collect();
        Ok(cap_levels(levels, options.n_max))
    }

    fn wavefunction(
        &self,
        problem: &Problem,
        n: usize,
        options: &SolveOptions,
    ) -> Result<Wavefunction> {
        if n == 0 {
            return Err(Error::InvalidInput("states are numbered from n=1".into()));
        }
        let (shape, floor) = Self::classify(problem)?;
        let in_window = |energy: f64| -> Result<f64> {
            if energy < options.e_lo || energy > options.e_hi {
                return Err(Error::InvalidInput(format!(
                    "state n={n} not found by the exact engine in the configured energy window"
                )));
            }
            Ok(energy)
        };
        match shape {
            BenchmarkShape::Uniform { mass } => {
                let energy = in_window(Self::uniform_level(problem, mass, n) + floor)?;
                let width = problem.x_max() - problem.x_min();
                let grid = linspace(problem.x_min(), problem.x_max(), options.grid_points);
                let values = grid
                    .iter()
                    .map(|&x| {
                        let phase = n as f64 * PI * (x - problem.x_min()) / width;
                        Complex64::new(phase.sin(), 0.0)
                    })
                    .collect();
                Wavefunction::new(grid, values, energy, EngineKind::Exact)
            }
            BenchmarkShape::LinearMass {
                left_mass,
                right_mass,
            } => {
                let levels = Self::linear_levels(problem, left_mass, right_mass, n)?;
                if levels.len() < n {
                    return Err(Error::InvalidInput(format!(
                        "state n={n} is beyond the range of the exact benchmark"
                    )));
                }
                let energy = in_window(levels[n - 1] + floor)?;
                let half_width = 0.5 * (problem.x_max() - problem.x_min());
                let center = 0.5 * (problem.x_min() + problem.x_max());
                let centered = exact::linear_well_exact_wavefunction(
                    problem.constants(),
                    right_mass,
                    left_mass,
                    half_width,
                    levels[n - 1],
                    options.grid_points,
                )?;
                let grid = centered.grid.iter().map(|&x| x + center).collect();
                Wavefunction::new(grid, centered.values, energy, EngineKind::Exact)
            }
        }
    }
}

/// Name-indexed collection of engines.
pub struct EngineRegistry {
    engines: Vec<Box<dyn Engine>>,
}

impl EngineRegistry {
    pub fn new() -> Self {
        Self {
            engines: Vec::new(),
        }
    }

    /// Registry holding the four built-in strategies.
    pub fn with_builtins() -> Self {
        let mut registry = Self::new();
        registry.register(Box::new(TmmEngine));
        registry.register(Box::new(CoupledEngine));
        registry.register(Box::new(WkbEngine));
        registry.register(Box::new(ExactEngine));
        registry
    }

    /// Add an engine, replacing any previous one with the same name.
    pub fn register(&mut self, engine: Box<dyn Engine>) {
        if let Some(slot) = self
            .engines
            .iter_mut()
            .find(|e| e.name() == engine.name())
        {
            *slot = engine;
        } else {
            self.engines.push(engine);
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn Engine> {
        self.engines
            .iter()
            .find(|e| e.name() == name)
            .map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.engines.iter().map(|e| e.name()).collect()
    }

    /// Resolve an engine selector: a registered name, or `all` for the
    /// default trio.
    pub fn select(&self, spec: &str) -> Result<Vec<&dyn Engine>> {
        if spec == "all" {
            return DEFAULT_SET
                .iter()
                .map(|name| {
                    self.get(name).ok_or_else(|| {
                        Error::InvalidInput(format!("engine '{name}' is not registered"))
                    })
                })
                .collect();
        }
        let engine = self.get(spec).ok_or_else(|| {
            Error::InvalidInput(format!(
                "unknown engine '{spec}'; available: {}, or 'all'",
                self.names().join(", ")
            ))
        })?;
        Ok(vec![engine])
    }
}

impl Default for EngineRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
