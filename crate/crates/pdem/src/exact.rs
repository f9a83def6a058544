//! Closed-form benchmark for a hard-wall well with linearly graded mass and
//! flat potential, plus the change of variables that maps any graded-mass
//! problem onto a constant-mass one.
//!
//! With V = 0 and m*(x) linear, the quantity φ = ψ′/m* satisfies an Airy
//! equation in the stretched coordinate y(x) = s·(x + ξ),
//! s = ∛(−E(m1−m2)/(2ac)), ξ = a(m1+m2)/(m1−m2), where m1 is the mass at
//! the right wall x = +a and m2 at the left wall x = −a. Hard walls pin
//! ψ(±a) = 0, i.e. dφ/dy = 0 at both ends, so the levels are roots of
//!
//! ```text
//! D(E) = Ai′(y(−a))·Bi′(y(+a)) − Ai′(y(+a))·Bi′(y(−a)),
//! ```
//!
//! and the eigenfunction is ψ ∝ Bi′(y(−a))·Ai′(y(x)) − Ai′(y(−a))·Bi′(y(x)).
//! D has a spurious zero at E = 0 (both arguments collapse to the origin),
//! so energy scans start strictly above it.

use num_complex::Complex64;

use crate::airy::airy;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, linspace, scan_and_bisect};
use crate::problem::{Boundary, Problem};
use crate::profile::Profile;
use crate::semiclassical::linear_well_energy;
use crate::wavefunction::{EngineKind, Wavefunction};

/// Largest |y| the Airy evaluator accepts, minus a safety margin.
const Y_LIMIT: f64 = 25.0 * (1.0 - 1e-6);

struct StretchedCoordinate {
    scale: f64,
    offset: f64,
}

impl StretchedCoordinate {
    fn new(constants: PhysicalConstants, m1: f64, m2: f64, half_width: f64, energy: f64) -> Self {
        let c = constants.hbar2_over_2m0;
        let scale = (-energy * (m1 - m2) / (2.0 * half_width * c)).cbrt();
        let offset = half_width * (m1 + m2) / (m1 - m2);
        Self { scale, offset }
    }

    fn y(&self, x: f64) -> f64 {
        self.scale * (x + self.offset)
    }
}

fn validate_linear_well(m1: f64, m2: f64, half_width: f64) -> Result<()> {
    if !(m1 > 0.0) || !(m2 > 0.0) || !m1.is_finite() || !m2.is_finite() {
        return Err(Error::InvalidInput(format!(
            "masses must be positive and finite, got {m1} and {m2}"
        )));
    }
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::InvalidInput(format!(
            "half-width must be positive, got {half_width}"
        )));
    }
    if (m1 - m2).abs() < 1e-12 * m1.max(m2) {
        return Err(Error::InvalidInput(
            "wall masses must differ for the stretched-coordinate form; \
             a uniform well is solved by plain sinusoids"
                .into(),
        ));
    }
    Ok(())
}

/// Eigencondition determinant D(E).
pub fn eigencondition(
    constants: PhysicalConstants,
    m1: f64,
    m2: f64,
    half_width: f64,
    energy: f64,
) -> Result<f64> {
    validate_linear_well(m1, m2, half_width)?;
    let coord = StretchedCoordinate::new(constants, m1, m2, half_width, energy);
    let left = airy(coord.y(-half_width))?;
    let right = airy(coord.y(half_width))?;
    Ok(left.ai_prime * right.bi_prime - right.ai_prime * left.bi_prime)
}

/// The levels found for a linear-mass well, with `truncated` set when the
/// requested count ran past the argument range of the Airy evaluator.
#[derive(Debug, Clone)]
pub struct ExactSpectrum {
    pub levels: Vec<f64>,
    pub truncated: bool,
}

/// First `n_max` levels of the hard-wall linear-mass well.
pub fn linear_well_exact_spectrum(
    constants: PhysicalConstants,
    m1: f64,
    m2: f64,
    half_width: f64,
    n_max: usize,
) -> Result<ExactSpectrum> {
    validate_linear_well(m1, m2, half_width)?;
    if n_max == 0 {
        return Err(Error::InvalidInput("need at least one level".into()));
    }
    let e1 = linear_well_energy(constants, m1, m2, half_width, 1)?;
    let e_hi_wanted = 0.5
        * (linear_well_energy(constants, m1, m2, half_width, n_max)?
            + linear_well_energy(constants, m1, m2, half_width, n_max + 1)?);
    let reach = half_width * (m1 + m2) / (m1 - m2);
    let worst = (reach - half_width).abs().max((reach + half_width).abs());
    let c = constants.hbar2_over_2m0;
    let e_cap = (Y_LIMIT / worst).powi(3) * 2.0 * half_width * c / (m1 - m2).abs();
    let e_hi = e_hi_wanted.min(e_cap);
    let e_lo = 0.02 * e1;
    let points = ((4.0 * e_hi / e1) as usize).clamp(200, 20_000);
    let mut f = |e: f64| eigencondition(constants, m1, m2, half_width, e);
    let mut roots = scan_and_bisect(&mut f, e_lo, e_hi, points, 1e-12)?;
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
    roots.truncate(n_max);
    let truncated = e_hi < e_hi_wanted && roots.len() < n_max;
    if roots.len() < n_max && !truncated {
        return Err(Error::Convergence(format!(
            "found only {} of {n_max} levels in [{e_lo}, {e_hi}]",
            roots.len()
        )));
    }
    Ok(ExactSpectrum {
        levels: roots,
        truncated,
    })
}

/// Eigenfunction of the linear-mass well at `energy`, sampled on a uniform
/// grid over [−a, a]. Real-valued up to the common arbitrary scale.
pub fn linear_well_exact_wavefunction(
    constants: PhysicalConstants,
    m1: f64,
    m2: f64,
    half_width: f64,
    energy: f64,
    grid_points: usize,
) -> Result<Wavefunction> {
    validate_linear_well(m1, m2, half_width)?;
    if grid_points < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 grid points, got {grid_points}"
        )));
    }
    let coord = StretchedCoordinate::new(constants, m1, m2, half_width, energy);
    let left = airy(coord.y(-half_width))?;
    let grid = linspace(-half_width, half_width, grid_points);
    let mut values = Vec::with_capacity(grid_points);
    for &x in &grid {
        let here = airy(coord.y(x))?;
        let psi = left.bi_prime * here.ai_prime - left.ai_prime * here.bi_prime;
        values.push(Complex64::new(psi, 0.0));
    }
    Wavefunction::new(grid, values, energy, EngineKind::Exact)
}

/// Local flattening correction F(x) that appears in the potential when the
/// graded-mass equation is mapped onto a constant-mass one:
/// F = −(c/4m̃)·[m̃″/m̃ − (7/4)(m̃′/m̃)²].
pub fn f_correction(problem: &Problem, x: f64) -> f64 {
    let c = problem.constants().hbar2_over_2m0;
    let m = problem.mass_at(x);
    let mp = problem.mass_derivative_at(x);
    let mpp = problem.mass_second_derivative_at(x);
    -(c / (4.0 * m)) * (mpp / m - 1.75 * (mp / m) * (mp / m))
}

/// A graded-mass problem rewritten in the mass-weighted coordinate
/// y(x) = ∫√m̃ dx, where the kinetic term has unit mass and the potential
/// picks up the flattening correction F.
#[derive(Debug, Clone)]
pub struct TransformedProblem {
    pub x_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    pub effective_potential: Vec<f64>,
    constants: PhysicalConstants,
}

/// Tabulate the constant-mass form of `problem` on `grid_points` samples.
pub fn to_constant_mass(problem: &Problem, grid_points: usize) -> Result<TransformedProblem> {
    if !matches!(problem.boundary(), Boundary::HardWall) {
        return Err(Error::Unsupported(
            "the constant-mass transform is set up for hard-wall problems".into(),
        ));
    }
    if grid_points < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 grid points, got {grid_points}"
        )));
    }
    let x_grid = linspace(problem.x_min(), problem.x_max(), grid_points);
    let mut y_grid = Vec::with_capacity(grid_points);
    let mut effective_potential = Vec::with_capacity(grid_points);
    let mut y = 0.0;
    let mut root_mass = |x: f64| Ok(problem.mass_at(x).sqrt());
    for (j, &x) in x_grid.iter().enumerate() {
        if j > 0 {
            y += adaptive_simpson(&mut root_mass, x_grid[j - 1], x, 1e-13, 40)?;
        }
        y_grid.push(y);
        effective_potential.push(problem.potential_at(x) + f_correction(problem, x));
    }
    Ok(TransformedProblem {
        x_grid,
        y_grid,
        effective_potential,
        constants: problem.constants(),
    })
}

impl TransformedProblem {
    pub fn y_max(&self) -> f64 {
        *self.y_grid.last().unwrap()
    }

    /// Invert y(x) by Newton iteration anchored in the tabulated cell.
    pub fn x_of_y(&self, y: f64, problem: &Problem) -> Result<f64> {
        let y_max = self.y_max();
        if !(-1e-9..=y_max + 1e-9).contains(&y) {
            return Err(Error::InvalidInput(format!(
                "y = {y} outside the transformed range [0, {y_max}]"
            )));
        }
        let j = self
            .y_grid
            .partition_point(|&g| g <= y)
            .saturating_sub(1)
            .min(self.y_grid.len() - 2);
        let (y0, y1) = (self.y_grid[j], self.y_grid[j + 1]);
        let (x0, x1) = (self.x_grid[j], self.x_grid[j + 1]);
        let mut x = if y1 > y0 {
            x0 + (x1 - x0) * (y - y0) / (y1 - y0)
        } else {
            x0
        };
        let mut root_mass = |s: f64| Ok(problem.mass_at(s).sqrt());
        for _ in 0..30 {
            let integral = if x >= x0 {
                adaptive_simpson(&mut root_mass, x0, x, 1e-13, 40)?
            } else {
                -adaptive_simpson(&mut root_mass, x, x0, 1e-13, 40)?
            };
            let residual = y0 + integral - y;
            let step = residual / problem.mass_at(x).sqrt();
            x -= step;
            x = x.clamp(self.x_grid[0], *self.x_grid.last().unwrap());
            if step.abs() < 1e-13 {
                break;
            }
        }
        Ok(x)
    }

    /// Package the transform as a solvable problem: unit mass, tabulated
    /// effective potential, hard walls at y = 0 and y = y_max.
    pub fn to_problem(&self) -> Result<Problem> {
        Problem::new(
            0.0,
            self.y_max(),
            Profile::Constant(1.0),
            Profile::Tabulated {
                x: self.y_grid.clone(),
                values: self.effective_potential.clone(),
            },
            Boundary::HardWall,
            self.constants,
        )
    }
}
