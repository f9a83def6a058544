//! Slab transfer-matrix solver.
//!
//! The domain is sliced into uniform slabs, each carrying the mass and
//! potential sampled at its midpoint, so the state inside slab j is a pair
//! of counter-propagating plane waves t·e^{ikx} + r·e^{−ikx}. A 2×2 matrix
//! maps the pair across each interface by enforcing continuity of ψ and of
//! ψ′/m*; its determinant equals the velocity ratio h_j/h_{j+1} with
//! h = k/m*, so determinants telescope across any chain. Bound states are
//! roots of a shooting mismatch, scattering coefficients come from the
//! accumulated chain matrix with the growth tracked in log scale.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix2::{AmplitudePair, Matrix2};
use crate::numeric::{linspace, scan_and_bisect};
use crate::problem::{lead_wavenumber, wavenumber_from, Boundary, Problem};
use crate::wavefunction::{EngineKind, Wavefunction};

/// Pairs get renormalized after this many interface crossings.
const RESCALE_INTERVAL: usize = 64;

/// Slabs closer than this to a classical turning point are nudged to the
/// allowed side so h = k/m* never vanishes.
const TURNING_POINT_MARGIN: f64 = 1e-12;

/// Uniform slab decomposition of a problem domain: `edges` has one more
/// entry than the per-slab midpoint samples.
#[derive(Debug, Clone)]
pub struct Slabbing {
    pub edges: Vec<f64>,
    pub masses: Vec<f64>,
    pub potentials: Vec<f64>,
    hbar2_over_2m0: f64,
}

impl Slabbing {
    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Wavenumber of slab `j`, nudged off exact turning points.
    pub fn wavenumber(&self, j: usize, energy: f64) -> Complex64 {
        let v = guard_turning_point(self.potentials[j], energy);
        wavenumber_from(self.hbar2_over_2m0, self.masses[j], v, energy)
    }

    /// k/m* of slab `j`.
    pub fn flux_velocity(&self, j: usize, energy: f64) -> Complex64 {
        self.wavenumber(j, energy) / self.masses[j]
    }
}

fn guard_turning_point(potential: f64, energy: f64) -> f64 {
    if (energy - potential).abs() < TURNING_POINT_MARGIN {
        energy - TURNING_POINT_MARGIN
    } else {
        potential
    }
}

/// Slice the domain into `n_slabs` uniform slabs sampled at midpoints.
pub fn build_slabs(problem: &Problem, n_slabs: usize) -> Result<Slabbing> {
    if n_slabs < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 slabs, got {n_slabs}"
        )));
    }
    let edges = linspace(problem.x_min(), problem.x_max(), n_slabs + 1);
    let mut masses = Vec::with_capacity(n_slabs);
    let mut potentials = Vec::with_capacity(n_slabs);
    for w in edges.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        masses.push(problem.mass_at(mid));
        potentials.push(problem.potential_at(mid));
    }
    Ok(Slabbing {
        edges,
        masses,
        potentials,
        hbar2_over_2m0: problem.constants().hbar2_over_2m0,
    })
}

/// Matrix carrying (t, r) across the interface at `y` from the region with
/// (k_left, h_left) into the region with (k_right, h_right):
///
/// ```text
/// ⎡ ½(1+ρ)e^{+i(kl−kr)y}   ½(1−ρ)e^{−i(kl+kr)y} ⎤
/// ⎣ ½(1−ρ)e^{+i(kl+kr)y}   ½(1+ρ)e^{−i(kl−kr)y} ⎦,   ρ = h_left/h_right,
/// ```
///
/// with determinant exactly ρ.
pub fn interface_matrix(
    k_left: Complex64,
    h_left: Complex64,
    k_right: Complex64,
    h_right: Complex64,
    y: f64,
) -> Result<Matrix2> {
    if h_right.norm() == 0.0 {
        return Err(Error::Domain(
            "interface into a region with zero flux velocity".into(),
        ));
    }
    let i = Complex64::new(0.0, 1.0);
    let rho = h_left / h_right;
    let plus = 0.5 * (1.0 + rho);
    let minus = 0.5 * (1.0 - rho);
    let phase_diff = i * (k_left - k_right) * y;
    let phase_sum = i * (k_left + k_right) * y;
    Ok(Matrix2 {
        m11: plus * phase_diff.exp(),
        m12: minus * (-phase_sum).exp(),
        m21: minus * phase_sum.exp(),
        m22: plus * (-phase_diff).exp(),
    })
}

/// Amplitude pairs in every slab, each rescaled by e^{−log_scale} so the
/// stored numbers stay O(1); the true pair in slab j is
/// `pairs[j] · e^{log_scales[j]}`.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub pairs: Vec<AmplitudePair>,
    pub log_scales: Vec<f64>,
}

/// Carry `initial` (the pair in the first slab) across all interior
/// interfaces.
pub fn propagate(
    slabs: &Slabbing,
    energy: f64,
    initial: AmplitudePair,
) -> Result<Propagation> {
    let scale = initial.max_abs();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidInput(format!(
            "initial amplitude pair must be nonzero and finite, got magnitude {scale}"
        )));
    }
    let n = slabs.len();
    let mut pairs = Vec::with_capacity(n);
    let mut log_scales = Vec::with_capacity(n);
    let mut pair = initial;
    let mut log_scale = 0.0;
    pairs.push(pair);
    log_scales.push(log_scale);
    let mut k_left = slabs.wavenumber(0, energy);
    let mut h_left = slabs.flux_velocity(0, energy);
    for j in 0..n - 1 {
        let k_right = slabs.wavenumber(j + 1, energy);
        let h_right = slabs.flux_velocity(j + 1, energy);
        let t = interface_matrix(k_left, h_left, k_right, h_right, slabs.edges[j + 1])?;
        pair = t.apply(pair);
        let magnitude = pair.max_abs();
        if !magnitude.is_finite() {
            return Err(Error::Convergence(format!(
                "amplitude overflow while crossing interface at x = {}",
                slabs.edges[j + 1]
            )));
        }
        if (j + 1) % RESCALE_INTERVAL == 0 || magnitude > 1e250 {
            if magnitude == 0.0 {
                return Err(Error::Convergence(
                    "amplitude pair collapsed to zero during propagation".into(),
                ));
            }
            pair = pair.scale(1.0 / magnitude);
            log_scale += magnitude.ln();
        }
        pairs.push(pair);
        log_scales.push(log_scale);
        k_left = k_right;
        h_left = h_right;
    }
    Ok(Propagation { pairs, log_scales })
}

/// Hard-wall shooting residual at `energy`: launch the unique (up to scale)
/// solution with ψ(x_min) = 0 and read off ψ at x_max, normalized by the
/// launch slope so the result is real and changes sign across each bound
/// state. The overall positive rescale factor from propagation is left in,
/// which moves magnitudes but never zero crossings.
pub fn boundary_mismatch(problem: &Problem, slabs: &Slabbing, energy: f64) -> Result<f64> {
    if !matches!(problem.boundary(), Boundary::HardWall) {
        return Err(Error::Unsupported(
            "bound-state search needs hard-wall boundaries".into(),
        ));
    }
    let i = Complex64::new(0.0, 1.0);
    let k1 = slabs.wavenumber(0, energy);
    let x_min = problem.x_min();
    let initial = AmplitudePair::new((-i * k1 * x_min).exp(), -(i * k1 * x_min).exp());
    let prop = propagate(slabs, energy, initial)?;
    let last = slabs.len() - 1;
    let kn = slabs.wavenumber(last, energy);
    let x_max = problem.x_max();
    let pair = prop.pairs[last];
    let psi = pair.rightward * (i * kn * x_max).exp() + pair.leftward * (-i * kn * x_max).exp();
    Ok((psi / (2.0 * i * k1)).re)
}

/// Bound states in `[e_lo, e_hi]` as `(index, energy)` with index 1 for the
/// nodeless ground state. Indices come from counting wavefunction nodes and
/// fall back to enumeration order if the counts don't increase strictly.
pub fn find_eigenvalues(
    problem: &Problem,
    e_lo: f64,
    e_hi: f64,
    n_slabs: usize,
    scan_points: usize,
    tol: f64,
) -> Result<Vec<(usize, f64)>> {
    let slabs = build_slabs(problem, n_slabs)?;
    let mut f = |e: f64| boundary_mismatch(problem, &slabs, e);
    let mut roots = scan_and_bisect(&mut f, e_lo, e_hi, scan_points, tol)?;
    roots.dedup_by(|a, b| (*a - *b).abs() < 10.0 * tol);
    let mut levels = Vec::with_capacity(roots.len());
    for &energy in &roots {
        let prop = propagate_hard_wall(problem, &slabs, energy)?;
        let wf = reconstruct_wavefunction(&slabs, &prop, energy, 8)?.normalized()?;
        levels.push((wf.node_count() + 1, energy));
    }
    let strictly_increasing = levels.windows(2).all(|w| w[1].0 > w[0].0);
    if !strictly_increasing {
        for (i, level) in levels.iter_mut().enumerate() {
            level.0 = i + 1;
        }
    }
    Ok(levels)
}

/// Propagation of the hard-wall launch (ψ(x_min) = 0, ψ′(x_min) = 2ik₁).
pub fn propagate_hard_wall(
    problem: &Problem,
    slabs: &Slabbing,
    energy: f64,
) -> Result<Propagation> {
    let i = Complex64::new(0.0, 1.0);
    let k1 = slabs.wavenumber(0, energy);
    let x_min = problem.x_min();
    let initial = AmplitudePair::new((-i * k1 * x_min).exp(), -(i * k1 * x_min).exp());
    propagate(slabs, energy, initial)
}

/// Sample ψ on `points_per_slab` left-closed uniform points per slab plus
/// the right domain edge. Values carry a common positive rescale factor.
pub fn reconstruct_wavefunction(
    slabs: &Slabbing,
    propagation: &Propagation,
    energy: f64,
    points_per_slab: usize,
) -> Result<Wavefunction> {
    if points_per_slab == 0 {
        return Err(Error::InvalidInput(
            "need at least one sample point per slab".into(),
        ));
    }
    if propagation.pairs.len() != slabs.len() {
        return Err(Error::InvalidInput(format!(
            "propagation covers {} slabs but the slabbing has {}",
            propagation.pairs.len(),
            slabs.len()
        )));
    }
    let i = Complex64::new(0.0, 1.0);
    let reference = propagation
        .log_scales
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let n = slabs.len();
    let mut grid = Vec::with_capacity(n * points_per_slab + 1);
    let mut values = Vec::with_capacity(n * points_per_slab + 1);
    for j in 0..n {
        let k = slabs.wavenumber(j, energy);
        let pair = propagation.pairs[j];
        let weight = (propagation.log_scales[j] - reference).exp();
        let left = slabs.edges[j];
        let width = slabs.edges[j + 1] - left;
        for p in 0..points_per_slab {
            let x = left + width * (p as f64) / (points_per_slab as f64);
            let psi = pair.rightward * (i * k * x).exp() + pair.leftward * (-i * k * x).exp();
            grid.push(x);
            values.push(psi * weight);
        }
    }
    let x_max = *slabs.edges.last().unwrap();
    let k = slabs.wavenumber(n - 1, energy);
    let pair = propagation.pairs[n - 1];
    let weight = (propagation.log_scales[n - 1] - reference).exp();
    grid.push(x_max);
    values.push(
        (pair.rightward * (i * k * x_max).exp() + pair.leftward * (-i * k * x_max).exp()) * weight,
    );
    Wavefunction::new(grid, values, energy, EngineKind::Tmm)
}

/// ψ at one point from a stored propagation, carrying the same common
/// rescale factor as `reconstruct_wavefunction`.
pub fn evaluate_at(
    slabs: &Slabbing,
    propagation: &Propagation,
    energy: f64,
    x: f64,
) -> Result<Complex64> {
    let x_min = slabs.edges[0];
    let x_max = *slabs.edges.last().unwrap();
    if !(x_min..=x_max).contains(&x) {
        return Err(Error::InvalidInput(format!(
            "x = {x} lies outside the slab decomposition [{x_min}, {x_max}]"
        )));
    }
    let j = slabs
        .edges
        .partition_point(|&e| e <= x)
        .saturating_sub(1)
        .min(slabs.len() - 1);
    let reference = propagation
        .log_scales
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let i = Complex64::new(0.0, 1.0);
    let k = slabs.wavenumber(j, energy);
    let pair = propagation.pairs[j];
    let weight = (propagation.log_scales[j] - reference).exp();
    Ok((pair.rightward * (i * k * x).exp() + pair.leftward * (-i * k * x).exp()) * weight)
}

/// Transmission and reflection probabilities (T, R) at `energy` for a
/// scattering problem. The chain determinant identity det M = h_L/h_R is
/// used in place of a numerical determinant, and T is assembled in log
/// space so opaque barriers underflow gracefully instead of corrupting R.
pub fn transmission(problem: &Problem, energy: f64, n_slabs: usize) -> Result<(f64, f64)> {
    let Boundary::Scattering { left, right } = *problem.boundary() else {
        return Err(Error::Unsupported(
            "transmission needs scattering boundaries with leads".into(),
        ));
    };
    if energy <= left.potential || energy <= right.potential {
        return Err(Error::Domain(format!(
            "no propagating channel: energy {energy} does not exceed both lead potentials \
             ({} and {})",
            left.potential, right.potential
        )));
    }
    let slabs = build_slabs(problem, n_slabs)?;
    let constants = problem.constants();
    let k_in = lead_wavenumber(constants, left, energy);
    let k_out = lead_wavenumber(constants, right, energy);
    let h_in = k_in / left.mass;
    let h_out = k_out / right.mass;

    let mut m = interface_matrix(
        k_in,
        h_in,
        slabs.wavenumber(0, energy),
        slabs.flux_velocity(0, energy),
        problem.x_min(),
    )?;
    let mut log_scale = 0.0;
    let n = slabs.len();
    for j in 0..n - 1 {
        let step = interface_matrix(
            slabs.wavenumber(j, energy),
            slabs.flux_velocity(j, energy),
            slabs.wavenumber(j + 1, energy),
            slabs.flux_velocity(j + 1, energy),
            slabs.edges[j + 1],
        )?;
        m = step.mul(&m);
        let magnitude = m.max_abs();
        if !magnitude.is_finite() {
            return Err(Error::Convergence(format!(
                "chain matrix overflow at interface x = {}",
                slabs.edges[j + 1]
            )));
        }
        if (j + 1) % RESCALE_INTERVAL == 0 || magnitude > 1e250 {
            if magnitude == 0.0 {
                return Err(Error::Convergence(
                    "chain matrix collapsed to zero".into(),
                ));
            }
            m = m.scale(1.0 / magnitude);
            log_scale += magnitude.ln();
        }
    }
    let step = interface_matrix(
        slabs.wavenumber(n - 1, energy),
        slabs.flux_velocity(n - 1, energy),
        k_out,
        h_out,
        problem.x_max(),
    )?;
    m = step.mul(&m);

    if m.m22.norm() == 0.0 {
        return Err(Error::Convergence(
            "chain matrix has vanishing outgoing component".into(),
        ));
    }
    let reflection = (m.m21 / m.m22).norm_sqr();
    let ln_t = (h_in.re / h_out.re).ln() - 2.0 * (log_scale + m.m22.norm().ln());
    Ok((ln_t.exp(), reflection))
}
