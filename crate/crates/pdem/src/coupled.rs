//! Coupled-amplitude formulation: the wavefunction is written as
//! ψ(x) = t(x)·e^{ik(x)x} + r(x)·e^{−ik(x)x} with the local wavenumber in
//! the exponents, and the mass-symmetrized equation becomes a first-order
//! system for the amplitude pair,
//!
//! ```text
//! d/dx (t, r) = Γ(x) (t, r),
//! Γ = ⎡ −ixk′ − g     g·e^{−2ikx} ⎤        g = h′/(2h),  h = k/m*.
//!     ⎣  g·e^{+2ikx}   ixk′ − g   ⎦
//! ```
//!
//! The system is exact — no approximation beyond the numerical integrator —
//! and the reconstructed ψ does not depend on where the coordinate origin
//! sits, even though t, r and Γ individually do. Dropping the off-diagonal
//! mixing decouples the pair and reproduces the semiclassical envelope
//! form, and to first order in the slab width the interface matrix of the
//! slab method is I + Γ·Δx, which ties the two discretizations together.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix2::{AmplitudePair, Matrix2};
use crate::numeric::scan_and_bisect;
use crate::problem::{Boundary, Problem};
use crate::semiclassical::phase_integral;
use crate::tmm::interface_matrix;
use crate::wavefunction::{EngineKind, Wavefunction};

/// Points closer than this to a classical turning point are rejected:
/// k → 0 makes k′ and the mixing rate blow up.
const TURNING_POINT_MARGIN: f64 = 1e-12;

/// Coupling matrix Γ(x) at `energy`.
pub fn gamma_matrix(problem: &Problem, energy: f64, x: f64) -> Result<Matrix2> {
    let v = problem.potential_at(x);
    if (energy - v).abs() < TURNING_POINT_MARGIN {
        return Err(Error::Domain(format!(
            "x = {x} is a classical turning point at energy {energy}"
        )));
    }
    let c = problem.constants().hbar2_over_2m0;
    let m = problem.mass_at(x);
    let mp = problem.mass_derivative_at(x);
    let vp = problem.potential_derivative_at(x);
    let k = problem.wavenumber(energy, x);
    let kp = (mp * (energy - v) - m * vp) / (2.0 * c * k);
    let h = k / m;
    let hp = kp / m - k * mp / (m * m);
    let g = hp / (2.0 * h);
    let i = Complex64::new(0.0, 1.0);
    let xkp = i * x * kp;
    let mix = 2.0 * i * k * x;
    Ok(Matrix2 {
        m11: -xkp - g,
        m12: g * (-mix).exp(),
        m21: g * mix.exp(),
        m22: xkp - g,
    })
}

/// ψ at `x` from the amplitude pair and the local wavenumber there.
pub fn psi_from_amplitudes(pair: AmplitudePair, k: Complex64, x: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    pair.rightward * (i * k * x).exp() + pair.leftward * (-i * k * x).exp()
}

/// Amplitude pair at every integration node.
#[derive(Debug, Clone)]
pub struct AmplitudeTrajectory {
    pub xs: Vec<f64>,
    pub pairs: Vec<AmplitudePair>,
    pub energy: f64,
}

impl AmplitudeTrajectory {
    /// ψ sampled on the trajectory nodes.
    pub fn wavefunction(&self, problem: &Problem) -> Result<Wavefunction> {
        let values = self
            .xs
            .iter()
            .zip(&self.pairs)
            .map(|(&x, &pair)| {
                psi_from_amplitudes(pair, problem.wavenumber(self.energy, x), x)
            })
            .collect();
        Wavefunction::new(self.xs.clone(), values, self.energy, EngineKind::Coupled)
    }
}

/// Integrate the amplitude system from `x_start` to `x_end` with `steps`
/// fixed fourth-order Runge–Kutta steps.
pub fn integrate_coupled(
    problem: &Problem,
    energy: f64,
    x_start: f64,
    x_end: f64,
    initial: AmplitudePair,
    steps: usize,
) -> Result<AmplitudeTrajectory> {
    if steps < 16 {
        return Err(Error::InvalidInput(format!(
            "need at least 16 integration steps, got {steps}"
        )));
    }
    if !(x_start < x_end) {
        return Err(Error::InvalidInput(format!(
            "need x_start < x_end, got [{x_start}, {x_end}]"
        )));
    }
    let dx = (x_end - x_start) / steps as f64;
    let mut xs = Vec::with_capacity(steps + 1);
    let mut pairs = Vec::with_capacity(steps + 1);
    let mut pair = initial;
    xs.push(x_start);
    pairs.push(pair);
    for j in 0..steps {
        let x = x_start + j as f64 * dx;
        let k1 = gamma_matrix(problem, energy, x)?.apply(pair);
        let k2 = gamma_matrix(problem, energy, x + 0.5 * dx)?
            .apply(advance(pair, k1, 0.5 * dx));
        let k3 = gamma_matrix(problem, energy, x + 0.5 * dx)?
            .apply(advance(pair, k2, 0.5 * dx));
        let k4 = gamma_matrix(problem, energy, x + dx)?.apply(advance(pair, k3, dx));
        pair = AmplitudePair::new(
            pair.rightward
                + dx / 6.0 * (k1.rightward + 2.0 * k2.rightward + 2.0 * k3.rightward + k4.rightward),
            pair.leftward
                + dx / 6.0 * (k1.leftward + 2.0 * k2.leftward + 2.0 * k3.leftward + k4.leftward),
        );
        if !pair.max_abs().is_finite() {
            return Err(Error::Convergence(format!(
                "amplitude overflow near x = {}",
                x + dx
            )));
        }
        xs.push(if j + 1 == steps { x_end } else { x_start + (j + 1) as f64 * dx });
        pairs.push(pair);
    }
    Ok(AmplitudeTrajectory { xs, pairs, energy })
}

fn advance(pair: AmplitudePair, slope: AmplitudePair, dx: f64) -> AmplitudePair {
    AmplitudePair::new(
        pair.rightward + dx * slope.rightward,
        pair.leftward + dx * slope.leftward,
    )
}

/// Launch amplitudes giving ψ(x_min) = 0 with unit-scale slope, shared with
/// the slab solver.
pub fn hard_wall_launch(problem: &Problem, energy: f64) -> AmplitudePair {
    let i = Complex64::new(0.0, 1.0);
    let k = problem.wavenumber(energy, problem.x_min());
    let x = problem.x_min();
    AmplitudePair::new((-i * k * x).exp(), -(i * k * x).exp())
}

/// Hard-wall shooting residual from integrating the amplitude system.
pub fn boundary_mismatch(problem: &Problem, energy: f64, steps: usize) -> Result<f64> {
    if !matches!(problem.boundary(), Boundary::HardWall) {
        return Err(Error::Unsupported(
            "bound-state search needs hard-wall boundaries".into(),
        ));
    }
    let trajectory = integrate_coupled(
        problem,
        energy,
        problem.x_min(),
        problem.x_max(),
        hard_wall_launch(problem, energy),
        steps,
    )?;
    let x_max = problem.x_max();
    let psi = psi_from_amplitudes(
        *trajectory.pairs.last().unwrap(),
        problem.wavenumber(energy, x_max),
        x_max,
    );
    let i = Complex64::new(0.0, 1.0);
    let k1 = problem.wavenumber(energy, problem.x_min());
    Ok((psi / (2.0 * i * k1)).re)
}

/// Bound states in `[e_lo, e_hi]` as `(index, energy)`, index 1 for the
/// nodeless ground state.
pub fn find_eigenvalues(
    problem: &Problem,
    e_lo: f64,
    e_hi: f64,
    steps: usize,
    scan_points: usize,
    tol: f64,
) -> Result<Vec<(usize, f64)>> {
    let mut f = |e: f64| boundary_mismatch(problem, e, steps);
    let mut roots = scan_and_bisect(&mut f, e_lo, e_hi, scan_points, tol)?;
    roots.dedup_by(|a, b| (*a - *b).abs() < 10.0 * tol);
    let mut levels = Vec::with_capacity(roots.len());
    for &energy in &roots {
        let trajectory = integrate_coupled(
            problem,
            energy,
            problem.x_min(),
            problem.x_max(),
            hard_wall_launch(problem, energy),
            steps,
        )?;
        let wf = trajectory.wavefunction(problem)?.normalized()?;
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

/// Max-entry residual of the slab interface matrix against I + Γ(y)·dx,
/// where the two slabs sample the problem at y ∓ dx/2. Shrinks as O(dx²).
pub fn first_order_consistency(problem: &Problem, energy: f64, y: f64, dx: f64) -> Result<f64> {
    if !(dx > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need a positive slab width, got {dx}"
        )));
    }
    let xl = y - 0.5 * dx;
    let xr = y + 0.5 * dx;
    let t = interface_matrix(
        problem.wavenumber(energy, xl),
        problem.flux_velocity(energy, xl),
        problem.wavenumber(energy, xr),
        problem.flux_velocity(energy, xr),
        y,
    )?;
    let gamma = gamma_matrix(problem, energy, y)?;
    let bridged = Matrix2::identity();
    let residual = t.sub(&Matrix2 {
        m11: bridged.m11 + gamma.m11 * dx,
        m12: bridged.m12 + gamma.m12 * dx,
        m21: bridged.m21 + gamma.m21 * dx,
        m22: bridged.m22 + gamma.m22 * dx,
    });
    Ok(residual.max_abs())
}

/// Solution of the decoupled (mixing-free) system launched with unit value
/// at x_min: the envelope-and-phase form ψ = √(h(x_min)/h(x))·e^{±iθ(x)}
/// with θ(x) = ∫ k dx from the left edge.
pub fn decoupled_closed_form(
    problem: &Problem,
    energy: f64,
    x: f64,
    rightward: bool,
) -> Result<Complex64> {
    let h0 = problem.flux_velocity(energy, problem.x_min());
    let h = problem.flux_velocity(energy, x);
    let theta = phase_integral(problem, energy, problem.x_min(), x)?;
    let i = Complex64::new(0.0, 1.0);
    let phase = if rightward { i * theta } else { -i * theta };
    Ok((h0 / h).sqrt() * phase.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    fn linear_mass_well() -> Problem {
        Problem::hard_wall(
            -5.0,
            5.0,
            Profile::Linear {
                value_at_left: 0.2,
                value_at_right: 0.1,
            },
            Profile::Constant(0.0),
        )
        .unwrap()
    }

    #[test]
    fn trace_matches_the_envelope_rate() {
        let problem = linear_mass_well();
        let energy = 0.3;
        for x in [-4.0, -1.0, 0.5, 3.0] {
            let gamma = gamma_matrix(&problem, energy, x).unwrap();
            let trace = gamma.m11 + gamma.m22;
            let delta = 1e-6;
            let h_plus = problem.flux_velocity(energy, x + delta);
            let h_minus = problem.flux_velocity(energy, x - delta);
            let hp = (h_plus - h_minus) / (2.0 * delta);
            let expected = -hp / problem.flux_velocity(energy, x);
            assert!(
                (trace - expected).norm() < 1e-6 * expected.norm().max(1e-3),
                "x={x}: trace {trace} vs {expected}"
            );
        }
    }

    #[test]
    fn coupling_vanishes_for_a_uniform_problem() {
        let problem = Problem::hard_wall(
            -5.0,
            5.0,
            Profile::Constant(0.15),
            Profile::Constant(0.0),
        )
        .unwrap();
        let gamma = gamma_matrix(&problem, 0.2, 1.3).unwrap();
        assert!(gamma.max_abs() < 1e-15);
        let initial = AmplitudePair::new(Complex64::new(0.8, 0.1), Complex64::new(-0.2, 0.4));
        let trajectory =
            integrate_coupled(&problem, 0.2, -5.0, 5.0, initial, 64).unwrap();
        for pair in &trajectory.pairs {
            assert!((pair.rightward - initial.rightward).norm() < 1e-14);
            assert!((pair.leftward - initial.leftward).norm() < 1e-14);
        }
    }

    #[test]
    fn interface_matrix_bridges_to_identity_plus_gamma() {
        let problem = linear_mass_well();
        let (energy, y) = (0.3, 1.3);
        let coarse = first_order_consistency(&problem, energy, y, 1e-2).unwrap();
        let fine = first_order_consistency(&problem, energy, y, 5e-3).unwrap();
        assert!(coarse < 1e-4, "coarse residual {coarse}");
        let ratio = coarse / fine;
        assert!(
            (3.3..5.0).contains(&ratio),
            "expected quadratic shrinkage, got ratio {ratio}"
        );
    }

    #[test]
    fn integrator_is_fourth_order() {
        let problem = linear_mass_well();
        let energy = 0.3;
        let initial = hard_wall_launch(&problem, energy);
        let endpoint = |steps: usize| {
            let t = integrate_coupled(&problem, energy, -5.0, 5.0, initial, steps).unwrap();
            *t.pairs.last().unwrap()
        };
        let p1 = endpoint(64);
        let p2 = endpoint(128);
        let p3 = endpoint(256);
        let d12 = (p1.rightward - p2.rightward).norm() + (p1.leftward - p2.leftward).norm();
        let d23 = (p2.rightward - p3.rightward).norm() + (p2.leftward - p3.leftward).norm();
        let ratio = d12 / d23;
        assert!(
            (11.0..22.0).contains(&ratio),
            "expected ~16x error drop per halving, got {ratio}"
        );
    }

    #[test]
    fn reconstructed_state_is_origin_independent() {
        let shift = 100.0;
        let original = linear_mass_well();
        let shifted = Problem::hard_wall(
            -5.0 + shift,
            5.0 + shift,
            Profile::Linear {
                value_at_left: 0.2,
                value_at_right: 0.1,
            },
            Profile::Constant(0.0),
        )
        .unwrap();
        let energy = 0.3;
        let launch = |p: &Problem| {
            let i = Complex64::new(0.0, 1.0);
            let k = p.wavenumber(energy, p.x_min());
            AmplitudePair::new((-i * k * p.x_min()).exp(), Complex64::new(0.0, 0.0))
        };
        // the amplitude system's coefficients carry an explicit factor of x,
        // so the shifted copy needs finer steps for the same accuracy
        let t1 = integrate_coupled(&original, energy, -5.0, 5.0, launch(&original), 16384).unwrap();
        let t2 = integrate_coupled(
            &shifted,
            energy,
            -5.0 + shift,
            5.0 + shift,
            launch(&shifted),
            16384,
        )
        .unwrap();
        let w1 = t1.wavefunction(&original).unwrap();
        let w2 = t2.wavefunction(&shifted).unwrap();
        let peak = w1.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in w1.values.iter().zip(&w2.values) {
            assert!(
                (a - b).norm() < 1e-9 * peak,
                "origin shift changed the state: {a} vs {b}"
            );
        }
    }

    #[test]
    fn weak_coupling_reduces_to_the_envelope_form() {
        let problem = Problem::hard_wall(
            -5.0,
            5.0,
            Profile::Linear {
                value_at_left: 0.1,
                value_at_right: 0.101,
            },
            Profile::Constant(0.0),
        )
        .unwrap();
        let energy = 0.3;
        let i = Complex64::new(0.0, 1.0);
        let k0 = problem.wavenumber(energy, -5.0);
        let initial = AmplitudePair::new((-i * k0 * -5.0).exp(), Complex64::new(0.0, 0.0));
        let trajectory = integrate_coupled(&problem, energy, -5.0, 5.0, initial, 512).unwrap();
        let wf = trajectory.wavefunction(&problem).unwrap();
        let mut worst = 0.0_f64;
        for (&x, value) in wf.grid.iter().zip(&wf.values) {
            let reference = decoupled_closed_form(&problem, energy, x, true).unwrap();
            worst = worst.max((value - reference).norm());
        }
        assert!(worst < 1e-3, "drifted {worst} from the envelope form");
        assert!(worst > 1e-8, "mixing should contribute something nonzero");
    }

    #[test]
    fn matches_the_slab_solver_on_a_graded_well() {
        use crate::tmm;
        let problem = linear_mass_well();
        let energy = 0.405501067498994;
        let trajectory = integrate_coupled(
            &problem,
            energy,
            -5.0,
            5.0,
            hard_wall_launch(&problem, energy),
            2048,
        )
        .unwrap();
        let coupled_wf = trajectory.wavefunction(&problem).unwrap().normalized().unwrap();
        let slabs = tmm::build_slabs(&problem, 2000).unwrap();
        let prop = tmm::propagate_hard_wall(&problem, &slabs, energy).unwrap();
        let tmm_values: Vec<Complex64> = coupled_wf
            .grid
            .iter()
            .map(|&x| tmm::evaluate_at(&slabs, &prop, energy, x).unwrap())
            .collect();
        let tmm_wf = Wavefunction::new(
            coupled_wf.grid.clone(),
            tmm_values,
            energy,
            EngineKind::Tmm,
        )
        .unwrap()
        .normalized()
        .unwrap();
        let peak = coupled_wf.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut worst = 0.0_f64;
        for (a, b) in coupled_wf.values.iter().zip(&tmm_wf.values) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst < 1e-3 * peak, "formulations disagree by {worst}");
    }

    #[test]
    fn graded_well_levels_match_independent_references() {
        let expected = [0.0258083224406039, 0.101789084629835];
        let levels =
            find_eigenvalues(&linear_mass_well(), 0.005, 0.15, 1024, 150, 1e-10).unwrap();
        assert_eq!(levels.len(), 2);
        for (&(n, e), (i, want)) in levels.iter().zip(expected.iter().enumerate()) {
            assert_eq!(n, i + 1);
            let rel = (e - want).abs() / want;
            assert!(rel < 1e-6, "n={n}: {e} vs {want} (rel {rel})");
        }
    }

    #[test]
    fn rejects_turning_points_and_bad_arguments() {
        let stepped = Problem::hard_wall(
            -5.0,
            5.0,
            Profile::Constant(0.1),
            Profile::Constant(0.25),
        )
        .unwrap();
        assert!(matches!(
            gamma_matrix(&stepped, 0.25, 0.0),
            Err(Error::Domain(_))
        ));
        let well = linear_mass_well();
        let initial = hard_wall_launch(&well, 0.3);
        assert!(integrate_coupled(&well, 0.3, 2.0, -2.0, initial, 64).is_err());
        assert!(integrate_coupled(&well, 0.3, -2.0, 2.0, initial, 8).is_err());
    }
}
