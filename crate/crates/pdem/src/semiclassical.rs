//! Semiclassical (phase-integral) approximations: hard-wall quantization,
//! envelope wavefunctions √(m*/k)·e^{±iθ}, tunneling factors, and matched
//! evanescent tails around a classically allowed well. The phase
//! θ(x) = ∫ k dx is always computed by adaptive quadrature so any profile
//! shape is handled; closed forms for special profiles live next to the
//! tests that exercise them.

use num_complex::Complex64;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, bisect, linspace, scan_and_bisect, secant_polish};
use crate::problem::{Boundary, Problem};
use crate::wavefunction::{EngineKind, Wavefunction};

const PHASE_TOL: f64 = 1e-13;
const PHASE_DEPTH: u32 = 48;

/// θ = ∫ k(x) dx over `[x_from, x_to]`; the whole range must be classically
/// allowed.
pub fn phase_integral(problem: &Problem, energy: f64, x_from: f64, x_to: f64) -> Result<f64> {
    if !(x_from <= x_to) {
        return Err(Error::InvalidInput(format!(
            "phase integral needs x_from <= x_to, got [{x_from}, {x_to}]"
        )));
    }
    if x_from == x_to {
        return Ok(0.0);
    }
    let c = problem.constants().hbar2_over_2m0;
    let mut integrand = |x: f64| {
        let q = problem.mass_at(x) * (energy - problem.potential_at(x));
        if q < 0.0 {
            return Err(Error::Domain(format!(
                "classically forbidden point x = {x} at energy {energy}"
            )));
        }
        Ok((q / c).sqrt())
    };
    adaptive_simpson(&mut integrand, x_from, x_to, PHASE_TOL, PHASE_DEPTH)
}

/// Closed-form level n of a hard-wall well on [−a, a] with mass running
/// linearly between m1 and m2 and a flat potential:
///
/// ```text
/// E_n = 9 n² π² c (m1 − m2)² / (16 a² (m1^{3/2} − m2^{3/2})²),
/// ```
///
/// reducing to the uniform-well n²π²c/(4a²m) as the masses merge.
pub fn linear_well_energy(
    constants: PhysicalConstants,
    m1: f64,
    m2: f64,
    half_width: f64,
    n: usize,
) -> Result<f64> {
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
    if n == 0 {
        return Err(Error::InvalidInput("levels are indexed from n = 1".into()));
    }
    let c = constants.hbar2_over_2m0;
    let nf = n as f64;
    let base = nf * nf * std::f64::consts::PI.powi(2) * c;
    if (m1 - m2).abs() < 1e-9 * m1.max(m2) {
        let m = 0.5 * (m1 + m2);
        return Ok(base / (4.0 * half_width * half_width * m));
    }
    let dm = m1 - m2;
    let ds = m1.powf(1.5) - m2.powf(1.5);
    Ok(9.0 * base * dm * dm / (16.0 * half_width * half_width * ds * ds))
}

/// Energy of level `n` from the quantization rule θ(E) = nπ, located by
/// bisection inside `[e_lo, e_hi]` and polished to machine level.
pub fn hard_wall_quantize(problem: &Problem, n: usize, e_lo: f64, e_hi: f64) -> Result<f64> {
    if !matches!(problem.boundary(), Boundary::HardWall) {
        return Err(Error::Unsupported(
            "quantization needs hard-wall boundaries".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidInput("levels are indexed from n = 1".into()));
    }
    let target = n as f64 * std::f64::consts::PI;
    let mut f =
        |e: f64| Ok(phase_integral(problem, e, problem.x_min(), problem.x_max())? - target);
    let lo = f(e_lo)?;
    let hi = f(e_hi)?;
    if lo * hi > 0.0 {
        return Err(Error::Convergence(format!(
            "level {n} is not bracketed by [{e_lo}, {e_hi}]: residuals {lo} and {hi}"
        )));
    }
    let root = bisect(&mut f, (e_lo, e_hi), 1e-10, 200)?;
    Ok(secant_polish(&mut f, root, 1e-10, 6))
}

/// Envelope-and-phase wavefunction √(m*/k)·(c1·e^{iθ} + c2·e^{−iθ}) sampled
/// on a uniform grid; θ accumulates from the left domain edge.
pub fn wkb_wavefunction(
    problem: &Problem,
    energy: f64,
    c1: Complex64,
    c2: Complex64,
    grid_points: usize,
) -> Result<Wavefunction> {
    if grid_points < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 grid points, got {grid_points}"
        )));
    }
    let grid = linspace(problem.x_min(), problem.x_max(), grid_points);
    let i = Complex64::new(0.0, 1.0);
    let mut theta = 0.0;
    let mut values = Vec::with_capacity(grid_points);
    for (j, &x) in grid.iter().enumerate() {
        if j > 0 {
            theta += phase_integral(problem, energy, grid[j - 1], x)?;
        }
        let k = problem.wavenumber(energy, x).re;
        if !(k > 0.0) {
            return Err(Error::Domain(format!(
                "envelope form breaks down at the turning point x = {x}"
            )));
        }
        let envelope = (problem.mass_at(x) / k).sqrt();
        values.push(envelope * (c1 * (i * theta).exp() + c2 * (-i * theta).exp()));
    }
    Wavefunction::new(grid, values, energy, EngineKind::Wkb)
}

/// Standing-wave form √(m*/k)·sin θ used for hard-wall bound states.
pub fn wkb_standing_wave(
    problem: &Problem,
    energy: f64,
    grid_points: usize,
) -> Result<Wavefunction> {
    let half_i = Complex64::new(0.0, 0.5);
    wkb_wavefunction(problem, energy, -half_i, half_i, grid_points)
}

/// Tunneling probability exp(−2∫κ dx) through the single barrier the
/// potential presents at `energy`; 1.0 when no point is forbidden.
pub fn wkb_transmission(problem: &Problem, energy: f64) -> Result<f64> {
    const SCAN: usize = 2048;
    let grid = linspace(problem.x_min(), problem.x_max(), SCAN);
    let forbidden: Vec<bool> = grid
        .iter()
        .map(|&x| problem.potential_at(x) > energy)
        .collect();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = None;
    for (j, &f) in forbidden.iter().enumerate() {
        match (f, start) {
            (true, None) => start = Some(j),
            (false, Some(s)) => {
                runs.push((s, j - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, SCAN - 1));
    }
    if runs.is_empty() {
        return Ok(1.0);
    }
    if runs.len() > 1 {
        return Err(Error::Unsupported(format!(
            "potential presents {} separate barriers at energy {energy}",
            runs.len()
        )));
    }
    let (s, e) = runs[0];
    if s == 0 || e == SCAN - 1 {
        return Err(Error::Unsupported(
            "barrier touches the domain edge; turning points must be interior".into(),
        ));
    }
    let mut edge = |x: f64| Ok(problem.potential_at(x) - energy);
    let x1 = bisect(&mut edge, (grid[s - 1], grid[s]), 1e-10, 200)?;
    let x2 = bisect(&mut edge, (grid[e], grid[e + 1]), 1e-10, 200)?;
    let c = problem.constants().hbar2_over_2m0;
    let mut integrand = |x: f64| {
        let q = problem.mass_at(x) * (problem.potential_at(x) - energy);
        Ok(if q > 0.0 { (q / c).sqrt() } else { 0.0 })
    };
    let action = adaptive_simpson(&mut integrand, x1, x2, 1e-12, PHASE_DEPTH)?;
    Ok((-2.0 * action).exp())
}

/// d(ln envelope)/dx for √(m*/k) (allowed) or √(m*/κ) (forbidden).
fn envelope_log_slope(problem: &Problem, energy: f64, x: f64, allowed: bool) -> f64 {
    let m = problem.mass_at(x);
    let mp = problem.mass_derivative_at(x);
    let v = problem.potential_at(x);
    let vp = problem.potential_derivative_at(x);
    if allowed {
        0.25 * (mp / m + vp / (energy - v))
    } else {
        0.25 * (mp / m - vp / (v - energy))
    }
}

/// Matching residual for a bound state of a well that is classically
/// allowed on `[a1, a2]` and forbidden just outside: the envelope forms on
/// the three pieces are joined by continuity of ψ and ψ′/m*, and the
/// returned scalar changes sign at each bound energy.
pub fn well_matching_mismatch(problem: &Problem, a1: f64, a2: f64, energy: f64) -> Result<f64> {
    let span = problem.x_max() - problem.x_min();
    let eps = 1e-9 * span;
    if !(problem.x_min() + eps < a1 && a1 + eps < a2 - eps && a2 + eps < problem.x_max()) {
        return Err(Error::InvalidInput(format!(
            "well edges [{a1}, {a2}] must be interior to the domain"
        )));
    }
    let c = problem.constants().hbar2_over_2m0;
    let forbidden_kappa = |x: f64| -> Result<f64> {
        let q = problem.mass_at(x) * (problem.potential_at(x) - energy);
        if q <= 0.0 {
            return Err(Error::Domain(format!(
                "expected a forbidden region at x = {x} for energy {energy}"
            )));
        }
        Ok((q / c).sqrt())
    };
    let allowed_k = |x: f64| -> Result<f64> {
        let q = problem.mass_at(x) * (energy - problem.potential_at(x));
        if q <= 0.0 {
            return Err(Error::Domain(format!(
                "expected an allowed region at x = {x} for energy {energy}"
            )));
        }
        Ok((q / c).sqrt())
    };

    // left tail ψ ∝ env(x)·exp(−∫_x^{a1} κ): (ψ′/m)/ψ just left of a1
    let xl = a1 - eps;
    let kappa_l = forbidden_kappa(xl)?;
    let slope_left =
        (envelope_log_slope(problem, energy, xl, false) + kappa_l) / problem.mass_at(xl);

    // interior form ψ = env(x)·(α sin θ + β cos θ), θ from a1, scaled to
    // ψ(a1) = 1 with the left tail's flux
    let x1 = a1 + eps;
    let k1 = allowed_k(x1)?;
    let env1 = (problem.mass_at(x1) / k1).sqrt();
    let lam1 = envelope_log_slope(problem, energy, x1, true);
    let beta = 1.0 / env1;
    let alpha = (slope_left * problem.mass_at(x1) - lam1) / (env1 * k1);

    let x2 = a2 - eps;
    let theta = phase_integral(problem, energy, x1, x2)?;
    let k2 = allowed_k(x2)?;
    let env2 = (problem.mass_at(x2) / k2).sqrt();
    let lam2 = envelope_log_slope(problem, energy, x2, true);
    let sv = alpha * theta.sin() + beta * theta.cos();
    let sd = alpha * theta.cos() - beta * theta.sin();
    let value = env2 * sv;
    let flux = (lam2 * env2 * sv + env2 * k2 * sd) / problem.mass_at(x2);

    // right tail ψ ∝ env(x)·exp(−∫_{a2}^x κ)
    let xr = a2 + eps;
    let kappa_r = forbidden_kappa(xr)?;
    let slope_right =
        (envelope_log_slope(problem, energy, xr, false) - kappa_r) / problem.mass_at(xr);

    Ok(flux - slope_right * value)
}

/// Bound states of a well on `[a1, a2]` with evanescent tails outside,
/// as `(index, energy)` in ascending order.
pub fn matched_well_bound_states(
    problem: &Problem,
    a1: f64,
    a2: f64,
    e_lo: f64,
    e_hi: f64,
    scan_points: usize,
    tol: f64,
) -> Result<Vec<(usize, f64)>> {
    let mut f = |e: f64| well_matching_mismatch(problem, a1, a2, e);
    let mut roots = scan_and_bisect(&mut f, e_lo, e_hi, scan_points, tol)?;
    roots.dedup_by(|a, b| (*a - *b).abs() < 10.0 * tol);
    Ok(roots
        .into_iter()
        .enumerate()
        .map(|(i, e)| (i + 1, e))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Lead;
    use crate::profile::Profile;

    const C: f64 = 0.0380998;

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
    fn phase_over_a_linear_mass_profile_matches_the_antiderivative() {
        let problem = linear_mass_well();
        let energy = 0.3;
        // ∫√(m(x)E/c) dx = √(E/c) · (2/3)(m_b^{3/2} − m_a^{3/2})/m′
        let slope = (0.1 - 0.2) / 10.0;
        let expect =
            (energy / C).sqrt() * (2.0 / 3.0) * (0.1_f64.powf(1.5) - 0.2_f64.powf(1.5)) / slope;
        let got = phase_integral(&problem, energy, -5.0, 5.0).unwrap();
        assert!(
            (got - expect).abs() < 1e-10 * expect,
            "{got} vs {expect}"
        );
    }

    #[test]
    fn phase_rejects_forbidden_stretches_and_reversed_ranges() {
        let problem = linear_mass_well();
        assert!(phase_integral(&problem, 0.3, 2.0, -2.0).is_err());
        let stepped = Problem::hard_wall(
            -5.0,
            5.0,
            Profile::Constant(0.1),
            Profile::PiecewiseConstant {
                breakpoints: vec![-1.0, 1.0],
                values: vec![0.0, 0.6, 0.0],
            },
        )
        .unwrap();
        assert!(matches!(
            phase_integral(&stepped, 0.3, -5.0, 5.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn quantized_levels_match_the_closed_form_to_nine_digits() {
        let problem = linear_mass_well();
        let constants = problem.constants();
        for n in 1..=10 {
            let closed = linear_well_energy(constants, 0.2, 0.1, 5.0, n).unwrap();
            let quantized =
                hard_wall_quantize(&problem, n, 0.8 * closed, 1.2 * closed).unwrap();
            let rel = (quantized - closed).abs() / closed;
            assert!(rel < 1e-9, "n={n}: {quantized} vs {closed} (rel {rel})");
        }
    }

    #[test]
    fn closed_form_levels_match_published_values() {
        let published = [
            0.0253, 0.1012, 0.2278, 0.4049, 0.6327, 0.9111, 1.2401, 1.6197, 2.0499, 2.5308,
        ];
        let constants = PhysicalConstants::default();
        for (i, &want) in published.iter().enumerate() {
            let e = linear_well_energy(constants, 0.2, 0.1, 5.0, i + 1).unwrap();
            assert!(
                (e - want).abs() < 5e-5,
                "n={}: {e} vs published {want}",
                i + 1
            );
        }
        let e1 = linear_well_energy(constants, 0.2, 0.1, 5.0, 1).unwrap();
        assert!((e1 - 0.02530752349).abs() < 1e-10);
    }

    #[test]
    fn closed_form_merges_into_the_uniform_well_limit() {
        let constants = PhysicalConstants::default();
        for n in 1..=4 {
            let uniform = (n * n) as f64 * std::f64::consts::PI.powi(2) * C / (100.0 * 0.15);
            let merged = linear_well_energy(constants, 0.15, 0.15, 5.0, n).unwrap();
            assert!((merged - uniform).abs() < 1e-12 * uniform);
            let nearly = linear_well_energy(constants, 0.15, 0.15 * (1.0 + 1e-8), 5.0, n).unwrap();
            assert!(
                (nearly - uniform).abs() < 1e-6 * uniform,
                "n={n}: {nearly} vs {uniform}"
            );
        }
    }

    #[test]
    fn standing_wave_is_exact_for_a_uniform_well() {
        let problem = Problem::hard_wall(
            -5.0,
            5.0,
            Profile::Constant(0.15),
            Profile::Constant(0.0),
        )
        .unwrap();
        let energy = 4.0 * std::f64::consts::PI.powi(2) * C / (100.0 * 0.15);
        let wf = wkb_standing_wave(&problem, energy, 401).unwrap();
        let k = (0.15 * energy / C).sqrt();
        let envelope = (0.15 / k).sqrt();
        for (&x, value) in wf.grid.iter().zip(&wf.values) {
            let expect = envelope * (k * (x + 5.0)).sin();
            assert!(
                (value.re - expect).abs() < 1e-9 && value.im.abs() < 1e-12,
                "x={x}: {value} vs {expect}"
            );
        }
    }

    fn rectangular_barrier() -> Problem {
        Problem::new(
            -5.0,
            5.0,
            Profile::Constant(0.067),
            Profile::PiecewiseConstant {
                breakpoints: vec![-1.0, 1.0],
                values: vec![0.0, 0.3, 0.0],
            },
            Boundary::Scattering {
                left: Lead {
                    mass: 0.067,
                    potential: 0.0,
                },
                right: Lead {
                    mass: 0.067,
                    potential: 0.0,
                },
            },
            PhysicalConstants::default(),
        )
        .unwrap()
    }

    #[test]
    fn tunneling_factor_matches_the_rectangular_action() {
        let problem = rectangular_barrier();
        let energy = 0.1;
        let kappa = (0.067 * 0.2 / C).sqrt();
        let expect = (-2.0 * kappa * 2.0).exp();
        let got = wkb_transmission(&problem, energy).unwrap();
        assert!((got - expect).abs() < 1e-6 * expect, "{got} vs {expect}");
        assert_eq!(wkb_transmission(&problem, 0.4).unwrap(), 1.0);
    }

    #[test]
    fn unsupported_barrier_shapes_are_rejected() {
        let double = Problem::hard_wall(
            -5.0,
            5.0,
            Profile::Constant(0.1),
            Profile::PiecewiseConstant {
                breakpoints: vec![-2.0, -1.0, 1.0, 2.0],
                values: vec![0.0, 0.5, 0.0, 0.5, 0.0],
            },
        )
        .unwrap();
        assert!(matches!(
            wkb_transmission(&double, 0.2),
            Err(Error::Unsupported(_))
        ));
        let edge = Problem::hard_wall(
            -5.0,
            5.0,
            Profile::Constant(0.1),
            Profile::PiecewiseConstant {
                breakpoints: vec![0.0],
                values: vec![0.5, 0.0],
            },
        )
        .unwrap();
        assert!(matches!(
            wkb_transmission(&edge, 0.2),
            Err(Error::Unsupported(_))
        ));
    }

    fn finite_well(v_out: f64, m_in: f64, m_out: f64, half_width: f64, margin: f64) -> Problem {
        Problem::hard_wall(
            -half_width - margin,
            half_width + margin,
            Profile::PiecewiseConstant {
                breakpoints: vec![-half_width, half_width],
                values: vec![m_out, m_in, m_out],
            },
            Profile::PiecewiseConstant {
                breakpoints: vec![-half_width, half_width],
                values: vec![v_out, 0.0, v_out],
            },
        )
        .unwrap()
    }

    /// Textbook matching condition for a rectangular finite well with
    /// mass-weighted derivative continuity: k·w = nπ − 2·arctan(m_out·k/(m_in·κ)).
    fn finite_well_oracle(v_out: f64, m_in: f64, m_out: f64, width: f64) -> Vec<f64> {
        let mut levels = Vec::new();
        for n in 1..=32 {
            let mut f = |e: f64| {
                let k = (m_in * e / C).sqrt();
                let kappa = (m_out * (v_out - e) / C).sqrt();
                Ok(k * width - n as f64 * std::f64::consts::PI
                    + 2.0 * (m_out * k / (m_in * kappa)).atan())
            };
            let lo = 1e-12 * v_out;
            let hi = v_out * (1.0 - 1e-12);
            if f(lo).unwrap() * f(hi).unwrap() < 0.0 {
                levels.push(bisect(&mut f, (lo, hi), 1e-13, 200).unwrap());
            }
        }
        levels
    }

    #[test]
    fn matched_well_reproduces_the_textbook_finite_well() {
        let (v_out, m_in, m_out, half) = (0.5, 0.067, 0.1, 4.0);
        let problem = finite_well(v_out, m_in, m_out, half, 8.0);
        let oracle = finite_well_oracle(v_out, m_in, m_out, 2.0 * half);
        assert_eq!(oracle.len(), 3);
        let got = matched_well_bound_states(
            &problem,
            -half,
            half,
            1e-4,
            v_out * (1.0 - 1e-6),
            600,
            1e-11,
        )
        .unwrap();
        assert_eq!(got.len(), oracle.len());
        for ((n, e), want) in got.iter().zip(&oracle) {
            assert!(
                (e - want).abs() < 1e-7,
                "state {n}: {e} vs oracle {want}"
            );
        }
    }

    #[test]
    fn deep_well_levels_approach_the_hard_wall_limit() {
        let (m, half) = (0.067, 4.0);
        let problem = finite_well(5000.0, m, m, half, 2.0);
        let got =
            matched_well_bound_states(&problem, -half, half, 1e-3, 1.0, 600, 1e-11).unwrap();
        assert!(got.len() >= 3);
        for n in 1..=3 {
            let hard_wall =
                (n * n) as f64 * std::f64::consts::PI.powi(2) * C / (m * (2.0 * half).powi(2));
            let (_, e) = got[n - 1];
            let rel = (e - hard_wall).abs() / hard_wall;
            assert!(rel < 0.01, "n={n}: {e} vs hard-wall {hard_wall} (rel {rel})");
            assert!(e < hard_wall, "finite depth must soften the level");
        }
    }

    #[test]
    fn quantization_errors_are_reported() {
        let problem = linear_mass_well();
        assert!(matches!(
            hard_wall_quantize(&problem, 1, 0.2, 0.3),
            Err(Error::Convergence(_))
        ));
        assert!(hard_wall_quantize(&problem, 0, 0.01, 0.05).is_err());
        let constants = PhysicalConstants::default();
        assert!(linear_well_energy(constants, -0.1, 0.2, 5.0, 1).is_err());
        assert!(linear_well_energy(constants, 0.1, 0.2, 0.0, 1).is_err());
        assert!(linear_well_energy(constants, 0.1, 0.2, 5.0, 0).is_err());
    }
}
