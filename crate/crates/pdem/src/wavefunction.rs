//! Sampled wavefunctions and their normalization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::trapezoid;

/// Which solution strategy produced a wavefunction or spectrum row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineKind {
    Tmm,
    Coupled,
    Wkb,
    Exact,
}

impl EngineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Tmm => "tmm",
            EngineKind::Coupled => "coupled",
            EngineKind::Wkb => "wkb",
            EngineKind::Exact => "exact",
        }
    }
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// ψ sampled on a strictly increasing grid.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Energy the state was computed at, in eV.
    pub energy: f64,
    pub engine: EngineKind,
}

impl Wavefunction {
    pub fn new(
        grid: Vec<f64>,
        values: Vec<Complex64>,
        energy: f64,
        engine: EngineKind,
    ) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "wavefunction needs matching grid/values of length >= 2, got {} and {}",
                grid.len(),
                values.len()
            )));
        }
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(
                "wavefunction grid must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            grid,
            values,
            energy,
            engine,
        })
    }

    /// √∫|ψ|² dx by the trapezoid rule on the sample grid.
    pub fn norm(&self) -> f64 {
        let density: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        trapezoid(&self.grid, &density).sqrt()
    }

    /// Rescaled so ∫|ψ|² dx = 1, with the global phase rotated so the
    /// largest-magnitude sample is real and positive. Idempotent; errors on
    /// an (numerically) identically-zero input.
    pub fn normalized(&self) -> Result<Wavefunction> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain(format!(
                "cannot normalize: ||psi|| = {n} on this grid"
            )));
        }
        let peak = self
            .values
            .iter()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .copied()
            .unwrap_or_default();
        let phase = if peak.norm() > 0.0 {
            peak / peak.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let factor = phase.conj() / n;
        let values = self.values.iter().map(|v| v * factor).collect();
        Ok(Wavefunction {
            grid: self.grid.clone(),
            values,
            energy: self.energy,
            engine: self.engine,
        })
    }

    /// Count of interior sign changes of Re ψ, ignoring samples within
    /// 1e-6 of the peak magnitude so that near-zero endpoint noise and the
    /// nodes themselves don't double-count.
    pub fn node_count(&self) -> usize {
        let peak = self
            .values
            .iter()
            .map(|v| v.re.abs())
            .fold(0.0_f64, f64::max);
        if peak == 0.0 {
            return 0;
        }
        let threshold = 1e-6 * peak;
        let mut nodes = 0;
        let mut prev: Option<f64> = None;
        for v in &self.values {
            if v.re.abs() < threshold {
                continue;
            }
            if let Some(p) = prev {
                if p * v.re < 0.0 {
                    nodes += 1;
                }
            }
            prev = Some(v.re);
        }
        nodes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linspace;

    fn sine_state(n: usize, samples: usize) -> Wavefunction {
        let grid = linspace(0.0, 10.0, samples);
        let values = grid
            .iter()
            .map(|&x| Complex64::new((n as f64 * std::f64::consts::PI * x / 10.0).sin(), 0.0))
            .collect();
        Wavefunction::new(grid, values, 1.0, EngineKind::Exact).unwrap()
    }

    #[test]
    fn normalizing_a_scaled_constant_divides_it_out() {
        let grid = linspace(0.0, 2.0, 101);
        let values = vec![Complex64::new(3.0, 0.0); 101];
        let wf = Wavefunction::new(grid, values, 0.0, EngineKind::Tmm).unwrap();
        let n = wf.normalized().unwrap();
        // unit L2 norm over a length-2 interval: |psi| = 1/sqrt(2)
        for v in &n.values {
            assert!((v.re - 1.0 / 2.0_f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn normalized_sine_has_sqrt_two_over_l_amplitude() {
        let wf = sine_state(3, 1001).normalized().unwrap();
        let peak = wf.values.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
        assert!(((peak - (2.0_f64 / 10.0).sqrt()) / (2.0_f64 / 10.0).sqrt()).abs() < 1e-5);
    }

    #[test]
    fn normalization_is_idempotent() {
        let wf = sine_state(2, 501).normalized().unwrap();
        let again = wf.normalized().unwrap();
        for (a, b) in wf.values.iter().zip(&again.values) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn phase_fix_makes_peak_real_positive() {
        let grid = linspace(0.0, 1.0, 11);
        let rot = Complex64::from_polar(1.0, 1.1);
        let values = grid
            .iter()
            .map(|&x| rot * Complex64::new((std::f64::consts::PI * x).sin(), 0.0))
            .collect();
        let wf = Wavefunction::new(grid, values, 0.0, EngineKind::Coupled).unwrap();
        let n = wf.normalized().unwrap();
        let peak = n
            .values
            .iter()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .unwrap();
        assert!(peak.im.abs() < 1e-12);
        assert!(peak.re > 0.0);
    }

    #[test]
    fn zero_input_cannot_be_normalized() {
        let grid = linspace(0.0, 1.0, 5);
        let values = vec![Complex64::default(); 5];
        let wf = Wavefunction::new(grid, values, 0.0, EngineKind::Wkb).unwrap();
        assert!(wf.normalized().is_err());
    }

    #[test]
    fn node_count_matches_quantum_number() {
        for n in 1..=6 {
            assert_eq!(sine_state(n, 2001).node_count(), n - 1);
        }
    }

    #[test]
    fn rejects_non_increasing_grids() {
        let values = vec![Complex64::default(); 3];
        assert!(Wavefunction::new(vec![0.0, 0.0, 1.0], values, 0.0, EngineKind::Tmm).is_err());
    }
}
