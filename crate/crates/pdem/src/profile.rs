//! Spatial profiles for the effective mass m*(x) and the potential V(x).

use crate::error::{Error, Result};

/// Step used for numerical derivatives of tabulated profiles, in nm.
const FD_STEP: f64 = 1e-5;

/// A scalar function of position on the problem domain `[x_min, x_max]`.
///
/// `Linear` anchors its two values to the domain endpoints. `Tabulated`
/// interpolates linearly and clamps outside its table.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(f64),
    Linear {
        value_at_left: f64,
        value_at_right: f64,
    },
    /// `values[i]` holds on `[breakpoints[i-1], breakpoints[i])`;
    /// `values.len() == breakpoints.len() + 1`.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    Tabulated {
        x: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Profile {
    /// Value at `x` on the domain `(x_min, x_max)`.
    pub fn eval(&self, span: (f64, f64), x: f64) -> f64 {
        match self {
            Profile::Constant(v) => *v,
            Profile::Linear {
                value_at_left,
                value_at_right,
            } => {
                let (x_min, x_max) = span;
                let t = (x - x_min) / (x_max - x_min);
                value_at_left + t * (value_at_right - value_at_left)
            }
            Profile::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                let idx = breakpoints.partition_point(|&b| b <= x);
                values[idx]
            }
            Profile::Tabulated { x: xs, values } => {
                if x <= xs[0] {
                    return values[0];
                }
                if x >= xs[xs.len() - 1] {
                    return values[values.len() - 1];
                }
                let i = xs.partition_point(|&t| t <= x) - 1;
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                values[i] + t * (values[i + 1] - values[i])
            }
        }
    }

    /// d(profile)/dx at `x`. Analytic for every kind except `Tabulated`,
    /// which uses a symmetric difference on the interpolant.
    pub fn derivative(&self, span: (f64, f64), x: f64) -> f64 {
        match self {
            Profile::Constant(_) | Profile::PiecewiseConstant { .. } => 0.0,
            Profile::Linear {
                value_at_left,
                value_at_right,
            } => (value_at_right - value_at_left) / (span.1 - span.0),
            Profile::Tabulated { .. } => {
                (self.eval(span, x + FD_STEP) - self.eval(span, x - FD_STEP)) / (2.0 * FD_STEP)
            }
        }
    }

    /// d²(profile)/dx² at `x`; zero for every kind except `Tabulated`.
    pub fn second_derivative(&self, span: (f64, f64), x: f64) -> f64 {
        match self {
            Profile::Tabulated { .. } => {
                (self.derivative(span, x + FD_STEP) - self.derivative(span, x - FD_STEP))
                    / (2.0 * FD_STEP)
            }
            _ => 0.0,
        }
    }

    /// Structural checks: monotone grids, matching lengths, finite values,
    /// and positivity everywhere when `must_be_positive` (mass profiles).
    pub fn validate(&self, name: &str, must_be_positive: bool) -> Result<()> {
        let check_positive = |vals: &[f64]| -> Result<()> {
            for &v in vals {
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!("{name}: non-finite value {v}")));
                }
                if must_be_positive && v <= 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "{name}: non-positive mass value {v}"
                    )));
                }
            }
            Ok(())
        };
        match self {
            Profile::Constant(v) => check_positive(&[*v]),
            Profile::Linear {
                value_at_left,
                value_at_right,
            } => check_positive(&[*value_at_left, *value_at_right]),
            Profile::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                if values.len() != breakpoints.len() + 1 {
                    return Err(Error::InvalidInput(format!(
                        "{name}: piecewise profile needs breakpoints.len()+1 values, got {} breakpoints and {} values",
                        breakpoints.len(),
                        values.len()
                    )));
                }
                if !strictly_increasing(breakpoints) {
                    return Err(Error::InvalidInput(format!(
                        "{name}: breakpoints must be strictly increasing"
                    )));
                }
                check_positive(values)
            }
            Profile::Tabulated { x, values } => {
                if x.len() != values.len() || x.len() < 2 {
                    return Err(Error::InvalidInput(format!(
                        "{name}: table needs matching x/values of length >= 2, got {} and {}",
                        x.len(),
                        values.len()
                    )));
                }
                if !strictly_increasing(x) {
                    return Err(Error::InvalidInput(format!(
                        "{name}: table abscissae must be strictly increasing"
                    )));
                }
                check_positive(values)
            }
        }
    }
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}
