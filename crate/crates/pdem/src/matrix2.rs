//! Complex 2×2 matrices and the amplitude pairs they act on.

use num_complex::Complex64;

/// Row-major complex 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

/// Rightward/leftward plane-wave amplitudes (t, r) of
/// ψ(x) = t·e^{ikx} + r·e^{−ikx} within one region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub rightward: Complex64,
    pub leftward: Complex64,
}

impl AmplitudePair {
    pub fn new(rightward: Complex64, leftward: Complex64) -> Self {
        Self {
            rightward,
            leftward,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.rightward.norm().max(self.leftward.norm())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rightward: self.rightward * factor,
            leftward: self.leftward * factor,
        }
    }
}

impl Matrix2 {
    pub fn identity() -> Self {
        Self {
            m11: Complex64::new(1.0, 0.0),
            m12: Complex64::default(),
            m21: Complex64::default(),
            m22: Complex64::new(1.0, 0.0),
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn apply(&self, v: AmplitudePair) -> AmplitudePair {
        AmplitudePair {
            rightward: self.m11 * v.rightward + self.m12 * v.leftward,
            leftward: self.m21 * v.rightward + self.m22 * v.leftward,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.m11
            .norm()
            .max(self.m12.norm())
            .max(self.m21.norm())
            .max(self.m22.norm())
    }

    pub fn scale(&self, factor: f64) -> Matrix2 {
        Matrix2 {
            m11: self.m11 * factor,
            m12: self.m12 * factor,
            m21: self.m21 * factor,
            m22: self.m22 * factor,
        }
    }

    pub fn sub(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            m11: self.m11 - rhs.m11,
            m12: self.m12 - rhs.m12,
            m21: self.m21 - rhs.m21,
            m22: self.m22 - rhs.m22,
        }
    }
}
