//! The Heisenberg group `ℂⁿ × ℝ`, identified with the boundary of the half-space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cvec::{hermitian, norm_sq};
use crate::error::{Error, Result};

/// Group element `[z, t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergElement {
    pub z: Vec<Complex64>,
    pub t: f64,
}

impl HeisenbergElement {
    pub fn new(z: Vec<Complex64>, t: f64) -> Self {
        HeisenbergElement { z, t }
    }

    pub fn identity(n: usize) -> Self {
        HeisenbergElement {
            z: vec![Complex64::new(0.0, 0.0); n],
            t: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// `[w,s][z,t] = [w+z, s+t − ½ Im(w·z̄)]`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let z = self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect();
        let t = self.t + other.t - 0.5 * hermitian(&self.z, &other.z).im;
        Ok(HeisenbergElement { z, t })
    }

    pub fn inv(&self) -> Self {
        HeisenbergElement {
            z: self.z.iter().map(|z| -z).collect(),
            t: -self.t,
        }
    }

    /// `(|z|⁴/16 + t²)^{1/4}`.
    pub fn homogeneous_norm(&self) -> f64 {
        let r2 = norm_sq(&self.z);
        (r2 * r2 / 16.0 + self.t * self.t).sqrt().sqrt()
    }

    /// `|a b⁻¹|`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.mul(&other.inv())?.homogeneous_norm())
    }

    /// Open ball of radius `r` about `center`.
    pub fn in_ball(center: &Self, r: f64, point: &Self) -> Result<bool> {
        Ok(point.distance(center)? < r)
    }

    /// `(z, t) ↦ (δz, δ²t)`.
    pub fn dilate(&self, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::param("delta", format!("{delta} must be positive")));
        }
        Ok(HeisenbergElement {
            z: self.z.iter().map(|z| z * delta).collect(),
            t: self.t * delta * delta,
        })
    }

    /// Max-component distance used for tolerance checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.z
            .iter()
            .zip(&other.z)
            .map(|(a, b)| (a - b).norm())
            .fold((self.t - other.t).abs(), f64::max)
    }

    /// Magnitude scale `1 + |z|² + |t|` for relative tolerances.
    pub fn magnitude(&self) -> f64 {
        1.0 + norm_sq(&self.z) + self.t.abs()
    }
}
