use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Relative width of the band around the boundary that counts as "on" it.
const BOUNDARY_TOL: f64 = 1e-14;

/// Target region for the eigenvalues: the open interior of a disk or of an
/// axis-aligned ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContourDomain {
    Disk { center: C64, radius: f64 },
    Ellipse { center: C64, semi_real: f64, semi_imag: f64 },
}

impl ContourDomain {
    pub fn disk(center: C64, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) || !center.is_finite() {
            return Err(Error::arg(format!("disk radius must be positive and finite, got {radius}")));
        }
        Ok(ContourDomain::Disk { center, radius })
    }

    pub fn ellipse(center: C64, semi_real: f64, semi_imag: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(semi_real) && ok(semi_imag)) || !center.is_finite() {
            return Err(Error::arg(format!(
                "ellipse semi-axes must be positive and finite, got ({semi_real}, {semi_imag})"
            )));
        }
        Ok(ContourDomain::Ellipse { center, semi_real, semi_imag })
    }

    pub fn center(&self) -> C64 {
        match *self {
            ContourDomain::Disk { center, .. } | ContourDomain::Ellipse { center, .. } => center,
        }
    }

    /// Semi-axes `(real, imaginary)`; equal for a disk.
    pub fn semi_axes(&self) -> (f64, f64) {
        match *self {
            ContourDomain::Disk { radius, .. } => (radius, radius),
            ContourDomain::Ellipse { semi_real, semi_imag, .. } => (semi_real, semi_imag),
        }
    }

    /// Elliptic "radius" of `z`: 1 on the boundary, below 1 inside.
    pub fn level(&self, z: C64) -> f64 {
        let d = z - self.center();
        let (a, b) = self.semi_axes();
        ((d.re / a).powi(2) + (d.im / b).powi(2)).sqrt()
    }

    /// Strict interior test; points within a relative 1e-14 band of the boundary are outside.
    pub fn contains(&self, z: C64) -> bool {
        self.level(z) < 1.0 - BOUNDARY_TOL
    }

    /// True when `z` is outside the closure and at least `margin` away from the boundary.
    ///
    /// For a point on the scaled boundary `level * dOmega` the distance to the
    /// boundary is at least `(level - 1) * min(a, b)`, which is what is checked.
    pub fn is_outside_with_margin(&self, z: C64, margin: f64) -> bool {
        let (a, b) = self.semi_axes();
        (self.level(z) - 1.0) * a.min(b) > margin
    }

    /// Boundary parametrization on `[0, 2 pi)`, counterclockwise.
    pub fn gamma(&self, t: f64) -> C64 {
        let (a, b) = self.semi_axes();
        self.center() + C64::new(a * t.cos(), b * t.sin())
    }

    pub fn gamma_prime(&self, t: f64) -> C64 {
        let (a, b) = self.semi_axes();
        C64::new(-a * t.sin(), b * t.cos())
    }

    /// Same center, semi-axes multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        match *self {
            ContourDomain::Disk { center, radius } => Self::disk(center, radius * factor),
            ContourDomain::Ellipse { center, semi_real, semi_imag } => {
                Self::ellipse(center, semi_real * factor, semi_imag * factor)
            }
        }
    }

    /// `(re_min, re_max, im_min, im_max)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let c = self.center();
        let (a, b) = self.semi_axes();
        (c.re - a, c.re + a, c.im - b, c.im + b)
    }

    /// `count` points uniformly spaced in the boundary parameter, starting at `t = 0`.
    pub fn boundary_points(&self, count: usize) -> Vec<C64> {
        (0..count).map(|k| self.gamma(2.0 * PI * k as f64 / count as f64)).collect()
    }
}
