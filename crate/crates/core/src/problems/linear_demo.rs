use ndarray::{array, Array2};

use crate::contour::ContourDomain;
use crate::error::{Error, Result};
use crate::linalg::C64;

use super::Problem;

/// The 3x3 linear pencil `T(z, p) = z I - A(p)` with
/// `det T = (p - z)(1 - p - z^2)`.
///
/// Its eigenvalues are `p` and `+-sqrt(1 - p)`; the latter pair meets in a
/// 2x2 Jordan block at `p = 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearDemoProblem;

impl LinearDemoProblem {
    pub fn new() -> Self {
        Self
    }

    pub fn lambda1(p: C64) -> C64 {
        p
    }

    /// Principal branch `+sqrt(1 - p)`.
    pub fn lambda2(p: C64) -> C64 {
        (C64::new(1.0, 0.0) - p).sqrt()
    }

    pub fn lambda3(p: C64) -> C64 {
        -Self::lambda2(p)
    }

    /// Closed-form pole part `H(z, p)` of `T^{-1}` for the eigenvalue pair
    /// `+-sqrt(1 - p)`, i.e. for domains holding both of them but not `p`.
    pub fn pole_part(z: C64, p: C64) -> Array2<C64> {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let q = p * p + p - one;
        let scale = (z * z + p - one).inv();
        let m = array![[z, one, zero], [one - p, z, zero], [(p + z) * (p - one) / q, (-p * z + p - one) / q, zero],];
        m * scale
    }
}

impl Problem for LinearDemoProblem {
    fn name(&self) -> &str {
        "linear-demo"
    }

    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, z: C64, p: C64) -> Result<Array2<C64>> {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Ok(array![[z, -one, zero], [p - one, z, zero], [zero, -one, z - p],])
    }

    fn eval_derivative(&self, _z: C64, _p: C64) -> Result<Array2<C64>> {
        Ok(Array2::eye(3))
    }

    fn true_eigenvalues(&self, p: C64, _search: &ContourDomain) -> Result<Vec<C64>> {
        if !p.is_finite() {
            return Err(Error::arg("parameter must be finite"));
        }
        Ok(vec![Self::lambda1(p), Self::lambda2(p), Self::lambda3(p)])
    }
}
