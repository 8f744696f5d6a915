use ndarray::{Array1, Array2, ArrayView2};

use crate::contour::ContourDomain;
use crate::error::{Error, Result};
use crate::linalg::C64;

use super::{newton_scalar_roots, Problem, RootSearch};

/// Characteristic matrix of `x'(t) = -E x(t) - c x(t - p)`:
/// `T(z, p) = (z + c e^{-p z}) I + E` with diagonal `E`.
#[derive(Debug, Clone)]
pub struct DelayProblem {
    coupling: f64,
    stiffness: Array1<f64>,
}

impl Default for DelayProblem {
    fn default() -> Self {
        Self::new()
    }
}

impl DelayProblem {
    /// The 10x10 benchmark: `c = 0.01`, `E_ii` logarithmically spaced in `[1e-4, 1e10]`.
    pub fn new() -> Self {
        let n = 10;
        let stiffness = (0..n).map(|i| 10f64.powf(-4.0 + 14.0 * i as f64 / (n - 1) as f64)).collect();
        Self { coupling: 0.01, stiffness }
    }

    pub fn with_diagonal(coupling: f64, stiffness: Vec<f64>) -> Self {
        Self { coupling, stiffness: Array1::from(stiffness) }
    }

    pub fn stiffness(&self) -> &Array1<f64> {
        &self.stiffness
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    fn diagonal(&self, z: C64, p: C64) -> Array1<C64> {
        let shift = z + self.coupling * (-p * z).exp();
        self.stiffness.mapv(|e| shift + e)
    }

    fn divide(&self, z: C64, p: C64, b: ArrayView2<'_, C64>) -> Result<Array2<C64>> {
        if b.nrows() != self.dim() {
            return Err(Error::arg(format!(
                "right-hand side has {} rows, problem dimension is {}",
                b.nrows(),
                self.dim()
            )));
        }
        let d = self.diagonal(z, p);
        let scale = d.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        let floor = self.dim() as f64 * f64::EPSILON * scale;
        if !scale.is_finite() || d.iter().any(|v| v.norm() <= floor) {
            return Err(Error::Singular { z, p });
        }
        let mut x = b.to_owned();
        for (mut row, di) in x.rows_mut().into_iter().zip(d.iter()) {
            row.mapv_inplace(|v| v / di);
        }
        Ok(x)
    }
}

impl Problem for DelayProblem {
    fn name(&self) -> &str {
        "delay"
    }

    fn dim(&self) -> usize {
        self.stiffness.len()
    }

    fn eval(&self, z: C64, p: C64) -> Result<Array2<C64>> {
        Ok(Array2::from_diag(&self.diagonal(z, p)))
    }

    fn eval_derivative(&self, z: C64, p: C64) -> Result<Array2<C64>> {
        let d = C64::new(1.0, 0.0) - self.coupling * p * (-p * z).exp();
        Ok(Array2::from_diag_elem(self.dim(), d))
    }

    fn solve_right(&self, z: C64, p: C64, b: ArrayView2<'_, C64>) -> Result<Array2<C64>> {
        self.divide(z, p, b)
    }

    // T is diagonal, hence symmetric.
    fn solve_left(&self, z: C64, p: C64, l: ArrayView2<'_, C64>) -> Result<Array2<C64>> {
        self.divide(z, p, l)
    }

    fn solve_both(
        &self,
        z: C64,
        p: C64,
        l: ArrayView2<'_, C64>,
        r: ArrayView2<'_, C64>,
    ) -> Result<(Array2<C64>, Array2<C64>)> {
        Ok((self.divide(z, p, l)?, self.divide(z, p, r)?))
    }

    /// Roots of each diagonal entry separately; the determinant of a diagonal
    /// spanning fourteen decades is too badly scaled for Newton.
    fn true_eigenvalues(&self, p: C64, search: &ContourDomain) -> Result<Vec<C64>> {
        let c = self.coupling;
        let mut roots: Vec<C64> = Vec::new();
        for &e in self.stiffness.iter() {
            let f = |z: C64| z + c * (-p * z).exp() + e;
            let df = |z: C64| 1.0 - c * p * (-p * z).exp();
            roots.extend(newton_scalar_roots(f, df, search, RootSearch::default()));
        }
        roots.sort_by(crate::linalg::eigenvalue_order);
        Ok(roots)
    }
}
