//! Parametric matrix-valued functions `T(z, p)` and the benchmark problems.
//!
//! Everything downstream only needs evaluations and linear solves with
//! `T(z, p)` and its transpose. The default solves factor `eval` densely; a
//! problem with exploitable structure can override them.

mod damped_string;
mod delay;
mod linear_demo;
mod roots;
mod synthetic;

use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, ArrayView2};

use crate::contour::ContourDomain;
use crate::error::{Error, Result};
use crate::linalg::{LuFactors, C64};

pub use damped_string::{BranchSign, DampedStringProblem};
pub use delay::DelayProblem;
pub use linear_demo::LinearDemoProblem;
pub use roots::{newton_det_roots, newton_scalar_roots, RootSearch};
pub use synthetic::{AffineEigenvalue, SyntheticRationalProblem};

/// Names accepted by [`problem_by_name`].
pub const PROBLEM_NAMES: [&str; 4] = ["linear-demo", "delay", "damped-string", "synthetic"];

/// A parametric nonlinear eigenvalue problem `T(lambda(p), p) v(p) = 0`.
///
/// Implementations must be immutable after construction; all methods take
/// `&self` and may be called from several threads at once.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    /// Matrix dimension `n`.
    fn dim(&self) -> usize;

    fn eval(&self, z: C64, p: C64) -> Result<Array2<C64>>;

    /// Free-text note about branch cuts or other analyticity restrictions.
    fn analytic_note(&self) -> Option<&str> {
        None
    }

    /// `dT/dz`; the default is a central difference.
    fn eval_derivative(&self, z: C64, p: C64) -> Result<Array2<C64>> {
        let h = 1e-6 * z.norm().max(1.0);
        let fwd = self.eval(z + h, p)?;
        let bwd = self.eval(z - h, p)?;
        Ok((fwd - bwd) / C64::new(2.0 * h, 0.0))
    }

    fn factorize(&self, z: C64, p: C64) -> Result<LuFactors> {
        let t = self.eval(z, p)?;
        LuFactors::new(t.view()).map_err(|_| Error::Singular { z, p })
    }

    /// Solves `T(z, p) X = B`.
    fn solve_right(&self, z: C64, p: C64, b: ArrayView2<'_, C64>) -> Result<Array2<C64>> {
        check_rows(self.dim(), b)?;
        Ok(self.factorize(z, p)?.solve(b))
    }

    /// Solves `T(z, p)^T X = L`.
    fn solve_left(&self, z: C64, p: C64, l: ArrayView2<'_, C64>) -> Result<Array2<C64>> {
        check_rows(self.dim(), l)?;
        Ok(self.factorize(z, p)?.solve_transpose(l))
    }

    /// Left and right solves sharing one factorization: `(T^{-T} L, T^{-1} R)`.
    fn solve_both(
        &self,
        z: C64,
        p: C64,
        l: ArrayView2<'_, C64>,
        r: ArrayView2<'_, C64>,
    ) -> Result<(Array2<C64>, Array2<C64>)> {
        check_rows(self.dim(), l)?;
        check_rows(self.dim(), r)?;
        let lu = self.factorize(z, p)?;
        Ok((lu.solve_transpose(l), lu.solve(r)))
    }

    /// Reference eigenvalues at parameter `p`, for benchmarks with known
    /// characteristic equations. Problems found by root search only report
    /// roots inside `search`.
    fn true_eigenvalues(&self, p: C64, search: &ContourDomain) -> Result<Vec<C64>> {
        let _ = (p, search);
        Err(Error::Unsupported(format!("problem '{}' has no reference eigenvalues", self.name())))
    }
}

fn check_rows(n: usize, b: ArrayView2<'_, C64>) -> Result<()> {
    if b.nrows() != n {
        return Err(Error::arg(format!("right-hand side has {} rows, problem dimension is {n}", b.nrows())));
    }
    Ok(())
}

type EvalFn = dyn Fn(C64, C64) -> Array2<C64> + Send + Sync;

/// A problem given by a closure; solves use the default dense LU.
#[derive(Clone)]
pub struct FnProblem {
    name: String,
    dim: usize,
    eval: Arc<EvalFn>,
}

impl FnProblem {
    pub fn new<F>(name: impl Into<String>, dim: usize, eval: F) -> Self
    where
        F: Fn(C64, C64) -> Array2<C64> + Send + Sync + 'static,
    {
        Self { name: name.into(), dim, eval: Arc::new(eval) }
    }
}

impl fmt::Debug for FnProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnProblem").field("name", &self.name).field("dim", &self.dim).finish()
    }
}

impl Problem for FnProblem {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: C64, p: C64) -> Result<Array2<C64>> {
        let t = (self.eval)(z, p);
        if t.dim() != (self.dim, self.dim) {
            return Err(Error::arg(format!(
                "eval returned a {:?} matrix, expected {}x{}",
                t.dim(),
                self.dim,
                self.dim
            )));
        }
        Ok(t)
    }
}

/// Builds one of the built-in problems by its benchmark name.
pub fn problem_by_name(name: &str) -> Result<Box<dyn Problem>> {
    match name {
        "linear-demo" => Ok(Box::new(LinearDemoProblem::new())),
        "delay" => Ok(Box::new(DelayProblem::new())),
        "damped-string" => Ok(Box::new(DampedStringProblem::new())),
        "synthetic" => Ok(Box::new(SyntheticRationalProblem::demo())),
        other => Err(Error::arg(format!("unknown problem '{other}' (expected one of {})", PROBLEM_NAMES.join(", ")))),
    }
}
