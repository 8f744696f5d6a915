use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::C64;
use crate::problems::Problem;

use super::{online, residuals, EigenSolution, OfflineModel};

/// Online solution at one parameter of a sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub p: f64,
    pub solution: EigenSolution,
    /// Largest eigenpair residual; `None` without a problem to evaluate,
    /// NaN when `T` could not be evaluated at some eigenvalue.
    pub max_residual: Option<f64>,
}

/// `n` uniformly spaced points from `a` to `b` inclusive; `[a]` for `n == 1`.
pub fn uniform_parameters(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Online phase at every parameter, in parallel, returned in input order.
pub fn sweep(
    model: &OfflineModel,
    problem: Option<&dyn Problem>,
    params: &[f64],
    rank_tol: Option<f64>,
) -> Result<Vec<SweepPoint>> {
    params
        .par_iter()
        .map(|&p| {
            let solution = online(model, C64::new(p, 0.0), rank_tol)?;
            let max_residual = problem.map(|prob| match residuals(prob, &solution) {
                Ok(r) => r.into_iter().fold(0.0, f64::max),
                Err(_) => f64::NAN,
            });
            Ok(SweepPoint { p, solution, max_residual })
        })
        .collect()
}

/// Real part of the rightmost eigenvalue, `-inf` for an empty spectrum.
pub fn spectral_abscissa(eigenvalues: &[C64]) -> f64 {
    eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Smallest distance between two eigenvalues, `inf` for fewer than two.
pub fn min_pairwise_gap(eigenvalues: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in eigenvalues.iter().enumerate() {
        for b in &eigenvalues[..i] {
            gap = gap.min((a - b).norm());
        }
    }
    gap
}
