use crate::contour::ContourDomain;
use crate::linalg::{LuFactors, C64};

use super::Problem;

/// Settings of the grid-seeded Newton root search on `det T(., p)`.
#[derive(Debug, Clone, Copy)]
pub struct RootSearch {
    /// Seeds per axis over the bounding box of the search domain.
    pub grid: usize,
    pub max_steps: usize,
    /// Relative step size accepted as converged.
    pub step_tol: f64,
    /// Roots closer than this are merged.
    pub merge_tol: f64,
}

impl Default for RootSearch {
    fn default() -> Self {
        Self { grid: 60, max_steps: 50, step_tol: 1e-13, merge_tol: 1e-9 }
    }
}

/// Zeros of `det T(., p)` inside `search`, sorted by (re, im).
///
/// Newton's method on the determinant uses the correction
/// `det T / (det T)' = 1 / tr(T^{-1} T')`.
pub fn newton_det_roots<P: Problem + ?Sized>(
    problem: &P,
    p: C64,
    search: &ContourDomain,
    opts: RootSearch,
) -> Vec<C64> {
    grid_newton(search, &opts, |z| {
        let t = problem.eval(z, p).ok()?;
        let lu = match LuFactors::new(t.view()) {
            Ok(lu) => lu,
            // singular to working precision: z is a root
            Err(_) => return Some(C64::new(0.0, 0.0)),
        };
        let dt = problem.eval_derivative(z, p).ok()?;
        let trace: C64 = lu.solve(dt.view()).diag().iter().sum();
        if !trace.is_finite() || trace.norm() == 0.0 {
            return None;
        }
        Some(trace.inv())
    })
}

/// Zeros of a scalar function inside `search` by grid-seeded Newton.
pub fn newton_scalar_roots(
    f: impl Fn(C64) -> C64,
    df: impl Fn(C64) -> C64,
    search: &ContourDomain,
    opts: RootSearch,
) -> Vec<C64> {
    grid_newton(search, &opts, |z| {
        let (v, d) = (f(z), df(z));
        if v == C64::new(0.0, 0.0) {
            return Some(v);
        }
        let step = v / d;
        step.is_finite().then_some(step)
    })
}

/// `step(z)` returns the Newton correction at `z`, or `None` to abandon the seed.
fn grid_newton(search: &ContourDomain, opts: &RootSearch, step: impl Fn(C64) -> Option<C64>) -> Vec<C64> {
    let (x0, x1, y0, y1) = search.bounding_box();
    let g = opts.grid.max(2);
    let mut roots: Vec<C64> = Vec::new();
    for a in 0..g {
        for b in 0..g {
            let mut z =
                C64::new(x0 + (x1 - x0) * a as f64 / (g - 1) as f64, y0 + (y1 - y0) * b as f64 / (g - 1) as f64);
            let mut converged = false;
            for _ in 0..opts.max_steps {
                let Some(dz) = step(z) else { break };
                z -= dz;
                if !z.is_finite() {
                    break;
                }
                if dz.norm() <= opts.step_tol * z.norm().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged || !search.contains(z) {
                continue;
            }
            if roots.iter().all(|r| (r - z).norm() > opts.merge_tol) {
                roots.push(z);
            }
        }
    }
    roots.sort_by(crate::linalg::eigenvalue_order);
    roots
}
