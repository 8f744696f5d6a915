use ndarray::{s, Array2, Array4, ArrayView1};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::problems::Problem;

use super::{ContourDomain, QuadratureRule, SamplingConfig};

/// Where a sample set came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub nodes: usize,
    pub domain: ContourDomain,
    pub seed: u64,
}

/// Tangential samples `l_k^T H(s_i, p_j)` and `H(s_i, p_j) r_k`, stored with
/// shape `[k][i][j][n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbedSampleSet {
    config: SamplingConfig,
    left: Array4<C64>,
    right: Array4<C64>,
    provenance: Provenance,
}

impl ProbedSampleSet {
    /// Wraps precomputed samples; shapes must be `(r, 2r, q, n)`.
    pub fn from_parts(
        config: SamplingConfig,
        left: Array4<C64>,
        right: Array4<C64>,
        provenance: Provenance,
    ) -> Result<Self> {
        let shape = (config.r(), 2 * config.r(), config.q(), config.dim());
        if left.dim() != shape || right.dim() != shape {
            return Err(Error::arg(format!(
                "sample tensors must have shape {shape:?}, got {:?} and {:?}",
                left.dim(),
                right.dim()
            )));
        }
        if left.iter().chain(right.iter()).any(|v| !v.is_finite()) {
            return Err(Error::arg("sample tensors contain non-finite entries"));
        }
        Ok(Self { config, left, right, provenance })
    }

    pub fn config(&self) -> &SamplingConfig {
        &self.config
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `l_k^T H(s_i, p_j)`.
    pub fn left(&self, k: usize, i: usize, j: usize) -> ArrayView1<'_, C64> {
        self.left.slice(s![k, i, j, ..])
    }

    /// `H(s_i, p_j) r_k`.
    pub fn right(&self, k: usize, i: usize, j: usize) -> ArrayView1<'_, C64> {
        self.right.slice(s![k, i, j, ..])
    }

    pub fn left_tensor(&self) -> &Array4<C64> {
        &self.left
    }

    pub fn right_tensor(&self) -> &Array4<C64> {
        &self.right
    }
}

/// Approximates the tangential samples of `H` by the quadrature `rule`.
///
/// Each pair (node, parameter) costs one factorization shared by the left
/// and the right multi-RHS solve. Parameters are processed in parallel; the
/// sum over nodes for one parameter is a single fixed-order matrix product,
/// so the result does not depend on the number of workers.
pub fn probe_samples<P: Problem + ?Sized>(
    problem: &P,
    rule: &QuadratureRule,
    config: &SamplingConfig,
) -> Result<ProbedSampleSet> {
    let n = problem.dim();
    if config.dim() != n {
        return Err(Error::arg(format!("directions have length {}, problem dimension is {n}", config.dim())));
    }
    config.check_outside(rule.domain())?;
    let r = config.r();
    let kernel = rule.kernel(config.sample_points());
    let (ldirs, rdirs) = (config.left_dirs().view(), config.right_dirs().view());

    let per_parameter: Vec<(Array2<C64>, Array2<C64>)> = config
        .parameter_points()
        .par_iter()
        .map(|&p| {
            let mut xl = Array2::zeros((rule.len(), r * n));
            let mut xr = Array2::zeros((rule.len(), r * n));
            for (t, &z) in rule.nodes().iter().enumerate() {
                let (a, b) = problem.solve_both(z, p, ldirs, rdirs).map_err(|e| match e {
                    Error::Singular { z, p } => Error::SingularNode { z, p },
                    other => other,
                })?;
                // row t holds direction k in entries k*n .. (k+1)*n
                for k in 0..r {
                    xl.slice_mut(s![t, k * n..(k + 1) * n]).assign(&a.column(k));
                    xr.slice_mut(s![t, k * n..(k + 1) * n]).assign(&b.column(k));
                }
            }
            Ok((kernel.dot(&xl), kernel.dot(&xr)))
        })
        .collect::<Result<_>>()?;

    let q = config.q();
    let mut left = Array4::zeros((r, 2 * r, q, n));
    let mut right = Array4::zeros((r, 2 * r, q, n));
    for (j, (sl, sr)) in per_parameter.iter().enumerate() {
        for k in 0..r {
            left.slice_mut(s![k, .., j, ..]).assign(&sl.slice(s![.., k * n..(k + 1) * n]));
            right.slice_mut(s![k, .., j, ..]).assign(&sr.slice(s![.., k * n..(k + 1) * n]));
        }
    }
    if left.iter().chain(right.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Evaluation("quadrature produced non-finite samples".into()));
    }
    let provenance = Provenance { nodes: rule.len(), domain: *rule.domain(), seed: config.seed() };
    Ok(ProbedSampleSet { config: config.clone(), left, right, provenance })
}
