//! Offline sampling and fitting, online eigenvalue extraction, residuals,
//! and model files.

mod persist;
mod sweep;

use ndarray::{s, Array2, Array3};

use crate::contour::{build_trapezoid_rule, probe_samples, ContourDomain, ProbedSampleSet, SamplingConfig};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::loewner::{self, RealizationDiagnostics, TangentialData, DEFAULT_RANK_TOL};
use crate::paaa::{self, consistency_rank_check, lift_vector, BarycentricModel2D, FitOptions, VectorBarycentricModel};
use crate::problems::Problem;

pub(crate) use persist::write_atomic;
pub use persist::{load_model, save_model, FORMAT_VERSION};
pub use sweep::{min_pairwise_gap, spectral_abscissa, sweep, uniform_parameters, SweepPoint};

/// Settings of the offline phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfflineOptions {
    /// Quadrature node count `N`.
    pub nodes: usize,
    pub rank_tol: f64,
    /// `min_z_nodes` is overridden by `m + 1`.
    pub fit: FitOptions,
    /// Also cap the `z` nodes at `m + 1`, so the fit has exactly `m` poles in `z`.
    pub exact_z_degree: bool,
}

impl Default for OfflineOptions {
    fn default() -> Self {
        Self { nodes: 128, rank_tol: DEFAULT_RANK_TOL, fit: FitOptions::default(), exact_z_degree: true }
    }
}

/// Fit summary stored with a model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMetadata {
    pub nodes: usize,
    pub rank_tol: f64,
    pub fit_tol: f64,
    pub converged: bool,
    /// Relative max grid error of the scalar fit.
    pub max_fit_error: f64,
    pub fit_history: Vec<f64>,
    /// Grid indices of the `z` and `p` nodes.
    pub z_node_indices: Vec<usize>,
    pub p_node_indices: Vec<usize>,
}

/// Result of the offline phase; everything the online phase needs.
#[derive(Debug, Clone, PartialEq)]
pub struct OfflineModel {
    pub problem_name: String,
    pub domain: ContourDomain,
    pub sampling: SamplingConfig,
    pub m: usize,
    pub scalar: BarycentricModel2D,
    /// `L_k(z, p) ~ l_k^T H(z, p)`.
    pub left_models: Vec<VectorBarycentricModel>,
    /// `R_k(z, p) ~ H(z, p) r_k`.
    pub right_models: Vec<VectorBarycentricModel>,
    pub metadata: ModelMetadata,
}

impl OfflineModel {
    /// `(degree in z, degree in p)` shared by all models.
    pub fn degrees(&self) -> (usize, usize) {
        self.scalar.degrees()
    }

    /// Real interval spanned by the parameter samples.
    pub fn parameter_range(&self) -> (f64, f64) {
        let pts = self.sampling.parameter_points();
        let lo = pts.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Poles in `z` of the scalar surrogate at `p_hat`; eigenvalues only,
    /// without multiplicities or eigenvectors.
    pub fn scalar_probe(&self, p_hat: C64) -> Result<Vec<C64>> {
        scalar_probe_eigenvalues(&self.scalar, p_hat)
    }
}

/// Eigenvalues inside the domain at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub p_hat: C64,
    /// Sorted ascending by real part, then imaginary part.
    pub eigenvalues: Vec<C64>,
    /// `n x m` right eigenvectors.
    pub v: Array2<C64>,
    /// `n x m` left eigenvectors.
    pub w: Array2<C64>,
    pub in_domain: Vec<bool>,
    pub diagnostics: RealizationDiagnostics,
    pub warnings: Vec<String>,
}

/// Scalar data `l^T H(s_i, p_j) r` with `l`, `r` the means of the probing directions.
pub fn scalar_data(samples: &ProbedSampleSet) -> Array2<C64> {
    let cfg = samples.config();
    let r = cfg.r();
    let inv_r = C64::new(1.0 / r as f64, 0.0);
    let r_mean = cfg.right_dirs().sum_axis(ndarray::Axis(1)) * inv_r;
    let left_mean = samples.left_tensor().sum_axis(ndarray::Axis(0)) * inv_r;
    Array2::from_shape_fn((2 * r, cfg.q()), |(i, j)| left_mean.slice(s![i, j, ..]).dot(&r_mean))
}

/// Probes, checks the eigenvalue count, fits the shared scalar surrogate
/// and lifts it to the `2r` vector surrogates.
pub fn offline<P: Problem + ?Sized>(
    problem: &P,
    domain: &ContourDomain,
    config: &SamplingConfig,
    opts: &OfflineOptions,
) -> Result<OfflineModel> {
    if config.q() < 2 {
        return Err(Error::arg("the parametric fit needs at least two parameter samples"));
    }
    if config.dim() != problem.dim() {
        return Err(Error::arg(format!(
            "directions have length {}, problem dimension is {}",
            config.dim(),
            problem.dim()
        )));
    }
    config.check_outside(domain)?;
    let rule = build_trapezoid_rule(domain, opts.nodes)?;
    let samples = probe_samples(problem, &rule, config)?;
    offline_from_samples(problem.name(), &samples, opts)
}

/// The fitting part of [`offline`] on precomputed samples.
pub fn offline_from_samples(
    problem_name: &str,
    samples: &ProbedSampleSet,
    opts: &OfflineOptions,
) -> Result<OfflineModel> {
    let cfg = samples.config();
    if cfg.q() < 2 {
        return Err(Error::arg("the parametric fit needs at least two parameter samples"));
    }
    let m = consistency_rank_check(samples, opts.rank_tol)?;
    if m == 0 {
        return Err(Error::Realization("no eigenvalues detected inside the domain".into()));
    }
    let mut fit = opts.fit;
    fit.min_z_nodes = m + 1;
    if opts.exact_z_degree {
        fit.max_z_nodes = Some(m + 1);
    }
    let data = scalar_data(samples);
    let report = paaa::paaa_fit(data.view(), cfg.sample_points(), cfg.parameter_points(), fit)?;

    let (zi, pj) = (&report.z_node_indices, &report.p_node_indices);
    let n = cfg.dim();
    let lift = |tensor: &ndarray::Array4<C64>, k: usize| {
        let vecs = Array3::from_shape_fn((zi.len(), pj.len(), n), |(a, b, c)| tensor[[k, zi[a], pj[b], c]]);
        lift_vector(&report.model, vecs)
    };
    let left_models = (0..cfg.r()).map(|k| lift(samples.left_tensor(), k)).collect::<Result<_>>()?;
    let right_models = (0..cfg.r()).map(|k| lift(samples.right_tensor(), k)).collect::<Result<_>>()?;

    Ok(OfflineModel {
        problem_name: problem_name.to_string(),
        domain: samples.provenance().domain,
        sampling: cfg.clone(),
        m,
        metadata: ModelMetadata {
            nodes: samples.provenance().nodes,
            rank_tol: opts.rank_tol,
            fit_tol: fit.tol,
            converged: report.converged,
            max_fit_error: report.max_error,
            fit_history: report.history,
            z_node_indices: report.z_node_indices.clone(),
            p_node_indices: report.p_node_indices.clone(),
        },
        scalar: report.model,
        left_models,
        right_models,
    })
}

/// Eigenvalues and eigenvectors at `p_hat` from the surrogates; `rank_tol`
/// defaults to the offline value.
pub fn online(model: &OfflineModel, p_hat: C64, rank_tol: Option<f64>) -> Result<EigenSolution> {
    let cfg = &model.sampling;
    let (theta, sigma) = (cfg.theta(), cfg.sigma());
    let n = cfg.dim();
    let mut b = Array2::zeros((n, cfg.r()));
    let mut c = Array2::zeros((n, cfg.r()));
    for k in 0..cfg.r() {
        b.column_mut(k).assign(&model.left_models[k].eval(theta[k], p_hat)?);
        c.column_mut(k).assign(&model.right_models[k].eval(sigma[k], p_hat)?);
    }
    let data = TangentialData::new(theta, sigma, cfg.left_dirs().clone(), cfg.right_dirs().clone(), b, c)?;
    // the surrogate carries m poles in z, so anything beyond order m is model noise
    let real = loewner::realize_truncated(&data, rank_tol.unwrap_or(model.metadata.rank_tol), Some(model.m))?;

    let mut warnings = Vec::new();
    let (lo, hi) = model.parameter_range();
    if p_hat.im != 0.0 || p_hat.re < lo || p_hat.re > hi {
        warnings.push(format!("p = {p_hat} lies outside the sampled range [{lo}, {hi}]; extrapolating"));
    }
    let (r0, r1) = real.diagnostics.ranks;
    if r0.max(r1) > model.m {
        warnings.push(format!("Loewner rank {} exceeds offline count {}; truncated", r0.max(r1), model.m));
    }
    if real.len() != model.m {
        warnings.push(format!("realized {} eigenvalues, offline count is {}", real.len(), model.m));
    }
    if real.diagnostics.rank_mismatch() > 0 {
        warnings.push(format!("Loewner rank estimates differ: {:?}", real.diagnostics.ranks));
    }
    let (real, in_domain) = loewner::filter_in_domain(&real, &model.domain);
    Ok(EigenSolution {
        p_hat,
        eigenvalues: real.eigenvalues,
        v: real.v,
        w: real.w,
        in_domain,
        diagnostics: real.diagnostics,
        warnings,
    })
}

/// `||T(lambda_j, p) v_j|| / ||v_j||` for every eigenpair.
pub fn residuals<P: Problem + ?Sized>(problem: &P, solution: &EigenSolution) -> Result<Vec<f64>> {
    if solution.v.nrows() != problem.dim() {
        return Err(Error::arg(format!(
            "eigenvectors have length {}, problem dimension is {}",
            solution.v.nrows(),
            problem.dim()
        )));
    }
    solution
        .eigenvalues
        .iter()
        .zip(solution.v.columns())
        .map(|(&lam, v)| {
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if !(norm > 0.0) {
                return Err(Error::InvalidSolution(format!("zero eigenvector for eigenvalue {lam}")));
            }
            let t = problem.eval(lam, solution.p_hat)?;
            let res = t.dot(&v).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            Ok(res / norm)
        })
        .collect()
}

/// Poles in `z` of a scalar surrogate at `p_hat`.
pub fn scalar_probe_eigenvalues(model: &BarycentricModel2D, p_hat: C64) -> Result<Vec<C64>> {
    model.poles_at(p_hat)
}
