use ndarray::Array2;

use crate::contour::ProbedSampleSet;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::loewner::{build_loewner, numerical_rank, TangentialData};

/// Tangential data at parameter index `j`: `b_i = l_i^T H(theta_i, p_j)`
/// and `c_i = H(sigma_i, p_j) r_i`.
pub fn tangential_data_at(samples: &ProbedSampleSet, j: usize) -> Result<TangentialData> {
    let cfg = samples.config();
    if j >= cfg.q() {
        return Err(Error::arg(format!("parameter index {j} out of range (q = {})", cfg.q())));
    }
    let (n, r) = (cfg.dim(), cfg.r());
    let mut b = Array2::<C64>::zeros((n, r));
    let mut c = Array2::<C64>::zeros((n, r));
    for k in 0..r {
        b.column_mut(k).assign(&samples.left(k, 2 * k, j));
        c.column_mut(k).assign(&samples.right(k, 2 * k + 1, j));
    }
    TangentialData::new(cfg.theta(), cfg.sigma(), cfg.left_dirs().clone(), cfg.right_dirs().clone(), b, c)
}

/// Numerical rank of the Loewner matrix at every parameter sample; errors
/// unless all ranks agree.
pub fn consistency_rank_check(samples: &ProbedSampleSet, rank_tol: f64) -> Result<usize> {
    let ranks = (0..samples.config().q())
        .map(|j| {
            let (l, _) = build_loewner(&tangential_data_at(samples, j)?);
            numerical_rank(&l, rank_tol)
        })
        .collect::<Result<Vec<_>>>()?;
    match ranks.first() {
        Some(&m) if ranks.iter().all(|&x| x == m) => Ok(m),
        Some(_) => Err(Error::AssumptionViolation { ranks }),
        None => Err(Error::arg("no parameter samples")),
    }
}
