use ndarray::{array, Array2};

use crate::contour::ContourDomain;
use crate::error::{Error, Result};
use crate::linalg::C64;

use super::{newton_det_roots, Problem, RootSearch};

/// Relative distance to the branch cut treated as lying on it.
const CUT_TOL: f64 = 1e-14;

/// Which of the two branches of `sqrt(z^2 + 2 p z)` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchSign {
    #[default]
    Positive,
    Negative,
}

/// String on `[0, 1]` with viscous damping of strength `p` on `[1/4, 3/4]`,
/// written as a 4x4 transcendental eigenvalue problem in
/// `zh = sqrt(z^2 + 2 p z)`.
///
/// `zh` is realized as `i sqrt(-z) sqrt(z + 2p)` with principal roots, which
/// puts the cut on `(-inf, -2p] U [0, inf)` and keeps `T` analytic on the
/// segment between the two branch points.
#[derive(Debug, Clone, Copy, Default)]
pub struct DampedStringProblem {
    sign: BranchSign,
}

impl DampedStringProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_sign(sign: BranchSign) -> Self {
        Self { sign }
    }

    /// The branch value `zh(z, p)`, without cut checks.
    pub fn zhat(&self, z: C64, p: C64) -> C64 {
        let i = C64::new(0.0, 1.0);
        let v = i * (-z).sqrt() * (z + 2.0 * p).sqrt();
        match self.sign {
            BranchSign::Positive => v,
            BranchSign::Negative => -v,
        }
    }

    pub fn on_branch_cut(z: C64, p: C64) -> bool {
        let near_nonneg_real = |w: C64| w.im.abs() <= CUT_TOL * w.norm().max(1.0) && w.re >= -CUT_TOL;
        // sqrt(-z) is cut where -z <= 0; sqrt(z + 2p) where z + 2p <= 0.
        near_nonneg_real(z) || near_nonneg_real(-(z + 2.0 * p))
    }
}

impl Problem for DampedStringProblem {
    fn name(&self) -> &str {
        "damped-string"
    }

    fn dim(&self) -> usize {
        4
    }

    fn analytic_note(&self) -> Option<&str> {
        Some("branch cut of sqrt(z^2 + 2pz) on (-inf, -2p] U [0, inf)")
    }

    fn eval(&self, z: C64, p: C64) -> Result<Array2<C64>> {
        if Self::on_branch_cut(z, p) {
            return Err(Error::BranchCut { z, p });
        }
        let w = self.zhat(z, p);
        let zero = C64::new(0.0, 0.0);
        let (sz, cz) = ((z / 4.0).sinh(), (z / 4.0).cosh());
        let (s1, c1) = ((w / 4.0).sinh(), (w / 4.0).cosh());
        let (s3, c3) = ((3.0 * w / 4.0).sinh(), (3.0 * w / 4.0).cosh());
        Ok(array![
            [-sz, s1, c1, zero],
            [-z * cz, w * c1, w * s1, zero],
            [zero, -s3, -c3, sz],
            [zero, -w * c3, -w * s3, -z * cz],
        ])
    }

    fn true_eigenvalues(&self, p: C64, search: &ContourDomain) -> Result<Vec<C64>> {
        Ok(newton_det_roots(self, p, search, RootSearch::default()))
    }
}
