//! Loewner and shifted Loewner matrices from tangential data, and the
//! eigenvalue/eigenvector realization of the pencil they define.

use ndarray::{s, Array2};

use crate::contour::ContourDomain;
use crate::error::{Error, Result};
use crate::linalg::{self, LuFactors, C64};

/// Relative singular value cutoff used when none is given.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// `|beta| / |alpha|` at or below which a generalized eigenvalue is infinite.
const INFINITE_TOL: f64 = 1e-13;

/// Left data `(theta_i, l_i, b_i = H(theta_i)^T l_i)` and right data
/// `(sigma_j, r_j, c_j = H(sigma_j) r_j)`. Vectors are stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentialData {
    theta: Vec<C64>,
    sigma: Vec<C64>,
    left_dirs: Array2<C64>,
    right_dirs: Array2<C64>,
    left_vals: Array2<C64>,
    right_vals: Array2<C64>,
}

impl TangentialData {
    pub fn new(
        theta: Vec<C64>,
        sigma: Vec<C64>,
        left_dirs: Array2<C64>,
        right_dirs: Array2<C64>,
        left_vals: Array2<C64>,
        right_vals: Array2<C64>,
    ) -> Result<Self> {
        let n = left_dirs.nrows();
        let (rl, rr) = (theta.len(), sigma.len());
        let shapes_ok = left_dirs.dim() == (n, rl)
            && left_vals.dim() == (n, rl)
            && right_dirs.dim() == (n, rr)
            && right_vals.dim() == (n, rr);
        if !shapes_ok {
            return Err(Error::arg(format!(
                "inconsistent tangential data: {rl} left and {rr} right points, directions {:?}/{:?}, values {:?}/{:?}",
                left_dirs.dim(),
                right_dirs.dim(),
                left_vals.dim(),
                right_vals.dim()
            )));
        }
        for t in &theta {
            if sigma.contains(t) {
                return Err(Error::arg(format!("left point {t} coincides with a right point")));
            }
        }
        Ok(Self { theta, sigma, left_dirs, right_dirs, left_vals, right_vals })
    }

    pub fn theta(&self) -> &[C64] {
        &self.theta
    }

    pub fn sigma(&self) -> &[C64] {
        &self.sigma
    }

    pub fn left_dirs(&self) -> &Array2<C64> {
        &self.left_dirs
    }

    pub fn right_dirs(&self) -> &Array2<C64> {
        &self.right_dirs
    }

    /// Columns `b_i`.
    pub fn left_vals(&self) -> &Array2<C64> {
        &self.left_vals
    }

    /// Columns `c_j`.
    pub fn right_vals(&self) -> &Array2<C64> {
        &self.right_vals
    }

    pub fn dim(&self) -> usize {
        self.left_dirs.nrows()
    }
}

/// `L_ij = (b_i^T r_j - l_i^T c_j) / (theta_i - sigma_j)` and
/// `Ls_ij = (theta_i b_i^T r_j - sigma_j l_i^T c_j) / (theta_i - sigma_j)`.
pub fn build_loewner(data: &TangentialData) -> (Array2<C64>, Array2<C64>) {
    let br = data.left_vals.t().dot(&data.right_dirs);
    let lc = data.left_dirs.t().dot(&data.right_vals);
    let shape = (data.theta.len(), data.sigma.len());
    let l = Array2::from_shape_fn(shape, |(i, j)| (br[[i, j]] - lc[[i, j]]) / (data.theta[i] - data.sigma[j]));
    let ls = Array2::from_shape_fn(shape, |(i, j)| {
        let (t, s) = (data.theta[i], data.sigma[j]);
        (t * br[[i, j]] - s * lc[[i, j]]) / (t - s)
    });
    (l, ls)
}

/// Count of singular values above `rank_tol * sigma_max`; 0 for a zero matrix.
pub fn numerical_rank(m: &Array2<C64>, rank_tol: f64) -> Result<usize> {
    let svd = linalg::svd(m, false, false)?;
    Ok(linalg::rank_from_singular_values(svd.sigma.as_slice().unwrap_or(&[]), rank_tol))
}

/// Side information of a realization.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationDiagnostics {
    /// Singular values of `[L Ls]`.
    pub row_singular_values: Vec<f64>,
    /// Singular values of `[L; Ls]`.
    pub column_singular_values: Vec<f64>,
    /// Numerical ranks of `[L Ls]` and `[L; Ls]`; the realization uses the larger.
    pub ranks: (usize, usize),
    /// Order of the projected pencil, the larger rank unless capped.
    pub order: usize,
    /// Generalized eigenvalues dropped as infinite.
    pub discarded_infinite: usize,
}

impl RealizationDiagnostics {
    pub fn rank_mismatch(&self) -> usize {
        self.ranks.0.abs_diff(self.ranks.1)
    }
}

/// Eigenvalues `lambda_1..lambda_m` with right and left eigenvector matrices,
/// `G(z) = V (zI - J)^{-1} W^*` interpolating the data.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenRealization {
    pub eigenvalues: Vec<C64>,
    /// `n x m`.
    pub v: Array2<C64>,
    /// `n x m`; its conjugate transpose is `W^*`.
    pub w: Array2<C64>,
    pub diagnostics: RealizationDiagnostics,
}

impl EigenRealization {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `W^*`, `m x n`.
    pub fn w_star(&self) -> Array2<C64> {
        linalg::adjoint(&self.w)
    }

    /// `G(z) = V (zI - J)^{-1} W^*`.
    pub fn transfer(&self, z: C64) -> Array2<C64> {
        let mut scaled = self.v.clone();
        for (mut col, lam) in scaled.columns_mut().into_iter().zip(&self.eigenvalues) {
            let d = (z - lam).inv();
            col.mapv_inplace(|x| x * d);
        }
        scaled.dot(&self.w_star())
    }

    /// Residue `v_j w_j^*` of eigenvalue `j`.
    pub fn residue(&self, j: usize) -> Array2<C64> {
        let v = self.v.column(j);
        let w = self.w.column(j);
        Array2::from_shape_fn((v.len(), w.len()), |(a, b)| v[a] * w[b].conj())
    }
}

/// Truncated SVD realization of the Loewner pencil followed by its
/// generalized eigendecomposition.
pub fn realize(data: &TangentialData, rank_tol: f64) -> Result<EigenRealization> {
    realize_truncated(data, rank_tol, None)
}

/// [`realize`] with the pencil order additionally capped at `max_order`.
pub fn realize_truncated(data: &TangentialData, rank_tol: f64, max_order: Option<usize>) -> Result<EigenRealization> {
    let (l, ls) = build_loewner(data);
    let (rl, rr) = l.dim();
    let n = data.dim();

    let mut row = Array2::zeros((rl, 2 * rr));
    row.slice_mut(s![.., ..rr]).assign(&l);
    row.slice_mut(s![.., rr..]).assign(&ls);
    let mut col = Array2::zeros((2 * rl, rr));
    col.slice_mut(s![..rl, ..]).assign(&l);
    col.slice_mut(s![rl.., ..]).assign(&ls);

    let row_svd = linalg::svd(&row, true, false)?;
    let col_svd = linalg::svd(&col, false, true)?;
    let row_sv = row_svd.sigma.to_vec();
    let col_sv = col_svd.sigma.to_vec();
    let ranks =
        (linalg::rank_from_singular_values(&row_sv, rank_tol), linalg::rank_from_singular_values(&col_sv, rank_tol));
    let m = ranks.0.max(ranks.1).min(max_order.unwrap_or(usize::MAX));
    let mut diagnostics = RealizationDiagnostics {
        row_singular_values: row_sv,
        column_singular_values: col_sv,
        ranks,
        order: m,
        discarded_infinite: 0,
    };
    if m == 0 {
        return Ok(EigenRealization {
            eigenvalues: Vec::new(),
            v: Array2::zeros((n, 0)),
            w: Array2::zeros((n, 0)),
            diagnostics,
        });
    }

    let u = row_svd.u.expect("left factor requested");
    let vt = col_svd.vt.expect("right factor requested");
    let x = u.slice(s![.., ..m]).to_owned();
    let ys = linalg::adjoint(&vt.slice(s![..m, ..]).to_owned());
    let xs = linalg::adjoint(&x);
    let e = xs.dot(&l).dot(&ys);
    let a = xs.dot(&ls).dot(&ys);

    let e_lu = LuFactors::new(e.view()).map_err(|_| {
        Error::Realization(format!(
            "projected Loewner matrix of order {m} is singular; use more or different sample points"
        ))
    })?;
    let pairs = linalg::eig_generalized(&a, &e)?;
    let mut s_full = Array2::zeros((m, m));
    for (k, p) in pairs.iter().enumerate() {
        s_full.column_mut(k).assign(&p.vector);
    }
    let s_lu = LuFactors::new(s_full.view())
        .map_err(|_| Error::Realization("eigenvector matrix of the Loewner pencil is singular".into()))?;

    // W^* = -S^{-1} (X^* L Ys)^{-1} X^* B, with B holding the rows b_i^T
    let xb = xs.dot(&data.left_vals.t());
    let w_star_full = s_lu.solve(e_lu.solve(xb.view()).view()).mapv(|v| -v);
    let v_full = data.right_vals.dot(&ys).dot(&s_full);

    let mut kept: Vec<(C64, usize)> =
        pairs.iter().enumerate().filter(|(_, p)| p.finiteness() > INFINITE_TOL).map(|(k, p)| (p.value(), k)).collect();
    diagnostics.discarded_infinite = m - kept.len();
    kept.sort_by(|a, b| linalg::eigenvalue_order(&a.0, &b.0));

    let mut v = Array2::zeros((n, kept.len()));
    let mut w = Array2::zeros((n, kept.len()));
    for (c, &(_, k)) in kept.iter().enumerate() {
        v.column_mut(c).assign(&v_full.column(k));
        w.column_mut(c).assign(&w_star_full.row(k).mapv(|z| z.conj()));
    }
    Ok(EigenRealization { eigenvalues: kept.into_iter().map(|(lam, _)| lam).collect(), v, w, diagnostics })
}

/// Flags each eigenvalue with whether it lies inside `domain`; nothing is removed.
pub fn filter_in_domain(real: &EigenRealization, domain: &ContourDomain) -> (EigenRealization, Vec<bool>) {
    let flags = real.eigenvalues.iter().map(|z| domain.contains(*z)).collect();
    (real.clone(), flags)
}

/// Exact tangential data of `H(z) = sum_j res_j / (z - pole_j)`, used by tests and examples.
pub fn tangential_data_from_poles(
    poles: &[C64],
    residues: &[Array2<C64>],
    theta: Vec<C64>,
    sigma: Vec<C64>,
    left_dirs: Array2<C64>,
    right_dirs: Array2<C64>,
) -> Result<TangentialData> {
    if poles.len() != residues.len() {
        return Err(Error::arg("one residue per pole required"));
    }
    let n = left_dirs.nrows();
    let h = |z: C64| {
        let mut out = Array2::<C64>::zeros((n, n));
        for (p, res) in poles.iter().zip(residues) {
            out.scaled_add((z - p).inv(), res);
        }
        out
    };
    let mut left_vals = Array2::zeros((n, theta.len()));
    for (i, &t) in theta.iter().enumerate() {
        left_vals.column_mut(i).assign(&h(t).t().dot(&left_dirs.column(i)));
    }
    let mut right_vals = Array2::zeros((n, sigma.len()));
    for (j, &s) in sigma.iter().enumerate() {
        right_vals.column_mut(j).assign(&h(s).dot(&right_dirs.column(j)));
    }
    TangentialData::new(theta, sigma, left_dirs, right_dirs, left_vals, right_vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn gauss(rng: &mut ChaCha8Rng, shape: (usize, usize)) -> Array2<C64> {
        Array2::from_shape_fn(shape, |_| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
    }

    fn scalar_inverse_data() -> TangentialData {
        let one = array![[c(1.0, 0.0)]];
        TangentialData::new(
            vec![c(2.0, 0.0)],
            vec![c(3.0, 0.0)],
            one.clone(),
            one,
            array![[c(0.5, 0.0)]],
            array![[c(1.0 / 3.0, 0.0)]],
        )
        .unwrap()
    }

    #[test]
    fn scalar_inverse_by_hand() {
        let (l, ls) = build_loewner(&scalar_inverse_data());
        assert!((l[[0, 0]] - c(-1.0 / 6.0, 0.0)).norm() < 1e-16);
        assert!(ls[[0, 0]].norm() < 1e-16);
        let real = realize(&scalar_inverse_data(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(real.len(), 1);
        assert!(real.eigenvalues[0].norm() < 1e-14);
        let g = real.transfer(c(0.7, 0.2));
        assert!((g[[0, 0]] - c(0.7, 0.2).inv()).norm() < 1e-14);
    }

    #[test]
    fn zero_data_gives_zero_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data = TangentialData::new(
            vec![c(2.0, 0.0), c(-2.0, 0.0)],
            vec![c(0.0, 2.0), c(0.0, -2.0)],
            gauss(&mut rng, (3, 2)),
            gauss(&mut rng, (3, 2)),
            Array2::zeros((3, 2)),
            Array2::zeros((3, 2)),
        )
        .unwrap();
        let (l, ls) = build_loewner(&data);
        assert!(l.iter().chain(ls.iter()).all(|v| *v == c(0.0, 0.0)));
        let real = realize(&data, DEFAULT_RANK_TOL).unwrap();
        assert!(real.is_empty());
    }

    #[test]
    fn shift_identities_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (n, r) = (4, 6);
        let theta: Vec<C64> = (0..r).map(|k| c(3.0 + k as f64, 1.0)).collect();
        let sigma: Vec<C64> = (0..r).map(|k| c(-3.0 - k as f64, -0.5)).collect();
        let data = TangentialData::new(
            theta.clone(),
            sigma.clone(),
            gauss(&mut rng, (n, r)),
            gauss(&mut rng, (n, r)),
            gauss(&mut rng, (n, r)),
            gauss(&mut rng, (n, r)),
        )
        .unwrap();
        let (l, ls) = build_loewner(&data);
        let br = data.left_vals().t().dot(data.right_dirs());
        let lc = data.left_dirs().t().dot(data.right_vals());
        for i in 0..r {
            for j in 0..r {
                let a = ls[[i, j]] - sigma[j] * l[[i, j]];
                let b = ls[[i, j]] - theta[i] * l[[i, j]];
                assert!((a - br[[i, j]]).norm() <= 1e-13 * br[[i, j]].norm().max(1.0));
                assert!((b - lc[[i, j]]).norm() <= 1e-13 * lc[[i, j]].norm().max(1.0));
            }
        }
    }

    #[test]
    fn coincident_points_rejected() {
        let one = array![[c(1.0, 0.0)]];
        let err = TangentialData::new(vec![c(2.0, 0.0)], vec![c(2.0, 0.0)], one.clone(), one.clone(), one.clone(), one);
        assert!(matches!(err, Err(Error::Argument(_))));
    }

    fn two_pole_setup(r: usize) -> (Vec<C64>, Vec<Array2<C64>>, TangentialData) {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 3;
        let poles = vec![c(0.3, 0.0), c(-0.2, 0.0)];
        let residues: Vec<Array2<C64>> = (0..2)
            .map(|_| {
                let v = gauss(&mut rng, (n, 1));
                let w = gauss(&mut rng, (n, 1));
                v.dot(&linalg::adjoint(&w))
            })
            .collect();
        let ring: Vec<C64> =
            (0..2 * r).map(|k| C64::from_polar(1.5, std::f64::consts::TAU * k as f64 / (2 * r) as f64)).collect();
        let theta = ring.iter().step_by(2).copied().collect();
        let sigma = ring.iter().skip(1).step_by(2).copied().collect();
        let data = tangential_data_from_poles(
            &poles,
            &residues,
            theta,
            sigma,
            gauss(&mut rng, (n, r)),
            gauss(&mut rng, (n, r)),
        )
        .unwrap();
        (poles, residues, data)
    }

    #[test]
    fn recovers_two_poles_and_residues() {
        let (_, residues, data) = two_pole_setup(4);
        let real = realize(&data, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(real.len(), 2);
        // sorted ascending by real part
        assert!((real.eigenvalues[0] - c(-0.2, 0.0)).norm() < 1e-10);
        assert!((real.eigenvalues[1] - c(0.3, 0.0)).norm() < 1e-10);
        for (j, want) in [(0, &residues[1]), (1, &residues[0])] {
            let got = real.residue(j);
            let err = (&got - want).iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(err < 1e-8, "residue {j}: {err}");
        }
    }

    #[test]
    fn truncates_rank_deficient_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 2;
        let r = 4;
        let res = gauss(&mut rng, (n, 1)).dot(&linalg::adjoint(&gauss(&mut rng, (n, 1))));
        let theta: Vec<C64> = (0..r).map(|k| c(2.0 + k as f64, 0.5)).collect();
        let sigma: Vec<C64> = (0..r).map(|k| c(-2.0 - k as f64, 0.5)).collect();
        let data = tangential_data_from_poles(
            &[c(0.1, 0.0)],
            &[res],
            theta,
            sigma,
            gauss(&mut rng, (n, r)),
            gauss(&mut rng, (n, r)),
        )
        .unwrap();
        let real = realize(&data, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(real.len(), 1);
        assert!((real.eigenvalues[0] - c(0.1, 0.0)).norm() < 1e-10);
        let sv = &real.diagnostics.row_singular_values;
        let below = sv.iter().filter(|&&s| s <= DEFAULT_RANK_TOL * sv[0]).count();
        assert_eq!(below, 3);
    }

    #[test]
    fn rank_of_special_matrices() {
        assert_eq!(numerical_rank(&Array2::zeros((4, 4)), DEFAULT_RANK_TOL).unwrap(), 0);
        assert_eq!(numerical_rank(&Array2::eye(5), DEFAULT_RANK_TOL).unwrap(), 5);
        let (_, _, data) = two_pole_setup(5);
        let (l, _) = build_loewner(&data);
        assert_eq!(numerical_rank(&l, DEFAULT_RANK_TOL).unwrap(), 2);
    }

    #[test]
    fn domain_flags() {
        let (_, _, data) = two_pole_setup(4);
        let real = realize(&data, DEFAULT_RANK_TOL).unwrap();
        let disk = ContourDomain::disk(c(0.0, 0.0), 1.0).unwrap();
        let (same, flags) = filter_in_domain(&real, &disk);
        assert_eq!(flags, vec![true, true]);
        assert_eq!(same, real);
        let small = ContourDomain::disk(c(0.3, 0.0), 0.1).unwrap();
        assert_eq!(filter_in_domain(&real, &small).1, vec![false, true]);
        let empty = realize(&scalar_inverse_data(), DEFAULT_RANK_TOL).unwrap();
        let none = EigenRealization {
            eigenvalues: vec![],
            v: Array2::zeros((1, 0)),
            w: Array2::zeros((1, 0)),
            diagnostics: empty.diagnostics,
        };
        assert!(filter_in_domain(&none, &disk).1.is_empty());
    }

    #[test]
    fn eigenvector_matrices_have_full_rank() {
        let (_, _, data) = two_pole_setup(6);
        let real = realize(&data, DEFAULT_RANK_TOL).unwrap();
        for m in [&real.v, &real.w] {
            let sv = linalg::svd(m, false, false).unwrap().sigma;
            assert!(sv[sv.len() - 1] > 1e-10 * sv[0]);
        }
    }
}
