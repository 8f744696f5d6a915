//! Thin layer over dense kernels.
//!
//! Small LU factorizations are done in-crate so that the many tiny solves of the
//! quadrature phase avoid per-call LAPACK overhead; SVD and the QZ generalized
//! eigensolver go to LAPACK through `ndarray-linalg`.

use ndarray::{s, Array1, Array2, ArrayView2};
use ndarray_linalg::{EigGeneralized, GeneralizedEigenvalue, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// The matrix handed to [`LuFactors::new`] was singular to working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularFactorization;

/// LU factorization with partial pivoting, `P A = L U`, stored compactly.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: Array2<C64>,
    perm: Vec<usize>,
}

impl LuFactors {
    /// Factorizes a square matrix. A pivot of modulus at most `n * eps * max|a_ij|`
    /// is treated as a rank deficiency.
    pub fn new(a: ArrayView2<'_, C64>) -> Result<Self, SingularFactorization> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU needs a square matrix");
        let mut lu = a.to_owned();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = lu.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        if n == 0 {
            return Ok(Self { lu, perm });
        }
        if !scale.is_finite() || scale == 0.0 {
            return Err(SingularFactorization);
        }
        let floor = (n as f64) * f64::EPSILON * scale;
        for k in 0..n {
            let (piv, pmag) =
                (k..n)
                    .map(|i| (i, lu[[i, k]].norm()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmag <= floor {
                return Err(SingularFactorization);
            }
            if piv != k {
                for j in 0..n {
                    lu.swap([k, j], [piv, j]);
                }
                perm.swap(k, piv);
            }
            let inv = ONE / lu[[k, k]];
            for i in k + 1..n {
                let f = lu[[i, k]] * inv;
                lu[[i, k]] = f;
                if f != ZERO {
                    for j in k + 1..n {
                        let u = lu[[k, j]];
                        lu[[i, j]] -= f * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: ArrayView2<'_, C64>) -> Array2<C64> {
        let n = self.dim();
        assert_eq!(b.nrows(), n);
        let mut x = Array2::from_shape_fn(b.raw_dim(), |(i, j)| b[[self.perm[i], j]]);
        for col in 0..x.ncols() {
            for i in 0..n {
                let mut acc = x[[i, col]];
                for k in 0..i {
                    acc -= self.lu[[i, k]] * x[[k, col]];
                }
                x[[i, col]] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = x[[i, col]];
                for k in i + 1..n {
                    acc -= self.lu[[i, k]] * x[[k, col]];
                }
                x[[i, col]] = acc / self.lu[[i, i]];
            }
        }
        x
    }

    /// Solves `A^T X = B` (plain transpose, no conjugation).
    pub fn solve_transpose(&self, b: ArrayView2<'_, C64>) -> Array2<C64> {
        let n = self.dim();
        assert_eq!(b.nrows(), n);
        let mut y = b.to_owned();
        for col in 0..y.ncols() {
            // U^T w = b
            for i in 0..n {
                let mut acc = y[[i, col]];
                for k in 0..i {
                    acc -= self.lu[[k, i]] * y[[k, col]];
                }
                y[[i, col]] = acc / self.lu[[i, i]];
            }
            // L^T v = w
            for i in (0..n).rev() {
                let mut acc = y[[i, col]];
                for k in i + 1..n {
                    acc -= self.lu[[k, i]] * y[[k, col]];
                }
                y[[i, col]] = acc;
            }
        }
        let mut x = Array2::zeros(b.raw_dim());
        for i in 0..n {
            x.row_mut(self.perm[i]).assign(&y.row(i));
        }
        x
    }
}

/// Singular values in descending order together with the requested factors.
pub(crate) struct Svd {
    pub u: Option<Array2<C64>>,
    pub sigma: Array1<f64>,
    pub vt: Option<Array2<C64>>,
}

pub(crate) fn svd(a: &Array2<C64>, want_u: bool, want_vt: bool) -> Result<Svd> {
    if a.is_empty() {
        return Ok(Svd {
            u: want_u.then(|| Array2::eye(a.nrows())),
            sigma: Array1::zeros(0),
            vt: want_vt.then(|| Array2::eye(a.ncols())),
        });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Lapack("non-finite entry passed to SVD".into()));
    }
    let (u, sigma, vt) = a.svd(want_u, want_vt)?;
    Ok(Svd { u, sigma, vt })
}

/// Count of singular values strictly above `rel_tol * sigma_max`.
pub(crate) fn rank_from_singular_values(sigma: &[f64], rel_tol: f64) -> usize {
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// One generalized eigenpair `A s = lambda B s` in homogeneous form.
pub(crate) struct GenEigenpair {
    pub alpha: C64,
    pub beta: C64,
    pub vector: Array1<C64>,
}

impl GenEigenpair {
    /// `|beta| / |alpha|`, with zero-by-zero pairs reported as 0.
    pub fn finiteness(&self) -> f64 {
        let a = self.alpha.norm();
        let b = self.beta.norm();
        if a == 0.0 {
            if b == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            b / a
        }
    }

    pub fn value(&self) -> C64 {
        self.alpha / self.beta
    }
}

/// QZ-based generalized eigendecomposition of the pencil `(A, B)`.
pub(crate) fn eig_generalized(a: &Array2<C64>, b: &Array2<C64>) -> Result<Vec<GenEigenpair>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Lapack("non-finite entry passed to QZ".into()));
    }
    let (vals, vecs) = (a.clone(), b.clone()).eig_generalized(None)?;
    Ok(vals
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (alpha, beta) = match v {
                GeneralizedEigenvalue::Finite(_, ab) => *ab,
                GeneralizedEigenvalue::Indeterminate(ab) => *ab,
            };
            GenEigenpair { alpha, beta, vector: vecs.slice(s![.., k]).to_owned() }
        })
        .collect())
}

/// Conjugate transpose.
pub(crate) fn adjoint(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|v| v.conj())
}

/// Lexicographic order on (re, im); the canonical eigenvalue order of the crate.
pub fn eigenvalue_order(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}
