use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::contour::ContourDomain;
use crate::error::{Error, Result};
use crate::linalg::{LuFactors, C64};

use super::Problem;

/// `lambda(p) = a + b p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineEigenvalue {
    pub a: C64,
    pub b: C64,
}

impl AffineEigenvalue {
    pub fn new(a: C64, b: C64) -> Self {
        Self { a, b }
    }

    pub fn at(&self, p: C64) -> C64 {
        self.a + self.b * p
    }
}

/// `T(z, p) = X diag(z - lambda_j(p)) Y` with fixed random frames `X`, `Y`.
///
/// `T^{-1} = Y^{-1} diag(1 / (z - lambda_j(p))) X^{-1}` has exactly the
/// prescribed simple poles, so the pole part for any domain is known in
/// closed form.
#[derive(Debug, Clone)]
pub struct SyntheticRationalProblem {
    seed: u64,
    eigenvalues: Vec<AffineEigenvalue>,
    x: Array2<C64>,
    y: Array2<C64>,
    x_inv: Array2<C64>,
    y_inv: Array2<C64>,
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize) -> Array2<C64> {
    // identity plus a small perturbation keeps the frame well conditioned
    let scale = 0.3 / (n as f64).sqrt();
    Array2::from_shape_fn((n, n), |(i, j)| {
        let d = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        d + gaussian(rng) * scale
    })
}

fn invert(m: &Array2<C64>) -> Result<Array2<C64>> {
    let lu = LuFactors::new(m.view()).map_err(|_| Error::arg("random frame is singular"))?;
    Ok(lu.solve(Array2::<C64>::eye(m.nrows()).view()))
}

impl SyntheticRationalProblem {
    /// Problem with the given eigenvalue maps and random frames from `seed`.
    pub fn from_eigenvalues(seed: u64, eigenvalues: Vec<AffineEigenvalue>) -> Result<Self> {
        let n = eigenvalues.len();
        if n == 0 {
            return Err(Error::arg("need at least one eigenvalue"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_frame(&mut rng, n);
        let y = random_frame(&mut rng, n);
        let x_inv = invert(&x)?;
        let y_inv = invert(&y)?;
        Ok(Self { seed, eigenvalues, x, y, x_inv, y_inv })
    }

    /// `dim` eigenvalue maps, `m_inside` of which stay well inside `domain`
    /// for every `p` in `p_range`; the rest stay well outside.
    pub fn random_inside(
        seed: u64,
        dim: usize,
        m_inside: usize,
        domain: &ContourDomain,
        p_range: (f64, f64),
    ) -> Result<Self> {
        if m_inside > dim {
            return Err(Error::arg("m_inside exceeds dimension"));
        }
        let (p0, p1) = p_range;
        let mid = 0.5 * (p0 + p1);
        let half = (0.5 * (p1 - p0)).abs().max(1e-12);
        let (sr, si) = domain.semi_axes();
        let c = domain.center();
        // sample a different stream than the frames
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let mut eigs = Vec::with_capacity(dim);
        for j in 0..dim {
            let angle = rng.random_range(0.0..std::f64::consts::TAU);
            let (level, drift) =
                if j < m_inside { (rng.random_range(0.0..0.5), 0.2) } else { (rng.random_range(1.8..3.0), 0.3) };
            let at_mid = c + C64::new(level * sr * angle.cos(), level * si * angle.sin());
            let dir = rng.random_range(0.0..std::f64::consts::TAU);
            let b = C64::new(drift * sr * dir.cos(), drift * si * dir.sin()) / half;
            eigs.push(AffineEigenvalue::new(at_mid - b * mid, b));
        }
        Self::from_eigenvalues(seed, eigs)
    }

    /// Six eigenvalues, three inside the unit disk for `p` in `[0, 1]`.
    pub fn demo() -> Self {
        let disk = ContourDomain::disk(C64::new(0.0, 0.0), 1.0).expect("valid disk");
        Self::random_inside(1, 6, 3, &disk, (0.0, 1.0)).expect("well-conditioned frames")
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn eigenvalue_maps(&self) -> &[AffineEigenvalue] {
        &self.eigenvalues
    }

    pub fn eigenvalues_at(&self, p: C64) -> Vec<C64> {
        self.eigenvalues.iter().map(|e| e.at(p)).collect()
    }

    /// Pole part of `T^{-1}` for the eigenvalues inside `domain` at `p`.
    pub fn pole_part(&self, z: C64, p: C64, domain: &ContourDomain) -> Array2<C64> {
        let n = self.dim();
        let mut h = Array2::zeros((n, n));
        for (j, e) in self.eigenvalues.iter().enumerate() {
            let lam = e.at(p);
            if !domain.contains(lam) {
                continue;
            }
            let scale = (z - lam).inv();
            let col = self.y_inv.column(j);
            let row = self.x_inv.row(j);
            for a in 0..n {
                for b in 0..n {
                    h[[a, b]] += col[a] * row[b] * scale;
                }
            }
        }
        h
    }

    fn shifts(&self, z: C64, p: C64) -> Array1<C64> {
        self.eigenvalues.iter().map(|e| z - e.at(p)).collect()
    }
}

impl Problem for SyntheticRationalProblem {
    fn name(&self) -> &str {
        "synthetic"
    }

    fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn eval(&self, z: C64, p: C64) -> Result<Array2<C64>> {
        let d = self.shifts(z, p);
        let mut xd = self.x.clone();
        for (mut col, dj) in xd.columns_mut().into_iter().zip(d.iter()) {
            col.mapv_inplace(|v| v * dj);
        }
        Ok(xd.dot(&self.y))
    }

    fn eval_derivative(&self, _z: C64, _p: C64) -> Result<Array2<C64>> {
        Ok(self.x.dot(&self.y))
    }

    fn true_eigenvalues(&self, p: C64, search: &ContourDomain) -> Result<Vec<C64>> {
        let mut ev: Vec<C64> = self.eigenvalues_at(p).into_iter().filter(|l| search.contains(*l)).collect();
        ev.sort_by(crate::linalg::eigenvalue_order);
        Ok(ev)
    }
}
