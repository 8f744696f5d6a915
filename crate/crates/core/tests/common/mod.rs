//! Oracles shared by the integration tests. Nothing here calls the code under test.
#![allow(dead_code)]

use ndarray::{array, Array1, Array2, ArrayView1};
use pnlevp::C64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `T(z, p)` of the 3x3 linear demo, `det T = (p - z)(1 - p - z^2)`.
pub fn linear_t(z: C64, p: C64) -> Array2<C64> {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    array![[z, -one, zero], [p - one, z, zero], [zero, -one, z - p]]
}

pub const DELAY_COUPLING: f64 = 0.01;

pub fn delay_stiffness() -> Vec<f64> {
    (0..10).map(|i| 10f64.powf(-4.0 + 14.0 * i as f64 / 9.0)).collect()
}

pub fn delay_t(z: C64, p: C64) -> Array2<C64> {
    let shift = z + DELAY_COUPLING * (-p * z).exp();
    Array2::from_diag(&Array1::from_iter(delay_stiffness().into_iter().map(|e| shift + e)))
}

/// String with viscous damping on `[1/4, 3/4]`; `w^2 = z^2 + 2pz`.
pub fn damped_string_t(z: C64, p: C64) -> Array2<C64> {
    let w = c(0.0, 1.0) * (-z).sqrt() * (z + 2.0 * p).sqrt();
    let zero = c(0.0, 0.0);
    let (sz, cz) = ((z / 4.0).sinh(), (z / 4.0).cosh());
    let (s1, c1) = ((w / 4.0).sinh(), (w / 4.0).cosh());
    let (s3, c3) = ((3.0 * w / 4.0).sinh(), (3.0 * w / 4.0).cosh());
    array![
        [-sz, s1, c1, zero],
        [-z * cz, w * c1, w * s1, zero],
        [zero, -s3, -c3, sz],
        [zero, -w * c3, -w * s3, -z * cz],
    ]
}

fn norm(v: ArrayView1<'_, C64>) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `||T(lambda) v|| / ||v||`.
pub fn relative_residual(t: &Array2<C64>, v: ArrayView1<'_, C64>) -> f64 {
    norm(t.dot(&v).view()) / norm(v)
}

/// Largest residual over all eigenpairs (columns of `v`).
pub fn max_residual(t: impl Fn(C64) -> Array2<C64>, eigenvalues: &[C64], v: &Array2<C64>) -> f64 {
    eigenvalues.iter().enumerate().map(|(j, lam)| relative_residual(&t(*lam), v.column(j))).fold(0.0, f64::max)
}

/// Roots of `z + 0.01 exp(-p z) + E_ii` in the disk `|z - center| < radius`,
/// by Newton from a 60x60 grid over the bounding square.
pub fn delay_roots(p: f64, center: C64, radius: f64) -> Vec<C64> {
    let p = c(p, 0.0);
    let mut roots: Vec<C64> = Vec::new();
    for e in delay_stiffness() {
        let f = |z: C64| z + DELAY_COUPLING * (-p * z).exp() + e;
        let df = |z: C64| 1.0 - DELAY_COUPLING * p * (-p * z).exp();
        for a in 0..60 {
            for b in 0..60 {
                let mut z = center + c(radius * (2.0 * a as f64 / 59.0 - 1.0), radius * (2.0 * b as f64 / 59.0 - 1.0));
                let mut ok = false;
                for _ in 0..50 {
                    let step = f(z) / df(z);
                    z -= step;
                    if !z.is_finite() {
                        break;
                    }
                    if step.norm() <= 1e-13 * z.norm().max(1e-3) {
                        z -= f(z) / df(z);
                        ok = z.is_finite();
                        break;
                    }
                }
                if ok && (z - center).norm() < radius && roots.iter().all(|r| (r - z).norm() > 1e-9) {
                    roots.push(z);
                }
            }
        }
    }
    roots
}

/// Largest distance from a computed eigenvalue to its nearest reference root.
pub fn nearest_error(computed: &[C64], reference: &[C64]) -> f64 {
    computed.iter().map(|z| reference.iter().map(|r| (r - z).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

/// Symmetric version: every root has a near eigenvalue and vice versa.
pub fn set_distance(a: &[C64], b: &[C64]) -> f64 {
    nearest_error(a, b).max(nearest_error(b, a))
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}
