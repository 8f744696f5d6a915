//! Recover three poles of a 4x4 rational matrix from tangential data alone.

use ndarray::Array2;
use pnlevp::loewner::{realize, tangential_data_from_poles};
use pnlevp::C64;

fn main() -> pnlevp::Result<()> {
    let n = 4;
    let poles = [C64::new(-0.3, 0.1), C64::new(0.2, -0.4), C64::new(0.5, 0.0)];
    // rank-one residues u v^T
    let residues: Vec<Array2<C64>> = (0..poles.len())
        .map(|j| {
            Array2::from_shape_fn((n, n), |(a, b)| {
                C64::new((a + j) as f64 + 1.0, 0.5) * C64::new(1.0, (b * j) as f64 * 0.3 - 0.2)
            })
        })
        .collect();
    let r = 6;
    let ring = |k: usize, offset: f64| C64::from_polar(2.0, std::f64::consts::TAU * (k as f64 + offset) / r as f64);
    let theta = (0..r).map(|k| ring(k, 0.0)).collect();
    let sigma = (0..r).map(|k| ring(k, 0.5)).collect();
    let dirs = |shift: f64| {
        Array2::from_shape_fn((n, r), |(i, k)| C64::new((i * k) as f64 + shift, (i + k) as f64 * 0.1 - shift))
    };
    let data = tangential_data_from_poles(&poles, &residues, theta, sigma, dirs(0.3), dirs(0.7))?;

    let real = realize(&data, 1e-10)?;
    println!("ranks {:?}, order {}", real.diagnostics.ranks, real.diagnostics.order);
    for lam in &real.eigenvalues {
        let err = poles.iter().map(|p| (p - lam).norm()).fold(f64::INFINITY, f64::min);
        println!("  {lam:+.14}  error {err:.1e}");
    }
    let z = C64::new(0.1, 1.0);
    let mut exact = Array2::<C64>::zeros((n, n));
    for (p, res) in poles.iter().zip(&residues) {
        exact.scaled_add((z - p).inv(), res);
    }
    let diff = (&real.transfer(z) - &exact).iter().map(|v| v.norm()).fold(0.0, f64::max);
    println!("transfer function error at {z}: {diff:.1e}");
    Ok(())
}
