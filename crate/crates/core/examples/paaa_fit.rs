//! Bivariate rational fit of `f(z, p) = 1 / (z - p) + 2 / (z + 1 + p^2)` on a grid.

use ndarray::Array2;
use pnlevp::paaa::{paaa_fit, FitOptions};
use pnlevp::C64;

fn main() -> pnlevp::Result<()> {
    let f = |z: C64, p: C64| (z - p).inv() + 2.0 * (z + 1.0 + p * p).inv();
    let s: Vec<C64> = (0..40).map(|k| C64::from_polar(3.0, std::f64::consts::TAU * k as f64 / 40.0)).collect();
    let p: Vec<C64> = (0..15).map(|j| C64::new(j as f64 / 14.0, 0.0)).collect();
    let values = Array2::from_shape_fn((s.len(), p.len()), |(i, j)| f(s[i], p[j]));
    let fit = paaa_fit(values.view(), &s, &p, FitOptions::default())?;
    println!("converged {}, degrees {:?}, grid error {:.1e}", fit.converged, fit.model.degrees(), fit.max_error);
    println!("error history {:?}", fit.history.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>());

    let mut worst: f64 = 0.0;
    for (z, q) in [(C64::new(0.4, 2.1), 0.33), (C64::new(-2.0, -1.0), 0.71), (C64::new(2.5, 0.2), 0.05)] {
        let q = C64::new(q, 0.0);
        worst = worst.max((fit.model.eval(z, q)? - f(z, q)).norm());
    }
    println!("off-grid error {worst:.1e}");
    let q = C64::new(0.5, 0.0);
    let poles = fit.model.poles_at(q)?;
    for exact in [q, -1.0 - q * q] {
        let d = poles.iter().map(|z| (z - exact).norm()).fold(f64::INFINITY, f64::min);
        println!("pole {exact} at p = 0.5 recovered to {d:.1e}");
    }
    Ok(())
}
