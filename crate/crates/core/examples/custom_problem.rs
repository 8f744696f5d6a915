//! A user-supplied problem from a closure: `T(z, p) = z I - A(p)` with
//! `A(p) = [[p, 1], [0.5, -p]]`, eigenvalues `+-sqrt(p^2 + 0.5)`.

use ndarray::array;
use pnlevp::contour::{default_sampling, ContourDomain, DEFAULT_INFLATION};
use pnlevp::problems::FnProblem;
use pnlevp::solver::{offline, online, OfflineOptions};
use pnlevp::C64;

fn main() -> pnlevp::Result<()> {
    let one = C64::new(1.0, 0.0);
    let problem = FnProblem::new("two-by-two", 2, move |z, p| array![[z - p, -one], [-0.5 * one, z + p]]);
    let domain = ContourDomain::disk(C64::new(0.0, 0.0), 1.5)?;
    let sampling = default_sampling(&domain, 2, 4, 12, (0.0, 1.0), 3, DEFAULT_INFLATION)?;
    let model = offline(&problem, &domain, &sampling, &OfflineOptions::default())?;
    println!("m = {}, degrees {:?}", model.m, model.degrees());
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let sol = online(&model, C64::new(p, 0.0), None)?;
        let exact = (p * p + 0.5f64).sqrt();
        let found: Vec<String> = sol.eigenvalues.iter().map(|l| format!("{:+.12}", l.re)).collect();
        println!("p = {p:.2}: {}  exact +-{exact:.12}", found.join(" "));
    }
    Ok(())
}
