//! Offline fit of the 3x3 linear demo on a disk of radius 0.6, then online
//! eigenvalues compared with the closed form `+-sqrt(1 - p)`.

use pnlevp::benchmarks::benchmark;
use pnlevp::problems::LinearDemoProblem;
use pnlevp::solver::{online, residuals};
use pnlevp::C64;

fn main() -> pnlevp::Result<()> {
    let bench = benchmark("linear-1")?;
    let model = bench.run_offline()?;
    let problem = bench.problem();
    println!("m = {}, degrees {:?}, fit error {:.2e}", model.m, model.degrees(), model.metadata.max_fit_error);

    for p in [0.8, 0.9, 1.0, 1.1, 1.2] {
        let p = C64::new(p, 0.0);
        let sol = online(&model, p, None)?;
        let res = residuals(problem.as_ref(), &sol)?;
        let exact = [LinearDemoProblem::lambda3(p), LinearDemoProblem::lambda2(p)];
        println!("p = {:.2}", p.re);
        for (k, lam) in sol.eigenvalues.iter().enumerate() {
            let err = exact.iter().map(|e| (e - lam).norm()).fold(f64::INFINITY, f64::min);
            println!("  {lam:+.12}  residual {:.1e}  distance to closed form {:.1e}", res[k], err);
        }
    }
    Ok(())
}
