//! Damped string: where on [3, 4] do two eigenvalues come closest?
//! The offline phase takes a while (1000 quadrature nodes, 4x4 transcendental T).

use pnlevp::benchmarks::benchmark;
use pnlevp::solver::{min_pairwise_gap, sweep, uniform_parameters};

fn main() -> pnlevp::Result<()> {
    let bench = benchmark("damped-string-1")?;
    let model = bench.run_offline()?;
    println!("m = {}, degrees {:?}", model.m, model.degrees());
    let problem = bench.problem();
    let points = sweep(&model, Some(problem.as_ref()), &uniform_parameters(3.0, 4.0, 41), None)?;
    let best = points
        .iter()
        .min_by(|a, b| min_pairwise_gap(&a.solution.eigenvalues).total_cmp(&min_pairwise_gap(&b.solution.eigenvalues)))
        .expect("nonempty sweep");
    println!(
        "smallest gap {:.3e} at p = {:.4}, eigenvalues {:?}",
        min_pairwise_gap(&best.solution.eigenvalues),
        best.p,
        best.solution.eigenvalues
    );
    let worst = points.iter().filter_map(|pt| pt.max_residual).fold(0.0, f64::max);
    println!("largest residual over the sweep {worst:.2e}");
    Ok(())
}
