//! Rightmost characteristic roots of the 10x10 delay system over the delay
//! range [30, 35], plus an extrapolation to p = 50.

use pnlevp::benchmarks::benchmark;
use pnlevp::solver::{online, spectral_abscissa, sweep, uniform_parameters};
use pnlevp::C64;

fn main() -> pnlevp::Result<()> {
    let bench = benchmark("delay")?;
    let model = bench.run_offline()?;
    let problem = bench.problem();
    let points = sweep(&model, Some(problem.as_ref()), &uniform_parameters(30.0, 35.0, 11), None)?;
    println!("{:>6} {:>14} {:>10}", "p", "abscissa", "residual");
    for pt in &points {
        let abscissa = spectral_abscissa(&pt.solution.eigenvalues);
        println!("{:>6.2} {:>14.6e} {:>10.1e}", pt.p, abscissa, pt.max_residual.unwrap_or(f64::NAN));
    }

    let far = online(&model, C64::new(50.0, 0.0), None)?;
    for w in &far.warnings {
        eprintln!("warning: {w}");
    }
    println!("p = 50: {:?}", far.eigenvalues);
    Ok(())
}
