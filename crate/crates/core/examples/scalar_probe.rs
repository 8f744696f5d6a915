//! Poles in `z` of the scalar surrogate versus the full tangential solve.

use pnlevp::benchmarks::benchmark;
use pnlevp::solver::online;
use pnlevp::C64;

fn main() -> pnlevp::Result<()> {
    let model = benchmark("delay")?.run_offline()?;
    for p in [30.0, 32.5, 35.0] {
        let p = C64::new(p, 0.0);
        let probe = model.scalar_probe(p)?;
        let full = online(&model, p, None)?;
        println!("p = {}", p.re);
        for a in &probe {
            // nearest rather than positional: a conjugate pair with nearly equal real parts may sort either way
            let b = full.eigenvalues.iter().min_by(|x, y| (*x - a).norm().total_cmp(&(*y - a).norm())).expect("m > 0");
            println!("  probe {a:+.10}  online {b:+.10}  |diff| {:.1e}", (a - b).norm());
        }
    }
    Ok(())
}
