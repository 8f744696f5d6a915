//! Save an offline model, load it back, and answer online queries from the file.

use pnlevp::benchmarks::benchmark;
use pnlevp::solver::{load_model, online, save_model};
use pnlevp::C64;

fn main() -> pnlevp::Result<()> {
    let model = benchmark("delay")?.run_offline()?;
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("delay.model");
    save_model(&model, &path)?;
    println!("wrote {} ({} bytes)", path.display(), std::fs::metadata(&path)?.len());

    let loaded = load_model(&path)?;
    assert_eq!(loaded, model);
    let p = C64::new(33.0, 0.0);
    let a = online(&model, p, None)?;
    let b = online(&loaded, p, None)?;
    assert_eq!(a.eigenvalues, b.eigenvalues);
    println!("identical eigenvalues at p = 33: {:?}", b.eigenvalues);
    Ok(())
}
