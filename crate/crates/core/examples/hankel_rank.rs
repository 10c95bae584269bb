//! Hankel and Lie ranks of a few small series, with the stabilization check.

use seriesreal::events::{Generators, SimpleWord, Sym};
use seriesreal::realize::{hankel_step, lie_rank};
use seriesreal::scalar;
use seriesreal::series::SimpleSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Generators::new(["a", "b"])?;
    let n = 6;
    let count_a = SimpleSeries::tabulate(g.clone(), n, |w: &SimpleWord| {
        scalar::int(w.letters().iter().filter(|s| **s == Sym(0)).count() as i64)
    });
    let length_squared = SimpleSeries::tabulate(g.clone(), n, |w: &SimpleWord| scalar::int((w.len() * w.len()) as i64));

    for (name, p) in [("count of a", &count_a), ("length squared", &length_squared)] {
        let step = hankel_step(p, 3, 3)?;
        println!(
            "{name}: hankel rank {} (previous {:?}, stabilized {}), lie rank {}",
            step.rank,
            step.previous_rank,
            step.stabilized,
            lie_rank(p, 2, 4)?
        );
    }
    Ok(())
}
