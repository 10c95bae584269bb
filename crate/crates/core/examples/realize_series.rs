//! Recover a minimal linear realization from a truncated series and check it.

use seriesreal::events::{Generators, SimpleWord, Sym};
use seriesreal::realize::realize_from_hankel;
use seriesreal::scalar;
use seriesreal::series::SimpleSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Generators::new(["a", "b"])?;
    // p(w) = (number of a) - 2 * (number of b), a rank-2 series.
    let p = SimpleSeries::tabulate(g.clone(), 6, |w: &SimpleWord| {
        let a = w.letters().iter().filter(|s| **s == Sym(0)).count() as i64;
        scalar::int(a - 2 * (w.len() as i64 - a))
    });
    let r = realize_from_hankel(&p, 3)?;
    println!("dimension {}", r.dim());
    println!("{}", serde_json::to_string_pretty(&r.to_json())?);
    match r.first_mismatch(&p)? {
        None => println!("reproduces every coefficient up to length {}", p.truncation()),
        Some(w) => println!("first mismatch at {:?}", g.render(&w)),
    }
    let w = g.parse_chars("abba")?;
    println!("p(abba) = {}", scalar::format(&seriesreal::realize::realized_value(&r, &w)?));
    Ok(())
}
