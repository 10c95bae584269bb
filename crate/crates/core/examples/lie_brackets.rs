//! Lyndon-word bracket basis and the Lie rank of a series.

use seriesreal::events::{Generators, SimpleWord};
use seriesreal::realize::{lie_rank, lie_shift, LieBracketBasis};
use seriesreal::scalar;
use seriesreal::series::SimpleSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Generators::new(["a", "b"])?;
    let basis = LieBracketBasis::new(&g, 4);
    println!("{} basis brackets up to depth 4", basis.len());
    for e in basis.elements() {
        let terms: Vec<String> = e
            .expansion
            .iter()
            .map(|(w, c)| format!("{c:+}{}", g.render(w).concat()))
            .collect();
        println!("  {:<14} = {}", e.bracket, terms.join(" "));
    }

    // Indicator of words that start with a.
    let p = SimpleSeries::indicator(g.clone(), 5, |w: &SimpleWord| w.letters().first() == Some(&g.sym("a").unwrap()));
    let ab = &basis.elements()[2];
    let shifted = lie_shift(&p, ab)?;
    println!("{} applied to p, at 'b': {}", ab.bracket, scalar::format(&shifted.at("b")));
    println!("lie rank at depth 2, eval length 3: {}", lie_rank(&p, 2, 3)?);
    Ok(())
}
