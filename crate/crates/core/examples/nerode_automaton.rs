//! Build a DFA from a membership oracle by residual classes, then minimize.

use seriesreal::events::{Generators, SimpleWord};
use seriesreal::nerode::{build_residuals, minimize, nerode_automaton};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Generators::new(["a", "b"])?;
    let a = g.sym("a")?;
    let b = g.sym("b")?;
    let contains_ab = move |w: &SimpleWord| w.letters().windows(2).any(|p| p == [a, b]);

    let table = build_residuals(&g, contains_ab, 4, 4);
    println!("{} residual classes", table.class_count());
    for (rep, sig) in table.representatives().iter().zip(table.signatures()) {
        let bits: String = sig.iter().map(|&x| if x { '1' } else { '0' }).collect();
        println!("  {:<6} {bits}", format!("'{}'", g.render(rep).concat()));
    }

    let dfa = nerode_automaton(&g, contains_ab, 4, 4)?;
    println!("dfa states: {}, minimal: {}", dfa.states(), minimize(&dfa).states());
    for text in ["", "ba", "bab", "bbbaab"] {
        println!("  accepts '{text}': {}", dfa.accepts(&g.parse_chars(text)?));
    }
    println!("{}", serde_json::to_string(&dfa)?);
    Ok(())
}
