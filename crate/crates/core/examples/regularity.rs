//! Per-(pid, label) Lie rank report for a labeled series.

use seriesreal::events::{Alphabet, Label};
use seriesreal::profiles::{series_from_triple, Classifier, LearningSet, Profile, StateSpace};
use seriesreal::realize::is_regular;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet = Alphabet::new(["u", "v"], ["lo", "hi"], ["a", "b"])?;
    let space = StateSpace::linear(
        alphabet.generators().clone(),
        vec![
            vec![vec![1.0, 0.0], vec![1.0, 1.0]],
            vec![vec![1.0, 0.0], vec![-1.0, 1.0]],
        ],
    )?;
    let chi = LearningSet::new(
        &alphabet,
        vec![
            Profile { label: Label(0), state: vec![0.0, 1.0] },
            Profile { label: Label(1), state: vec![1.0, 1.0] },
        ],
    )?;
    let f = Classifier::Lookup { coordinate: 0, cuts: vec![0.5], labels: vec![Label(0), Label(1)] };
    let p = series_from_triple(&space, &f, &chi, 4)?;
    let report = is_regular(&p, 2, 2)?;
    for r in &report.projections {
        println!(
            "{} / {}: rank {} (previous {:?}) stabilized {}",
            r.pid,
            r.label,
            r.rank,
            r.previous_rank,
            r.stabilized
        );
    }
    println!("all stabilized: {}", report.all_stabilized);
    Ok(())
}
