//! Check that a (space, classifier, learning set) triple realizes a series, and locate an injected fault.

use seriesreal::events::{Alphabet, EventWord, Label};
use seriesreal::profiles::{is_realization, series_from_triple, Classifier, LearningSet, Profile, StateSpace};
use seriesreal::scalar;
use seriesreal::series::LabeledSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet = Alphabet::new(["u", "v"], ["lo", "hi"], ["a"])?;
    let space = StateSpace::linear(alphabet.generators().clone(), vec![vec![vec![1.0, 0.0], vec![1.0, 1.0]]])?;
    let chi = LearningSet::new(
        &alphabet,
        vec![
            Profile { label: Label(0), state: vec![0.0, 1.0] },
            Profile { label: Label(0), state: vec![1.0, 1.0] },
        ],
    )?;
    let f = Classifier::Lookup { coordinate: 0, cuts: vec![1.5], labels: vec![Label(0), Label(1)] };
    let n = 3;
    let p = series_from_triple(&space, &f, &chi, n)?;
    println!("round trip realizes: {}", is_realization(&space, &f, &chi, &p, n)?.realizes());

    let w = EventWord::from(vec![alphabet.event("u", "hi", "a")?, alphabet.event("v", "hi", "a")?]);
    let bump = LabeledSeries::from_entries(alphabet.clone(), n, [(w, scalar::ratio(1, 2))])?;
    let faulty = LabeledSeries::linear_combine(&[scalar::one(), scalar::one()], &[&p, &bump])?;
    let report = is_realization(&space, &f, &chi, &faulty, n)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
