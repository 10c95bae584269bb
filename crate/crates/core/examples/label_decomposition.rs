//! Split a classification-rate series into one series per predicted label.

use seriesreal::events::{Alphabet, EventWord, Label};
use seriesreal::fit::{decompose, label_restrict};
use seriesreal::profiles::{Classifier, LearningSet, Prediction, Profile, StateSpace};
use seriesreal::scalar;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet = Alphabet::new(["u", "v"], ["lo", "mid", "hi"], ["a"])?;
    let space = StateSpace::linear(alphabet.generators().clone(), vec![vec![vec![1.0, 0.0], vec![1.0, 1.0]]])?;
    let chi = LearningSet::new(
        &alphabet,
        vec![
            Profile { label: Label(0), state: vec![0.0, 1.0] },
            Profile { label: Label(1), state: vec![1.0, 1.0] },
        ],
    )?;
    let f = Classifier::Lookup { coordinate: 0, cuts: vec![0.5, 1.5], labels: vec![Label(0), Label(1), Label(2)] };

    let only_mid = label_restrict(&f, Label(1), &alphabet)?;
    for x in [0.0, 1.0, 2.0] {
        let shown = match only_mid.predict(&[x, 1.0]) {
            Prediction::Label(l) => alphabet.label_name(l).to_string(),
            Prediction::Star => "*".to_string(),
        };
        println!("restricted to mid at x = {x}: {shown}");
    }

    let d = decompose(&space, &f, &chi, 2)?;
    let h = EventWord::from(vec![alphabet.event("u", "mid", "a")?]);
    for (l, part) in &d.parts {
        println!("p_{}(h) = {}", alphabet.label_name(*l), scalar::format(&part.evaluate(&h)?));
    }
    println!("p(h) = {}, parts sum back: {}", scalar::format(&d.total.evaluate(&h)?), d.mismatches.is_empty());
    Ok(())
}
