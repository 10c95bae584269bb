//! Find which family parameters can move the series, then freeze the rest.

use seriesreal::events::{Alphabet, Label};
use seriesreal::fit::{active_parameters, goodness, Horizon, ParameterBox, ParametrizedFamily, ProbeConfig};
use seriesreal::profiles::{series_from_triple, Classifier, LearningSet, Profile, StateSpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet = Alphabet::new(["u", "v"], ["lo", "hi"], ["a", "b"])?;
    // State (x, y, 1): a counts into x, b counts into y.
    let space = StateSpace::linear(
        alphabet.generators().clone(),
        vec![
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]],
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]],
        ],
    )?;
    let chi = LearningSet::new(
        &alphabet,
        vec![
            Profile { label: Label(0), state: vec![0.0, 0.0, 1.0] },
            Profile { label: Label(1), state: vec![1.0, 0.0, 1.0] },
        ],
    )?;
    // Coordinate 0 is a cut on the first state entry; coordinate 1 is a cut nobody reads.
    let bounds = ParameterBox::new(vec![-1.0, -1.0], vec![3.0, 3.0])?;
    let family = ParametrizedFamily::custom(bounds.clone(), |a: &[f64]| Classifier::Lookup {
        coordinate: 0,
        cuts: vec![a[0]],
        labels: vec![Label(0), Label(1)],
    });
    let truth = Classifier::Lookup { coordinate: 0, cuts: vec![0.5], labels: vec![Label(0), Label(1)] };
    let p = series_from_triple(&space, &truth, &chi, 2)?;
    let horizon = Horizon::new(&space, &chi, &p, 2)?;

    let report = active_parameters(&family, &horizon, &alphabet, &ProbeConfig::default())?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    let frozen = family.frozen(&report.active);
    let a = [0.5, bounds.midpoint()[1]];
    println!("goodness at {a:?}: full {}, frozen {}", goodness(&family, &a, &horizon)?, goodness(&frozen, &a, &horizon)?);
    Ok(())
}
