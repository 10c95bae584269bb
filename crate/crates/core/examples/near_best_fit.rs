//! Grid plus simplex search for the classifier parameters that best reproduce a series.

use seriesreal::events::{Alphabet, Label};
use seriesreal::fit::{near_best_search, Horizon, ParameterBox, ParametrizedFamily, SearchConfig};
use seriesreal::profiles::{series_from_triple, Classifier, LearningSet, Profile, StateSpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet = Alphabet::new(["u", "v", "w"], ["lo", "hi"], ["up", "down"])?;
    let space = StateSpace::linear(
        alphabet.generators().clone(),
        vec![
            vec![vec![1.0, 0.0], vec![0.5, 1.0]],
            vec![vec![1.0, 0.0], vec![-0.5, 1.0]],
        ],
    )?;
    let chi = LearningSet::new(
        &alphabet,
        vec![
            Profile { label: Label(0), state: vec![0.0, 1.0] },
            Profile { label: Label(1), state: vec![1.0, 1.0] },
            Profile { label: Label(1), state: vec![2.0, 1.0] },
        ],
    )?;
    // Observed rates come from a hidden cut at 0.8.
    let hidden = Classifier::Lookup { coordinate: 0, cuts: vec![0.8], labels: vec![Label(0), Label(1)] };
    let p = series_from_triple(&space, &hidden, &chi, 2)?;

    let family = ParametrizedFamily::linear_threshold(ParameterBox::uniform(6, -2.0, 2.0)?, 2, 2)?;
    let horizon = Horizon::new(&space, &chi, &p, 2)?;
    let report = near_best_search(&family, &horizon, &SearchConfig { epsilon: 1e-6, budget: 400 })?;
    println!("best a0 = {:?}", report.a0);
    println!(
        "goodness {} after {} evaluations ({} on the grid), exact: {}, budget limited: {}",
        report.value, report.evaluations, report.grid_points, report.exact_realization, report.budget_limited
    );
    Ok(())
}
