//! Run labeled events through per-pid profiles and tabulate the classification rate.

use seriesreal::events::{Alphabet, EventWord, Label};
use seriesreal::profiles::{act_word, pairing, series_from_triple, Classifier, LearningSet, Profile, StateSpace};
use seriesreal::scalar;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet = Alphabet::new(["alice", "bob"], ["quiet", "busy"], ["login", "logout"])?;
    // State (sessions, 1): login adds one, logout removes one.
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
            Profile { label: Label(1), state: vec![2.0, 1.0] },
        ],
    )?;
    let busy_if_two = Classifier::Lookup { coordinate: 0, cuts: vec![1.5], labels: vec![Label(0), Label(1)] };
    println!("initial agreement {}", scalar::format(&pairing(&busy_if_two, &chi)));

    let h = EventWord::from(vec![
        alphabet.event("alice", "busy", "login")?,
        alphabet.event("alice", "busy", "login")?,
        alphabet.event("bob", "quiet", "logout")?,
    ]);
    let after = act_word(&space, &chi, &h);
    for pid in alphabet.pids() {
        let p = after.profile(pid);
        println!("  {}: {} {:?}", alphabet.pid_name(pid), alphabet.label_name(p.label), p.state);
    }
    println!("agreement after h: {}", scalar::format(&pairing(&busy_if_two, &after)));

    let p = series_from_triple(&space, &busy_if_two, &chi, 2)?;
    println!("series to length 2 has {} nonzero coefficients", p.support_len());
    Ok(())
}
