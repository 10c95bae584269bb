#![allow(dead_code)]

use seriesreal::events::{Alphabet, Generators, Label, SimpleWord, Sym};
use seriesreal::profiles::{Classifier, LearningSet, Profile, StateSpace};
use seriesreal::scalar;
use seriesreal::series::SimpleSeries;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use seriesreal::events::AlphabetConfig;
use seriesreal::format;
use tempfile::TempDir;

pub fn ab() -> Generators {
    Generators::new(["a", "b"]).unwrap()
}

/// p(w) = number of `a` letters in w.
pub fn count_of_a(n: usize) -> SimpleSeries {
    SimpleSeries::tabulate(ab(), n, |w: &SimpleWord| {
        scalar::int(w.letters().iter().filter(|s| **s == Sym(0)).count() as i64)
    })
}

pub fn geometric(n: usize) -> SimpleSeries {
    SimpleSeries::tabulate(ab(), n, |w: &SimpleWord| scalar::ratio(1, 1 << w.len()))
}

/// Indicator of a*b.
pub fn a_star_b(n: usize) -> SimpleSeries {
    SimpleSeries::indicator(ab(), n, |w: &SimpleWord| {
        let l = w.letters();
        l.last() == Some(&Sym(1)) && l[..l.len() - 1].iter().all(|s| *s == Sym(0))
    })
}

/// Two pids, two labels, a counter state `(x, 1)` moved up by `a` and down by `b`.
pub struct Fixture {
    pub alphabet: Alphabet,
    pub space: StateSpace,
    pub chi: LearningSet,
    pub classifier: Classifier,
}

pub fn two_pid() -> Fixture {
    let alphabet = Alphabet::new(["u", "v"], ["lo", "hi"], ["a", "b"]).unwrap();
    let space = StateSpace::linear(
        alphabet.generators().clone(),
        vec![
            vec![vec![1.0, 0.0], vec![1.0, 1.0]],
            vec![vec![1.0, 0.0], vec![-1.0, 1.0]],
        ],
    )
    .unwrap();
    let chi = LearningSet::new(
        &alphabet,
        vec![
            Profile {
                label: Label(0),
                state: vec![0.0, 1.0],
            },
            Profile {
                label: Label(1),
                state: vec![1.0, 1.0],
            },
        ],
    )
    .unwrap();
    let classifier = Classifier::Lookup {
        coordinate: 0,
        cuts: vec![0.5],
        labels: vec![Label(0), Label(1)],
    };
    Fixture {
        alphabet,
        space,
        chi,
        classifier,
    }
}

pub const COMMANDS: [&str; 8] = [
    "rank", "realize", "verify", "nerode", "regular", "fit", "simulate", "decompose",
];

pub fn run(cmd: &str, config: &Path, out: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_seriesreal"));
    c.arg(cmd).arg("--config").arg(config);
    if let Some(o) = out {
        c.arg("--out").arg(o);
    }
    c.output().expect("binary runs")
}

pub fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

pub fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    write(dir, name, &serde_json::to_string_pretty(v).unwrap())
}

pub fn triple_docs(dir: &Path) -> Value {
    let fx = two_pid();
    write_json(dir, "space.json", &fx.space.to_json().unwrap());
    write_json(dir, "chi.json", &fx.chi.to_json());
    write_json(dir, "classifier.json", &fx.classifier.to_json(&fx.alphabet).unwrap());
    json!({
        "alphabet": AlphabetConfig::from(&fx.alphabet),
        "space": "space.json",
        "learning_set": "chi.json",
        "classifier": "classifier.json",
    })
}

pub fn with(base: &Value, extra: Value) -> Value {
    let mut v = base.clone();
    for (k, x) in extra.as_object().unwrap() {
        v[k] = x.clone();
    }
    v
}

/// Every command's config in one directory, built from the shared fixtures.
pub fn workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "count.jsonl", &format::emit_simple(&count_of_a(4)));
    let triple = triple_docs(d);
    let fx = two_pid();
    let p = seriesreal::profiles::series_from_triple(&fx.space, &fx.classifier, &fx.chi, 3).unwrap();
    write(d, "labeled.jsonl", &format::emit_labeled(&p));

    write_json(d, "rank.json", &json!({"series": "count.jsonl"}));
    write_json(d, "realize.json", &json!({"series": "count.jsonl"}));
    let r = seriesreal::realize::realize_from_hankel(&count_of_a(4), 2).unwrap();
    write_json(d, "realization.json", &r.to_json());
    write_json(d, "verify.json", &json!({"series": "count.jsonl", "realization": "realization.json"}));
    write_json(d, "verify_triple.json", &with(&triple, json!({"series": "labeled.jsonl"})));
    write_json(
        d,
        "nerode.json",
        &json!({
            "generators": ["a", "b"],
            "language": {"kind": "regex", "pattern": "b*(ab*ab*)*"},
            "max_prefix": 3,
            "max_suffix": 3,
        }),
    );
    write_json(d, "regular.json", &json!({"series": "labeled.jsonl", "bracket_depth": 2, "eval_len": 1}));
    write_json(
        d,
        "fit.json",
        &json!({
            "series": "labeled.jsonl",
            "space": "space.json",
            "learning_set": "chi.json",
            "family": {"kind": "lookup", "coordinate": 0, "labels": ["lo", "hi"], "lower": [-2.0], "upper": [3.0]},
            "budget": 200,
            "probe": {"probe_count": 16},
        }),
    );
    write_json(d, "simulate.json", &with(&triple, json!({"horizon": 2})));
    write_json(d, "decompose.json", &with(&triple, json!({"horizon": 2})));
    dir
}

pub fn config_for(d: &Path, cmd: &str) -> PathBuf {
    d.join(format!("{cmd}.json"))
}
