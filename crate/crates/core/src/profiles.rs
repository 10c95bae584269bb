//! Profiles, learning sets of profiles, classifiers and the event action on them.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::events::{Alphabet, Event, EventWord, EventsError, Generators, Label, LetterSet, Pid, Sym};
use crate::realize::LinearRealization;
use crate::scalar::{self, Scalar};
use crate::series::{LabeledSeries, SeriesError};

pub type State = Vec<f64>;

#[derive(Debug, Error, PartialEq)]
pub enum ProfilesError {
    #[error("learning set needs one profile per pid: expected {expected}, got {got}")]
    PidCount { expected: usize, got: usize },
    #[error("{what}: expected dimension {expected}, got {got}")]
    Dimension {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("state space acts on {space}, alphabet uses {alphabet}")]
    GeneratorMismatch { space: String, alphabet: String },
    #[error("classifier has no declarative form")]
    NotSerializable,
    #[error("malformed document: {0}")]
    Document(String),
    #[error(transparent)]
    Events(#[from] EventsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

type ActionFn = dyn Fn(&[f64], Sym) -> State + Send + Sync;

#[derive(Clone)]
enum Action {
    /// One `n×n` matrix per generator, acting on row vectors from the right.
    Linear(Vec<Vec<Vec<f64>>>),
    Custom(Arc<ActionFn>),
}

/// The space `X` profiles live in, with its right action by generators.
#[derive(Clone)]
pub struct StateSpace {
    generators: Generators,
    dim: usize,
    action: Action,
}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.action {
            Action::Linear(_) => "linear",
            Action::Custom(_) => "custom",
        };
        write!(f, "StateSpace({kind}, dim {}, {})", self.dim, self.generators.describe())
    }
}

fn row_times(v: &[f64], m: &[Vec<f64>]) -> State {
    let n = m.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| v.iter().zip(m).map(|(x, row)| x * row[j]).sum())
        .collect()
}

impl StateSpace {
    pub fn linear(generators: Generators, matrices: Vec<Vec<Vec<f64>>>) -> Result<Self, ProfilesError> {
        if matrices.len() != generators.len() {
            return Err(ProfilesError::Dimension {
                what: "action matrices".into(),
                expected: generators.len(),
                got: matrices.len(),
            });
        }
        let dim = matrices.first().map_or(0, Vec::len);
        for (i, m) in matrices.iter().enumerate() {
            let what = format!("action for {}", generators.name(Sym(i)));
            if m.len() != dim {
                return Err(ProfilesError::Dimension {
                    what,
                    expected: dim,
                    got: m.len(),
                });
            }
            if let Some(r) = m.iter().find(|r| r.len() != dim) {
                return Err(ProfilesError::Dimension {
                    what,
                    expected: dim,
                    got: r.len(),
                });
            }
        }
        Ok(Self {
            generators,
            dim,
            action: Action::Linear(matrices),
        })
    }

    /// Every generator acts as the identity.
    pub fn trivial(generators: Generators, dim: usize) -> Self {
        let id: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let matrices = vec![id; generators.len()];
        Self {
            generators,
            dim,
            action: Action::Linear(matrices),
        }
    }

    /// The matrices of a realization, rounded to doubles.
    pub fn from_realization(r: &LinearRealization) -> Self {
        let matrices = r
            .generators()
            .letters()
            .iter()
            .map(|&s| {
                r.action(s)
                    .to_rows()
                    .iter()
                    .map(|row| row.iter().map(scalar::to_f64).collect())
                    .collect()
            })
            .collect();
        Self {
            generators: r.generators().clone(),
            dim: r.dim(),
            action: Action::Linear(matrices),
        }
    }

    /// Arbitrary update rule; it must map `dim`-vectors to `dim`-vectors.
    pub fn custom(
        generators: Generators,
        dim: usize,
        act: impl Fn(&[f64], Sym) -> State + Send + Sync + 'static,
    ) -> Self {
        Self {
            generators,
            dim,
            action: Action::Custom(Arc::new(act)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    pub fn matrices(&self) -> Option<&[Vec<Vec<f64>>]> {
        match &self.action {
            Action::Linear(m) => Some(m),
            Action::Custom(_) => None,
        }
    }

    /// `x · s`.
    pub fn act(&self, x: &[f64], s: Sym) -> State {
        match &self.action {
            Action::Linear(m) => row_times(x, &m[s.0]),
            Action::Custom(f) => {
                let y = f(x, s);
                assert_eq!(y.len(), self.dim, "custom action changed the state dimension");
                y
            }
        }
    }

    pub fn check_state(&self, x: &[f64]) -> Result<(), ProfilesError> {
        if x.len() != self.dim {
            return Err(ProfilesError::Dimension {
                what: "state".into(),
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// JSON `{"kind":"linear","action":{sym:[[..]]}}`; custom spaces have no document form.
    pub fn to_json(&self) -> Result<Value, ProfilesError> {
        let m = self.matrices().ok_or(ProfilesError::NotSerializable)?;
        let action: Map<String, Value> = self
            .generators
            .names()
            .iter()
            .zip(m)
            .map(|(n, mat)| (n.clone(), serde_json::json!(mat)))
            .collect();
        Ok(serde_json::json!({"kind": "linear", "action": action}))
    }

    pub fn from_json(generators: &Generators, v: &Value) -> Result<Self, ProfilesError> {
        let kind = v.get("kind").and_then(Value::as_str).unwrap_or("linear");
        match kind {
            "linear" => {
                let action = v
                    .get("action")
                    .and_then(Value::as_object)
                    .ok_or_else(|| ProfilesError::Document("linear space needs an `action` object".into()))?;
                if let Some(k) = action.keys().find(|k| generators.sym(k).is_err()) {
                    return Err(EventsError::UnknownSymbol(k.clone()).into());
                }
                let mut matrices = Vec::new();
                for name in generators.names() {
                    let raw = action
                        .get(name)
                        .ok_or_else(|| ProfilesError::Document(format!("no action for generator {name}")))?;
                    let rows: Vec<Vec<Number>> = serde_json::from_value(raw.clone())
                        .map_err(|e| ProfilesError::Document(e.to_string()))?;
                    let rows = rows
                        .into_iter()
                        .map(|r| r.into_iter().map(Number::value).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    matrices.push(rows);
                }
                Self::linear(generators.clone(), matrices)
            }
            "trivial" => {
                let dim = v
                    .get("dim")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| ProfilesError::Document("trivial space needs `dim`".into()))?;
                Ok(Self::trivial(generators.clone(), dim as usize))
            }
            other => Err(ProfilesError::Document(format!("unknown state space kind `{other}`"))),
        }
    }
}

/// A JSON number, or an exact rational written as a string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn value(self) -> Result<f64, ProfilesError> {
        match self {
            Number::Float(x) => Ok(x),
            Number::Text(t) => scalar::parse(&t)
                .map(|q| scalar::to_f64(&q))
                .map_err(|e| ProfilesError::Document(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub label: Label,
    pub state: State,
}

/// `χ : I → L × X`, one profile per pid.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningSet {
    alphabet: Alphabet,
    profiles: Vec<Profile>,
}

impl LearningSet {
    /// `profiles[i]` belongs to pid `i`.
    pub fn new(alphabet: &Alphabet, profiles: Vec<Profile>) -> Result<Self, ProfilesError> {
        if profiles.len() != alphabet.pid_count() {
            return Err(ProfilesError::PidCount {
                expected: alphabet.pid_count(),
                got: profiles.len(),
            });
        }
        for p in &profiles {
            alphabet.check_label(p.label)?;
        }
        if let Some(p) = profiles.iter().find(|p| p.state.len() != profiles[0].state.len()) {
            return Err(ProfilesError::Dimension {
                what: "profile state".into(),
                expected: profiles[0].state.len(),
                got: p.state.len(),
            });
        }
        Ok(Self {
            alphabet: alphabet.clone(),
            profiles,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn profile(&self, pid: Pid) -> &Profile {
        &self.profiles[pid.0]
    }

    /// Every profile state must live in `space`, which must act by this alphabet's generators.
    pub fn check_space(&self, space: &StateSpace) -> Result<(), ProfilesError> {
        if space.generators() != self.alphabet.generators() {
            return Err(ProfilesError::GeneratorMismatch {
                space: space.generators().describe(),
                alphabet: self.alphabet.generators().describe(),
            });
        }
        self.profiles.iter().try_for_each(|p| space.check_state(&p.state))
    }

    /// `{pid: {"label": ..., "state": [...]}}` in pid order.
    pub fn to_json(&self) -> Value {
        let m: Map<String, Value> = self
            .profiles
            .iter()
            .enumerate()
            .map(|(i, p)| {
                (
                    self.alphabet.pid_name(Pid(i)).to_string(),
                    serde_json::json!({
                        "label": self.alphabet.label_name(p.label),
                        "state": p.state,
                    }),
                )
            })
            .collect();
        Value::Object(m)
    }

    pub fn from_json(alphabet: &Alphabet, v: &Value) -> Result<Self, ProfilesError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            label: String,
            state: Vec<Number>,
        }
        let obj = v
            .as_object()
            .ok_or_else(|| ProfilesError::Document("learning set must be an object keyed by pid".into()))?;
        let mut slots: Vec<Option<Profile>> = vec![None; alphabet.pid_count()];
        for (pid, entry) in obj {
            let i = alphabet.pid(pid)?;
            let doc: Doc = serde_json::from_value(entry.clone())
                .map_err(|e| ProfilesError::Document(format!("pid {pid}: {e}")))?;
            let state = doc
                .state
                .into_iter()
                .map(Number::value)
                .collect::<Result<Vec<_>, _>>()?;
            slots[i.0] = Some(Profile {
                label: alphabet.label(&doc.label)?,
                state,
            });
        }
        let got = slots.iter().filter(|s| s.is_some()).count();
        let profiles: Option<Vec<Profile>> = slots.into_iter().collect();
        let profiles = profiles.ok_or(ProfilesError::PidCount {
            expected: alphabet.pid_count(),
            got,
        })?;
        Self::new(alphabet, profiles)
    }
}

/// A classifier's answer: a label, or the distinguished `⋆` that matches no label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prediction {
    Label(Label),
    Star,
}

type DecideFn = dyn Fn(&[f64]) -> Label + Send + Sync;

/// `f : X → L`.
#[derive(Clone)]
pub enum Classifier {
    Constant(Label),
    /// Score `w_ℓ · x + b_ℓ` per label; the highest score wins, ties to the smallest label.
    LinearThreshold { weights: Vec<Vec<f64>>, bias: Vec<f64> },
    /// Interval table on one coordinate: `labels[k]` where `k` counts the cuts `≤ x[coordinate]`.
    Lookup {
        coordinate: usize,
        cuts: Vec<f64>,
        labels: Vec<Label>,
    },
    /// `label` where `inner` says `label`, `⋆` elsewhere.
    Restricted { inner: Box<Classifier>, label: Label },
    Custom(Arc<DecideFn>),
}

impl fmt::Debug for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classifier::Constant(l) => write!(f, "Constant({l:?})"),
            Classifier::LinearThreshold { weights, bias } => f
                .debug_struct("LinearThreshold")
                .field("weights", weights)
                .field("bias", bias)
                .finish(),
            Classifier::Lookup {
                coordinate,
                cuts,
                labels,
            } => f
                .debug_struct("Lookup")
                .field("coordinate", coordinate)
                .field("cuts", cuts)
                .field("labels", labels)
                .finish(),
            Classifier::Restricted { inner, label } => write!(f, "Restricted({inner:?}, {label:?})"),
            Classifier::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Classifier {
    pub fn custom(decide: impl Fn(&[f64]) -> Label + Send + Sync + 'static) -> Self {
        Classifier::Custom(Arc::new(decide))
    }

    pub fn predict(&self, x: &[f64]) -> Prediction {
        match self {
            Classifier::Constant(l) => Prediction::Label(*l),
            Classifier::LinearThreshold { weights, bias } => {
                let mut best = 0;
                let mut best_score = f64::NEG_INFINITY;
                for (i, (w, b)) in weights.iter().zip(bias).enumerate() {
                    let score: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + b;
                    if score > best_score {
                        best = i;
                        best_score = score;
                    }
                }
                Prediction::Label(Label(best))
            }
            Classifier::Lookup {
                coordinate,
                cuts,
                labels,
            } => {
                let v = x[*coordinate];
                let k = cuts.iter().filter(|&&c| c <= v).count();
                Prediction::Label(labels[k])
            }
            Classifier::Restricted { inner, label } => match inner.predict(x) {
                Prediction::Label(l) if l == *label => Prediction::Label(l),
                _ => Prediction::Star,
            },
            Classifier::Custom(f) => Prediction::Label(f(x)),
        }
    }

    /// Shape checks against a state dimension and label count.
    pub fn check(&self, dim: usize, label_count: usize) -> Result<(), ProfilesError> {
        let label_ok = |l: &Label| {
            if l.0 < label_count {
                Ok(())
            } else {
                Err(EventsError::UnknownLabel(format!("#{}", l.0)))
            }
        };
        match self {
            Classifier::Constant(l) => label_ok(l)?,
            Classifier::LinearThreshold { weights, bias } => {
                for (what, got) in [("weight rows", weights.len()), ("bias entries", bias.len())] {
                    if got != label_count {
                        return Err(ProfilesError::Dimension {
                            what: what.into(),
                            expected: label_count,
                            got,
                        });
                    }
                }
                if let Some(w) = weights.iter().find(|w| w.len() != dim) {
                    return Err(ProfilesError::Dimension {
                        what: "weight vector".into(),
                        expected: dim,
                        got: w.len(),
                    });
                }
            }
            Classifier::Lookup {
                coordinate,
                cuts,
                labels,
            } => {
                if *coordinate >= dim {
                    return Err(ProfilesError::Dimension {
                        what: "lookup coordinate".into(),
                        expected: dim,
                        got: coordinate + 1,
                    });
                }
                if labels.len() != cuts.len() + 1 {
                    return Err(ProfilesError::Dimension {
                        what: "lookup labels".into(),
                        expected: cuts.len() + 1,
                        got: labels.len(),
                    });
                }
                labels.iter().try_for_each(label_ok)?;
            }
            Classifier::Restricted { inner, label } => {
                label_ok(label)?;
                inner.check(dim, label_count)?;
            }
            Classifier::Custom(_) => {}
        }
        Ok(())
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Result<Value, ProfilesError> {
        let name = |l: &Label| alphabet.label_name(*l).to_string();
        Ok(match self {
            Classifier::Constant(l) => serde_json::json!({"kind": "constant", "label": name(l)}),
            Classifier::LinearThreshold { weights, bias } => {
                let ws: Map<String, Value> = alphabet
                    .labels()
                    .zip(weights.iter().zip(bias))
                    .map(|(l, (w, b))| (name(&l), serde_json::json!({"weights": w, "bias": b})))
                    .collect();
                serde_json::json!({"kind": "linear_threshold", "scores": ws})
            }
            Classifier::Lookup {
                coordinate,
                cuts,
                labels,
            } => serde_json::json!({
                "kind": "lookup",
                "coordinate": coordinate,
                "cuts": cuts,
                "labels": labels.iter().map(name).collect::<Vec<_>>(),
            }),
            Classifier::Restricted { inner, label } => serde_json::json!({
                "kind": "restricted",
                "label": name(label),
                "inner": inner.to_json(alphabet)?,
            }),
            Classifier::Custom(_) => return Err(ProfilesError::NotSerializable),
        })
    }

    pub fn from_json(alphabet: &Alphabet, v: &Value) -> Result<Self, ProfilesError> {
        #[derive(Deserialize)]
        #[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
        enum Doc {
            Constant {
                label: String,
            },
            LinearThreshold {
                scores: score_doc::Scores,
            },
            Lookup {
                coordinate: usize,
                cuts: Vec<f64>,
                labels: Vec<String>,
            },
            Restricted {
                label: String,
                inner: Value,
            },
        }
        let doc: Doc = serde_json::from_value(v.clone()).map_err(|e| ProfilesError::Document(e.to_string()))?;
        Ok(match doc {
            Doc::Constant { label } => Classifier::Constant(alphabet.label(&label)?),
            Doc::LinearThreshold { scores } => {
                if let Some(k) = scores.0.keys().find(|k| alphabet.label(k).is_err()) {
                    return Err(EventsError::UnknownLabel(k.clone()).into());
                }
                let mut weights = Vec::new();
                let mut bias = Vec::new();
                for name in alphabet.label_names() {
                    let s = scores
                        .0
                        .get(name)
                        .ok_or_else(|| ProfilesError::Document(format!("no score for label {name}")))?;
                    weights.push(s.weights.clone());
                    bias.push(s.bias);
                }
                Classifier::LinearThreshold { weights, bias }
            }
            Doc::Lookup {
                coordinate,
                cuts,
                labels,
            } => Classifier::Lookup {
                coordinate,
                cuts,
                labels: labels
                    .iter()
                    .map(|l| alphabet.label(l))
                    .collect::<Result<_, _>>()?,
            },
            Doc::Restricted { label, inner } => Classifier::Restricted {
                inner: Box::new(Classifier::from_json(alphabet, &inner)?),
                label: alphabet.label(&label)?,
            },
        })
    }
}

mod score_doc {
    use std::collections::BTreeMap;

    use serde::Deserialize;

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Score {
        pub weights: Vec<f64>,
        #[serde(default)]
        pub bias: f64,
    }

    #[derive(Debug, Deserialize)]
    pub struct Scores(pub BTreeMap<String, Score>);
}

/// `χ · d`: the acting pid takes the event's label and moves its state by the symbol.
pub fn act_event(space: &StateSpace, chi: &LearningSet, d: &Event) -> LearningSet {
    let mut out = chi.clone();
    let p = &mut out.profiles[d.pid.0];
    p.label = d.label;
    p.state = space.act(&p.state, d.symbol);
    out
}

/// `χ · h`, folding events left to right.
pub fn act_word(space: &StateSpace, chi: &LearningSet, h: &EventWord) -> LearningSet {
    h.letters()
        .iter()
        .fold(chi.clone(), |acc, d| act_event(space, &acc, d))
}

/// Number of pids whose current label `f` reproduces.
pub fn agreement_count(f: &Classifier, chi: &LearningSet) -> usize {
    chi.profiles
        .iter()
        .filter(|p| f.predict(&p.state) == Prediction::Label(p.label))
        .count()
}

/// `⟪f, χ⟫ = |{i : f(x_i) = ℓ_i}| / |I|`, exactly.
pub fn pairing(f: &Classifier, chi: &LearningSet) -> Scalar {
    scalar::ratio(agreement_count(f, chi) as i64, chi.profiles.len() as i64)
}

/// Every word of length `≤ n` in length-lex order, paired with `χ · h`.
pub fn orbit(space: &StateSpace, chi: &LearningSet, n: usize) -> Vec<(EventWord, LearningSet)> {
    let letters = chi.alphabet.letters();
    let mut out = Vec::new();
    let mut frontier = vec![(EventWord::empty(), chi.clone())];
    for len in 0..=n {
        if len == n {
            out.append(&mut frontier);
            break;
        }
        let next: Vec<_> = frontier
            .par_iter()
            .flat_map_iter(|(w, x)| letters.iter().map(move |d| (w.appended(*d), act_event(space, x, d))))
            .collect();
        out.append(&mut frontier);
        frontier = next;
    }
    out
}

/// `p_h = ⟪f, χ·h⟫` for all `|h| ≤ n`.
pub fn series_from_triple(
    space: &StateSpace,
    f: &Classifier,
    chi: &LearningSet,
    n: usize,
) -> Result<LabeledSeries, ProfilesError> {
    chi.check_space(space)?;
    let entries: Vec<_> = orbit(space, chi, n)
        .into_par_iter()
        .map(|(h, x)| (h, pairing(f, &x)))
        .collect();
    Ok(LabeledSeries::from_entries_unchecked(chi.alphabet.clone(), n, entries))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationViolation {
    pub word: Vec<[String; 3]>,
    #[serde(with = "scalar::serde_text")]
    pub expected: Scalar,
    #[serde(with = "scalar::serde_text")]
    pub actual: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub horizon: usize,
    pub checked: usize,
    pub violations: Vec<RealizationViolation>,
    #[serde(with = "scalar::serde_text")]
    pub max_deviation: Scalar,
}

impl RealizationReport {
    pub fn realizes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compare `p` against `(X, f, χ)` on every word of length `≤ n`.
pub fn is_realization(
    space: &StateSpace,
    f: &Classifier,
    chi: &LearningSet,
    p: &LabeledSeries,
    n: usize,
) -> Result<RealizationReport, ProfilesError> {
    chi.check_space(space)?;
    if p.space() != chi.alphabet() {
        return Err(EventsError::AlphabetMismatch {
            left: p.space().describe(),
            right: chi.alphabet().describe(),
        }
        .into());
    }
    if p.truncation() < n {
        return Err(SeriesError::TruncationExceeded {
            len: n,
            truncation: p.truncation(),
        }
        .into());
    }
    let words = orbit(space, chi, n);
    let checked = words.len();
    let diffs: Vec<_> = words
        .into_par_iter()
        .filter_map(|(h, x)| {
            let actual = pairing(f, &x);
            let expected = p.coeff(&h);
            (actual != expected).then_some((h, expected, actual))
        })
        .collect();
    let mut max_deviation = Scalar::zero();
    let violations = diffs
        .into_iter()
        .map(|(h, expected, actual)| {
            let d = (&expected - &actual).abs();
            if d > max_deviation {
                max_deviation = d;
            }
            RealizationViolation {
                word: h.letters().iter().map(|e| chi.alphabet.event_names(e)).collect(),
                expected,
                actual,
            }
        })
        .collect();
    Ok(RealizationReport {
        horizon: n,
        checked,
        violations,
        max_deviation,
    })
}
