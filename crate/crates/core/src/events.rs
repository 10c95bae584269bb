//! Labeled events `(pid, label, symbol)`, the alphabets they live in, and the
//! passage between labeled series and simple (symbol-only) series.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{LabeledSeries, Series, SimpleSeries};
use crate::word::{Letter, Word};

/// Index of a profile identifier within an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pid(pub usize);

/// Index of a label within an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub usize);

/// Index of a generator symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(pub usize);

/// One labeled event. Field order gives the canonical letter order: pid, then label, then symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub pid: Pid,
    pub label: Label,
    pub symbol: Sym,
}

pub type EventWord = Word<Event>;
pub type SimpleWord = Word<Sym>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventsError {
    #[error("the {0} set must be nonempty")]
    EmptySet(&'static str),
    #[error("duplicate {kind} identifier `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("unknown pid `{0}`")]
    UnknownPid(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unknown generator symbol `{0}`")]
    UnknownSymbol(String),
    #[error("event {event:?} is not a member of alphabet {alphabet}")]
    ForeignEvent { event: Event, alphabet: String },
    #[error("symbol {symbol:?} is not a member of generators {generators}")]
    ForeignSymbol { symbol: Sym, generators: String },
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },
}

/// An ordered set of letters a series or automaton is defined over.
pub trait LetterSet: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Letter: Letter;

    /// All letters, sorted.
    fn letters(&self) -> &[Self::Letter];

    fn contains(&self, letter: &Self::Letter) -> bool {
        self.letters().binary_search(letter).is_ok()
    }

    /// Human-readable summary used in error messages.
    fn describe(&self) -> String;
}

#[derive(Debug)]
struct Names {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    fn new(kind: &'static str, names: Vec<String>) -> Result<Self, EventsError> {
        if names.is_empty() {
            return Err(EventsError::EmptySet(kind));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(EventsError::Duplicate {
                    kind,
                    name: n.clone(),
                });
            }
        }
        Ok(Self { names, index })
    }
}

impl PartialEq for Names {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

/// The generator set `S₀` of the free monoid `S`.
#[derive(Clone)]
pub struct Generators {
    names: Arc<Names>,
    letters: Arc<[Sym]>,
}

impl PartialEq for Generators {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for Generators {}

impl fmt::Debug for Generators {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generators{:?}", self.names.names)
    }
}

impl Generators {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, EventsError> {
        let names = Names::new("generator", names.into_iter().map(Into::into).collect())?;
        let letters = (0..names.names.len()).map(Sym).collect();
        Ok(Self {
            names: Arc::new(names),
            letters,
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names.names
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names.names[s.0]
    }

    pub fn sym(&self, name: &str) -> Result<Sym, EventsError> {
        self.names
            .index
            .get(name)
            .map(|&i| Sym(i))
            .ok_or_else(|| EventsError::UnknownSymbol(name.to_string()))
    }

    pub fn word<S: AsRef<str>>(&self, names: &[S]) -> Result<SimpleWord, EventsError> {
        names.iter().map(|n| self.sym(n.as_ref())).collect()
    }

    /// Parses a word written as one character per symbol, e.g. `"abba"`.
    /// Only meaningful when every generator name is a single character.
    pub fn parse_chars(&self, text: &str) -> Result<SimpleWord, EventsError> {
        text.chars()
            .map(|c| self.sym(c.encode_utf8(&mut [0; 4])))
            .collect()
    }

    pub fn render(&self, w: &SimpleWord) -> Vec<String> {
        w.letters().iter().map(|&s| self.name(s).to_string()).collect()
    }

    pub fn check(&self, w: &SimpleWord) -> Result<(), EventsError> {
        match w.letters().iter().find(|s| s.0 >= self.len()) {
            Some(&symbol) => Err(EventsError::ForeignSymbol {
                symbol,
                generators: self.describe(),
            }),
            None => Ok(()),
        }
    }
}

impl LetterSet for Generators {
    type Letter = Sym;

    fn letters(&self) -> &[Sym] {
        &self.letters
    }

    fn describe(&self) -> String {
        format!("{{{}}}", self.names.names.join(","))
    }
}

struct AlphabetInner {
    pids: Names,
    labels: Names,
    generators: Generators,
    events: Vec<Event>,
}

/// The event space `I × L × S₀`: finite pids, finite labels, finite generators.
/// Cheap to clone; identifiers are interned to dense indices in declaration order.
#[derive(Clone)]
pub struct Alphabet(Arc<AlphabetInner>);

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.pids == other.0.pids
                && self.0.labels == other.0.labels
                && self.0.generators == other.0.generators)
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{}", self.describe())
    }
}

/// JSON shape of an alphabet declaration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetConfig {
    pub pids: Vec<String>,
    pub labels: Vec<String>,
    pub generators: Vec<String>,
}

impl TryFrom<AlphabetConfig> for Alphabet {
    type Error = EventsError;

    fn try_from(c: AlphabetConfig) -> Result<Self, EventsError> {
        Alphabet::new(c.pids, c.labels, c.generators)
    }
}

impl From<&Alphabet> for AlphabetConfig {
    fn from(a: &Alphabet) -> Self {
        AlphabetConfig {
            pids: a.pid_names().to_vec(),
            labels: a.label_names().to_vec(),
            generators: a.generators().names().to_vec(),
        }
    }
}

impl Alphabet {
    pub fn new<P, L, G>(
        pids: impl IntoIterator<Item = P>,
        labels: impl IntoIterator<Item = L>,
        generators: impl IntoIterator<Item = G>,
    ) -> Result<Self, EventsError>
    where
        P: Into<String>,
        L: Into<String>,
        G: Into<String>,
    {
        let pids = Names::new("pid", pids.into_iter().map(Into::into).collect())?;
        let labels = Names::new("label", labels.into_iter().map(Into::into).collect())?;
        let generators = Generators::new(generators)?;
        let mut events = Vec::with_capacity(pids.names.len() * labels.names.len() * generators.len());
        for p in 0..pids.names.len() {
            for l in 0..labels.names.len() {
                for s in 0..generators.len() {
                    events.push(Event {
                        pid: Pid(p),
                        label: Label(l),
                        symbol: Sym(s),
                    });
                }
            }
        }
        Ok(Self(Arc::new(AlphabetInner {
            pids,
            labels,
            generators,
            events,
        })))
    }

    pub fn pid_names(&self) -> &[String] {
        &self.0.pids.names
    }

    pub fn label_names(&self) -> &[String] {
        &self.0.labels.names
    }

    pub fn generators(&self) -> &Generators {
        &self.0.generators
    }

    pub fn pid_count(&self) -> usize {
        self.0.pids.names.len()
    }

    pub fn label_count(&self) -> usize {
        self.0.labels.names.len()
    }

    pub fn pids(&self) -> impl Iterator<Item = Pid> {
        (0..self.pid_count()).map(Pid)
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        (0..self.label_count()).map(Label)
    }

    pub fn pid(&self, name: &str) -> Result<Pid, EventsError> {
        self.0
            .pids
            .index
            .get(name)
            .map(|&i| Pid(i))
            .ok_or_else(|| EventsError::UnknownPid(name.to_string()))
    }

    pub fn label(&self, name: &str) -> Result<Label, EventsError> {
        self.0
            .labels
            .index
            .get(name)
            .map(|&i| Label(i))
            .ok_or_else(|| EventsError::UnknownLabel(name.to_string()))
    }

    pub fn pid_name(&self, p: Pid) -> &str {
        &self.0.pids.names[p.0]
    }

    pub fn label_name(&self, l: Label) -> &str {
        &self.0.labels.names[l.0]
    }

    pub fn check_pid(&self, p: Pid) -> Result<Pid, EventsError> {
        if p.0 < self.pid_count() {
            Ok(p)
        } else {
            Err(EventsError::UnknownPid(format!("#{}", p.0)))
        }
    }

    pub fn check_label(&self, l: Label) -> Result<Label, EventsError> {
        if l.0 < self.label_count() {
            Ok(l)
        } else {
            Err(EventsError::UnknownLabel(format!("#{}", l.0)))
        }
    }

    /// Builds an event from identifier strings.
    pub fn event(&self, pid: &str, label: &str, symbol: &str) -> Result<Event, EventsError> {
        Ok(Event {
            pid: self.pid(pid)?,
            label: self.label(label)?,
            symbol: self.0.generators.sym(symbol)?,
        })
    }

    pub fn event_names(&self, e: &Event) -> [String; 3] {
        [
            self.pid_name(e.pid).to_string(),
            self.label_name(e.label).to_string(),
            self.0.generators.name(e.symbol).to_string(),
        ]
    }

    pub fn check(&self, w: &EventWord) -> Result<(), EventsError> {
        for e in w.letters() {
            if !self.contains(e) {
                return Err(EventsError::ForeignEvent {
                    event: *e,
                    alphabet: self.describe(),
                });
            }
        }
        Ok(())
    }

    /// `(i,ℓ,s₁)(i,ℓ,s₂)…(i,ℓ,s_k)`; the empty simple word lifts to the empty word.
    pub fn lift(&self, pid: Pid, label: Label, s: &SimpleWord) -> Result<EventWord, EventsError> {
        self.check_pid(pid)?;
        self.check_label(label)?;
        self.0.generators.check(s)?;
        Ok(s.letters()
            .iter()
            .map(|&symbol| Event { pid, label, symbol })
            .collect())
    }
}

impl LetterSet for Alphabet {
    type Letter = Event;

    fn letters(&self) -> &[Event] {
        &self.0.events
    }

    fn contains(&self, e: &Event) -> bool {
        e.pid.0 < self.pid_count()
            && e.label.0 < self.label_count()
            && e.symbol.0 < self.0.generators.len()
    }

    fn describe(&self) -> String {
        format!(
            "{{pids: [{}], labels: [{}], generators: [{}]}}",
            self.pid_names().join(","),
            self.label_names().join(","),
            self.0.generators.names().join(",")
        )
    }
}

/// A word together with the alphabet it was written over.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledWord {
    pub alphabet: Alphabet,
    pub word: EventWord,
}

impl LabeledWord {
    pub fn new(alphabet: &Alphabet, word: EventWord) -> Result<Self, EventsError> {
        alphabet.check(&word)?;
        Ok(Self {
            alphabet: alphabet.clone(),
            word,
        })
    }

    pub fn empty(alphabet: &Alphabet) -> Self {
        Self {
            alphabet: alphabet.clone(),
            word: Word::empty(),
        }
    }

    /// Concatenation; both operands must share an alphabet.
    pub fn concat(&self, other: &LabeledWord) -> Result<LabeledWord, EventsError> {
        if self.alphabet != other.alphabet {
            return Err(EventsError::AlphabetMismatch {
                left: self.alphabet.describe(),
                right: other.alphabet.describe(),
            });
        }
        Ok(LabeledWord {
            alphabet: self.alphabet.clone(),
            word: self.word.concat(&other.word),
        })
    }
}

/// `π_(i,ℓ)`: the simple series `q(s₁…s_k) = p((i,ℓ,s₁)…(i,ℓ,s_k))`, same truncation as `p`.
pub fn project(p: &LabeledSeries, pid: Pid, label: Label) -> Result<SimpleSeries, EventsError> {
    let alphabet = p.space();
    alphabet.check_pid(pid)?;
    alphabet.check_label(label)?;
    let entries = p.iter().filter_map(|(w, c)| {
        w.letters()
            .iter()
            .all(|e| e.pid == pid && e.label == label)
            .then(|| {
                let s: SimpleWord = w.letters().iter().map(|e| e.symbol).collect();
                (s, c.clone())
            })
    });
    Ok(Series::from_entries_unchecked(
        alphabet.generators().clone(),
        p.truncation(),
        entries,
    ))
}

/// Places the coefficients of a simple series on the lifted words of `(pid, label)`.
pub fn embed(
    q: &SimpleSeries,
    alphabet: &Alphabet,
    pid: Pid,
    label: Label,
) -> Result<LabeledSeries, EventsError> {
    if q.space() != alphabet.generators() {
        return Err(EventsError::AlphabetMismatch {
            left: q.space().describe(),
            right: alphabet.generators().describe(),
        });
    }
    let mut entries = Vec::with_capacity(q.support_len());
    for (s, c) in q.iter() {
        entries.push((alphabet.lift(pid, label, s)?, c.clone()));
    }
    Ok(Series::from_entries_unchecked(
        alphabet.clone(),
        q.truncation(),
        entries,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn ab() -> Alphabet {
        Alphabet::new(["1", "2"], ["a", "b"], ["s", "t", "u"]).unwrap()
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(
            Alphabet::new(Vec::<String>::new(), ["a"], ["s"]).unwrap_err(),
            EventsError::EmptySet("pid")
        );
        assert!(matches!(
            Alphabet::new(["1", "1"], ["a"], ["s"]),
            Err(EventsError::Duplicate { kind: "pid", .. })
        ));
        let a = ab();
        assert_eq!(a.letters().len(), 12);
        assert!(a.letters().windows(2).all(|w| w[0] < w[1]));
        assert!(a.event("3", "a", "s").is_err());
        assert!(a.event("1", "c", "s").is_err());
        assert!(a.event("1", "a", "v").is_err());
    }

    #[test]
    fn concat_examples() {
        let a = ab();
        let w = LabeledWord::new(
            &a,
            Word::from(vec![a.event("1", "a", "s").unwrap(), a.event("2", "b", "t").unwrap()]),
        )
        .unwrap();
        let v = LabeledWord::new(&a, Word::single(a.event("1", "a", "u").unwrap())).unwrap();
        let eps = LabeledWord::empty(&a);
        assert_eq!(eps.concat(&w).unwrap(), w);
        assert_eq!(w.concat(&eps).unwrap(), w);
        let wv = w.concat(&v).unwrap();
        assert_eq!(
            wv.word.letters().iter().map(|e| a.event_names(e)).collect::<Vec<_>>(),
            vec![
                ["1", "a", "s"].map(String::from),
                ["2", "b", "t"].map(String::from),
                ["1", "a", "u"].map(String::from)
            ]
        );
    }

    #[test]
    fn concat_rejects_foreign_alphabet() {
        let a = ab();
        let b = Alphabet::new(["1"], ["a"], ["s"]).unwrap();
        let err = LabeledWord::empty(&a)
            .concat(&LabeledWord::empty(&b))
            .unwrap_err();
        match err {
            EventsError::AlphabetMismatch { left, right } => {
                assert!(left.contains("1,2"));
                assert!(right.contains("pids: [1]"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lift_examples() {
        let a = ab();
        let g = a.generators();
        let (p1, p2) = (a.pid("1").unwrap(), a.pid("2").unwrap());
        let (la, lb) = (a.label("a").unwrap(), a.label("b").unwrap());
        let st = g.word(&["s", "t"]).unwrap();
        assert_eq!(
            a.lift(p1, la, &st).unwrap(),
            Word::from(vec![a.event("1", "a", "s").unwrap(), a.event("1", "a", "t").unwrap()])
        );
        assert_eq!(a.lift(p1, la, &Word::empty()).unwrap(), Word::empty());
        assert_eq!(
            a.lift(p2, lb, &g.word(&["s"]).unwrap()).unwrap(),
            Word::single(a.event("2", "b", "s").unwrap())
        );
        assert!(a.lift(Pid(7), la, &st).is_err());
        assert!(a.lift(p1, Label(9), &st).is_err());
    }

    #[test]
    fn project_examples() {
        let a = ab();
        let d = a.event("1", "a", "s").unwrap();
        let p = Series::indicator(a.clone(), 2, |w: &EventWord| *w == Word::single(d));
        let s = a.generators().word(&["s"]).unwrap();
        let q = project(&p, a.pid("1").unwrap(), a.label("a").unwrap()).unwrap();
        assert_eq!(q.evaluate(&s).unwrap(), int(1));
        let q2 = project(&p, a.pid("2").unwrap(), a.label("a").unwrap()).unwrap();
        assert_eq!(q2.evaluate(&s).unwrap(), int(0));
        let z = Series::zero(a.clone(), 3);
        for pid in a.pids() {
            for label in a.labels() {
                assert!(project(&z, pid, label).unwrap().is_zero());
            }
        }
        assert!(project(&z, Pid(5), Label(0)).is_err());
    }

    #[test]
    fn project_ignores_mixed_words() {
        let a = ab();
        let (p1, la) = (a.pid("1").unwrap(), a.label("a").unwrap());
        let mixed = Word::from(vec![a.event("1", "a", "s").unwrap(), a.event("2", "a", "s").unwrap()]);
        let p = Series::from_entries(a.clone(), 2, [(mixed, ratio(3, 4))]).unwrap();
        assert!(project(&p, p1, la).unwrap().is_zero());
    }
}
