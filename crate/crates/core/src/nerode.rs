//! Myhill–Nerode construction at finite depth.
//!
//! Two prefixes are equivalent when they agree on membership for every tested
//! suffix. The classes become the states of a deterministic automaton; when
//! the tested depth is too shallow to close the transition table, the
//! construction fails with [`NerodeError::InsufficientDepth`] instead of
//! guessing.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::events::{Generators, LetterSet, SimpleWord, Sym};
use crate::series::{Series, SimpleSeries};
use crate::word::{words_up_to, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NerodeError {
    #[error("insufficient depth: successor {word} matches no class; raise the prefix/suffix depth")]
    InsufficientDepth { word: String },
    #[error("automaton disagrees with the language on {word}; raise the prefix/suffix depth")]
    LanguageMismatch { word: String },
    #[error("invalid automaton: {0}")]
    InvalidDfa(String),
}

/// The observed equivalence classes of prefixes up to a fixed depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualTable {
    generators: Generators,
    max_prefix: usize,
    max_suffix: usize,
    suffixes: Vec<SimpleWord>,
    representatives: Vec<SimpleWord>,
    signatures: Vec<Vec<bool>>,
    /// Class index of every tested prefix, in length-lex order.
    prefix_classes: Vec<(SimpleWord, usize)>,
}

impl ResidualTable {
    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    pub fn max_prefix(&self) -> usize {
        self.max_prefix
    }

    pub fn max_suffix(&self) -> usize {
        self.max_suffix
    }

    pub fn suffixes(&self) -> &[SimpleWord] {
        &self.suffixes
    }

    /// Length-lex least member of each class, in order of first appearance.
    pub fn representatives(&self) -> &[SimpleWord] {
        &self.representatives
    }

    pub fn signatures(&self) -> &[Vec<bool>] {
        &self.signatures
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn class_of(&self, prefix: &SimpleWord) -> Option<usize> {
        self.prefix_classes
            .binary_search_by(|(w, _)| w.cmp(prefix))
            .ok()
            .map(|i| self.prefix_classes[i].1)
    }

    /// Pairs `(u, v, s)` of tested prefixes with `u ~ v` but `u·s ≁ v·s`.
    /// Only prefixes whose one-letter extensions were also tested are compared.
    pub fn right_invariance_violations(&self) -> Vec<(SimpleWord, SimpleWord, Sym)> {
        let inner: Vec<&(SimpleWord, usize)> = self
            .prefix_classes
            .iter()
            .filter(|(w, _)| w.len() < self.max_prefix)
            .collect();
        let mut first_of_class: HashMap<usize, &SimpleWord> = HashMap::new();
        let mut out = Vec::new();
        for (w, c) in inner {
            let Some(rep) = first_of_class.get(c).copied() else {
                first_of_class.insert(*c, w);
                continue;
            };
            for &s in self.generators.letters() {
                if self.class_of(&rep.appended(s)) != self.class_of(&w.appended(s)) {
                    out.push((rep.clone(), w.clone(), s));
                }
            }
        }
        out
    }
}

fn signature<F>(member: &F, prefix: &SimpleWord, suffixes: &[SimpleWord]) -> Vec<bool>
where
    F: Fn(&SimpleWord) -> bool,
{
    suffixes.iter().map(|s| member(&prefix.concat(s))).collect()
}

/// Groups every prefix of length `≤ max_prefix` by its membership signature
/// over all suffixes of length `≤ max_suffix`.
pub fn build_residuals<F>(
    generators: &Generators,
    member: F,
    max_prefix: usize,
    max_suffix: usize,
) -> ResidualTable
where
    F: Fn(&SimpleWord) -> bool + Sync,
{
    let suffixes = words_up_to(generators.letters(), max_suffix);
    let prefixes = words_up_to(generators.letters(), max_prefix);
    let sigs: Vec<Vec<bool>> = prefixes
        .par_iter()
        .map(|u| signature(&member, u, &suffixes))
        .collect();

    let mut index: HashMap<&[bool], usize> = HashMap::new();
    let mut representatives = Vec::new();
    let mut signatures = Vec::new();
    let mut prefix_classes = Vec::with_capacity(prefixes.len());
    for (u, sig) in prefixes.iter().zip(&sigs) {
        let class = *index.entry(sig.as_slice()).or_insert_with(|| {
            representatives.push(u.clone());
            signatures.push(sig.clone());
            representatives.len() - 1
        });
        prefix_classes.push((u.clone(), class));
    }
    ResidualTable {
        generators: generators.clone(),
        max_prefix,
        max_suffix,
        suffixes,
        representatives,
        signatures,
        prefix_classes,
    }
}

/// A complete deterministic automaton over generator symbols with every state reachable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DfaDoc", try_from = "DfaDoc")]
pub struct Dfa {
    generators: Generators,
    initial: usize,
    accepting: Vec<bool>,
    transition: Vec<Vec<usize>>,
}

/// JSON shape: transition table indexed `[state][symbol]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaDoc {
    pub generators: Vec<String>,
    pub states: usize,
    pub initial: usize,
    pub accepting: Vec<usize>,
    pub transition: Vec<Vec<usize>>,
}

impl From<Dfa> for DfaDoc {
    fn from(d: Dfa) -> Self {
        DfaDoc {
            generators: d.generators.names().to_vec(),
            states: d.states(),
            initial: d.initial,
            accepting: (0..d.states()).filter(|&q| d.accepting[q]).collect(),
            transition: d.transition,
        }
    }
}

impl TryFrom<DfaDoc> for Dfa {
    type Error = NerodeError;

    fn try_from(doc: DfaDoc) -> Result<Self, NerodeError> {
        let generators =
            Generators::new(doc.generators).map_err(|e| NerodeError::InvalidDfa(e.to_string()))?;
        if doc.transition.len() != doc.states {
            return Err(NerodeError::InvalidDfa(format!(
                "{} transition rows for {} states",
                doc.transition.len(),
                doc.states
            )));
        }
        let mut accepting = vec![false; doc.states];
        for q in doc.accepting {
            *accepting
                .get_mut(q)
                .ok_or_else(|| NerodeError::InvalidDfa(format!("accepting state {q} out of range")))? = true;
        }
        Dfa::new(generators, doc.initial, accepting, doc.transition)
    }
}

impl Dfa {
    /// Validates totality and prunes unreachable states (renumbering by BFS order).
    pub fn new(
        generators: Generators,
        initial: usize,
        accepting: Vec<bool>,
        transition: Vec<Vec<usize>>,
    ) -> Result<Self, NerodeError> {
        let n = transition.len();
        if n == 0 {
            return Err(NerodeError::InvalidDfa("no states".into()));
        }
        if accepting.len() != n {
            return Err(NerodeError::InvalidDfa("accepting flags do not cover the states".into()));
        }
        if initial >= n {
            return Err(NerodeError::InvalidDfa(format!("initial state {initial} out of range")));
        }
        for (q, row) in transition.iter().enumerate() {
            if row.len() != generators.len() {
                return Err(NerodeError::InvalidDfa(format!(
                    "state {q} has {} transitions for {} symbols",
                    row.len(),
                    generators.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(NerodeError::InvalidDfa(format!("state {q} steps to missing state {t}")));
            }
        }
        Ok(Self {
            generators,
            initial,
            accepting,
            transition,
        }
        .canonical())
    }

    /// Reachable part, renumbered in BFS order from the initial state, symbols in order.
    fn canonical(&self) -> Self {
        let mut order = vec![usize::MAX; self.states()];
        let mut queue = VecDeque::from([self.initial]);
        let mut seen = Vec::new();
        order[self.initial] = 0;
        seen.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for &t in &self.transition[q] {
                if order[t] == usize::MAX {
                    order[t] = seen.len();
                    seen.push(t);
                    queue.push_back(t);
                }
            }
        }
        Self {
            generators: self.generators.clone(),
            initial: 0,
            accepting: seen.iter().map(|&q| self.accepting[q]).collect(),
            transition: seen
                .iter()
                .map(|&q| self.transition[q].iter().map(|&t| order[t]).collect())
                .collect(),
        }
    }

    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    pub fn states(&self) -> usize {
        self.transition.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn step(&self, q: usize, s: Sym) -> usize {
        self.transition[q][s.0]
    }

    pub fn run(&self, w: &SimpleWord) -> usize {
        w.letters().iter().fold(self.initial, |q, &s| self.step(q, s))
    }

    pub fn accepts(&self, w: &SimpleWord) -> bool {
        self.accepting[self.run(w)]
    }

    /// First word of length `≤ n` (length-lex) on which the automaton and `member` disagree.
    pub fn first_disagreement<F>(&self, member: F, n: usize) -> Option<SimpleWord>
    where
        F: Fn(&SimpleWord) -> bool,
    {
        words_up_to(self.generators.letters(), n)
            .into_iter()
            .find(|w| self.accepts(w) != member(w))
    }
}

/// States are residual classes; `class(u) --s--> class(u·s)`.
pub fn residuals_to_dfa<F>(table: &ResidualTable, member: F) -> Result<Dfa, NerodeError>
where
    F: Fn(&SimpleWord) -> bool,
{
    let index: HashMap<&[bool], usize> = table
        .signatures
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let mut transition = Vec::with_capacity(table.class_count());
    for rep in &table.representatives {
        let mut row = Vec::with_capacity(table.generators.len());
        for &s in table.generators.letters() {
            let succ = rep.appended(s);
            let sig = signature(&member, &succ, &table.suffixes);
            let class = index
                .get(sig.as_slice())
                .copied()
                .ok_or_else(|| NerodeError::InsufficientDepth {
                    word: render(&table.generators, &succ),
                })?;
            row.push(class);
        }
        transition.push(row);
    }
    let accepting = table.representatives.iter().map(&member).collect();
    let initial = table
        .class_of(&Word::empty())
        .expect("the empty prefix is always tested");
    let dfa = Dfa::new(table.generators.clone(), initial, accepting, transition)?;
    if let Some(w) = dfa.first_disagreement(&member, table.max_prefix + table.max_suffix) {
        return Err(NerodeError::LanguageMismatch {
            word: render(&table.generators, &w),
        });
    }
    Ok(dfa)
}

/// Residual table plus automaton in one call.
pub fn nerode_automaton<F>(
    generators: &Generators,
    member: F,
    max_prefix: usize,
    max_suffix: usize,
) -> Result<Dfa, NerodeError>
where
    F: Fn(&SimpleWord) -> bool + Sync,
{
    let table = build_residuals(generators, &member, max_prefix, max_suffix);
    residuals_to_dfa(&table, &member)
}

/// Indicator series of the automaton's language, truncated at `n`.
pub fn dfa_to_indicator(dfa: &Dfa, n: usize) -> SimpleSeries {
    Series::indicator(dfa.generators.clone(), n, |w: &SimpleWord| dfa.accepts(w))
}

/// Moore partition refinement, then canonical BFS numbering.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let dfa = dfa.canonical();
    let n = dfa.states();
    let mut class: Vec<usize> = dfa.accepting.iter().map(|&a| usize::from(a)).collect();
    let mut count = renumber(&mut class);
    loop {
        let keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|q| (class[q], dfa.transition[q].iter().map(|&t| class[t]).collect()))
            .collect();
        let mut ids: HashMap<&(usize, Vec<usize>), usize> = HashMap::new();
        let mut next = Vec::with_capacity(n);
        for k in &keys {
            let len = ids.len();
            next.push(*ids.entry(k).or_insert(len));
        }
        let next_count = ids.len();
        class = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }
    let mut transition = vec![Vec::new(); count];
    let mut accepting = vec![false; count];
    for q in 0..n {
        let c = class[q];
        if transition[c].is_empty() {
            transition[c] = dfa.transition[q].iter().map(|&t| class[t]).collect();
            accepting[c] = dfa.accepting[q];
        }
    }
    Dfa {
        generators: dfa.generators.clone(),
        initial: class[dfa.initial],
        accepting,
        transition,
    }
    .canonical()
}

fn renumber(class: &mut [usize]) -> usize {
    let mut ids = HashMap::new();
    for c in class.iter_mut() {
        let len = ids.len();
        *c = *ids.entry(*c).or_insert(len);
    }
    ids.len()
}

fn render(g: &Generators, w: &SimpleWord) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        g.render(w).join("")
    }
}
