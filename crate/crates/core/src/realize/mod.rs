//! Finite-rank tests and linear state-space realizations of series.

mod divided;
mod hankel;
mod lie;

pub use divided::{
    differential_representation, multi_indices, verify_evaluation, DividedPowerSeries, EvaluationReport,
    EvaluationViolation, MultiIndex,
};
pub use hankel::{hankel, hankel_rank, hankel_step, HankelBlock, RankStep};
pub use lie::{
    commutator, lie_matrix, lie_rank, lie_shift, lyndon_words, standard_factorization, Expansion,
    LieBracketBasis, LieElement,
};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::events::{project, EventsError, Generators, LetterSet, SimpleWord, Sym};
use crate::linalg::{integer_row, QMatrix};
use crate::scalar::{self, Scalar};
use crate::series::{LabeledSeries, SeriesError, SimpleSeries};
use crate::word::words_up_to;

#[derive(Debug, Error, PartialEq)]
pub enum RealizeError {
    #[error("horizon too short: need length {needed}, series truncated at {truncation}")]
    HorizonTooShort { needed: usize, truncation: usize },
    #[error("rank not stabilized at this truncation: {previous} at length {}, {current} at length {max_len}", .max_len - 1)]
    NotStabilized {
        previous: usize,
        current: usize,
        max_len: usize,
    },
    #[error("only single-generator series are supported here, got {0} generators")]
    UnsupportedGenerators(usize),
    #[error("multi-index {index:?} invalid for {variables} variables at degree {degree}")]
    BadMultiIndex {
        index: Vec<u32>,
        variables: usize,
        degree: u32,
    },
    #[error("realization shape: {0}")]
    Shape(String),
    #[error("max_len must be at least 1")]
    ZeroLength,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Events(#[from] EventsError),
}

/// `p(s₁…s_k) = init · A(s₁) ⋯ A(s_k) · out`, with matrices acting on row vectors
/// from the right.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRealization {
    generators: Generators,
    action: Vec<QMatrix>,
    init: Vec<Scalar>,
    out: Vec<Scalar>,
}

impl LinearRealization {
    pub fn new(
        generators: Generators,
        action: Vec<QMatrix>,
        init: Vec<Scalar>,
        out: Vec<Scalar>,
    ) -> Result<Self, RealizeError> {
        let n = init.len();
        if out.len() != n {
            return Err(RealizeError::Shape(format!("init has {n} entries, out has {}", out.len())));
        }
        if action.len() != generators.len() {
            return Err(RealizeError::Shape(format!(
                "{} action matrices for {} generators",
                action.len(),
                generators.len()
            )));
        }
        for (i, m) in action.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(RealizeError::Shape(format!(
                    "action for {} is {}x{}, expected {n}x{n}",
                    generators.name(Sym(i)),
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            generators,
            action,
            init,
            out,
        })
    }

    pub fn dim(&self) -> usize {
        self.init.len()
    }

    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    pub fn action(&self, s: Sym) -> &QMatrix {
        &self.action[s.0]
    }

    pub fn init(&self) -> &[Scalar] {
        &self.init
    }

    pub fn out(&self) -> &[Scalar] {
        &self.out
    }

    /// Row state reached from `init` after reading `w`.
    pub fn state_after(&self, w: &SimpleWord) -> Result<Vec<Scalar>, RealizeError> {
        self.generators.check(w)?;
        Ok(w
            .letters()
            .iter()
            .fold(self.init.clone(), |v, &s| self.action[s.0].left_apply(&v)))
    }

    fn read_out(&self, v: &[Scalar]) -> Scalar {
        v.iter()
            .zip(&self.out)
            .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
    }

    /// Tabulate the realized series up to length `truncation`.
    ///
    /// States are kept as integer vectors against the common denominator of the
    /// action, so each coefficient is reduced once.
    pub fn series(&self, truncation: usize) -> SimpleSeries {
        let n = self.dim();
        let (init, init_den) = integer_row(&self.init);
        let (out, out_den) = integer_row(&self.out);
        let entries: Vec<Scalar> = self.action.iter().flat_map(|m| m.to_rows().into_iter().flatten()).collect();
        let scale = integer_row(&entries).1;
        let action: Vec<Vec<Vec<BigInt>>> = self
            .action
            .iter()
            .map(|m| {
                (0..n)
                    .map(|r| m.row(r).iter().map(|q| q.numer() * (&scale / q.denom())).collect())
                    .collect()
            })
            .collect();
        let step = |v: &[BigInt], m: &[Vec<BigInt>]| -> Vec<BigInt> {
            (0..n)
                .map(|c| {
                    v.iter()
                        .zip(m)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(BigInt::zero(), |acc, (x, row)| acc + x * &row[c])
                })
                .collect()
        };
        let mut den = init_den * out_den;
        let mut table = Vec::new();
        let mut frontier = vec![(SimpleWord::empty(), init)];
        for len in 0..=truncation {
            let values: Vec<BigInt> = frontier
                .par_iter()
                .map(|(_, v)| v.iter().zip(&out).fold(BigInt::zero(), |acc, (x, y)| acc + x * y))
                .collect();
            for ((w, _), c) in frontier.iter().zip(values) {
                if !c.is_zero() {
                    table.push((w.clone(), Scalar::new(c, den.clone())));
                }
            }
            if len == truncation {
                break;
            }
            den *= &scale;
            let letters = self.generators.letters();
            frontier = frontier
                .par_iter()
                .flat_map_iter(|(w, v)| {
                    letters
                        .iter()
                        .map(|&s| (w.appended(s), step(v, &action[s.0])))
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        SimpleSeries::from_entries_unchecked(self.generators.clone(), truncation, table)
    }

    /// First word of length `≤ p.truncation()` (length-lex) where the realization
    /// and `p` disagree.
    pub fn first_mismatch(&self, p: &SimpleSeries) -> Result<Option<SimpleWord>, RealizeError> {
        if p.space() != &self.generators {
            return Err(RealizeError::Shape("generator sets differ".into()));
        }
        let mine = self.series(p.truncation());
        Ok(words_up_to(self.generators.letters(), p.truncation())
            .into_iter()
            .find(|w| mine.coeff(w) != p.coeff(w)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RealizationDoc::from(self)).expect("realization serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, RealizeError> {
        let doc: RealizationDoc =
            serde_json::from_value(v.clone()).map_err(|e| RealizeError::Shape(e.to_string()))?;
        doc.try_into()
    }
}

pub fn realized_value(r: &LinearRealization, w: &SimpleWord) -> Result<Scalar, RealizeError> {
    Ok(r.read_out(&r.state_after(w)?))
}

/// The series a realization computes, truncated at `truncation`.
pub fn series_of(r: &LinearRealization, truncation: usize) -> SimpleSeries {
    r.series(truncation)
}

#[derive(Debug, Serialize, Deserialize)]
struct RealizationDoc {
    dim: usize,
    generators: Vec<String>,
    action: serde_json::Map<String, serde_json::Value>,
    #[serde(with = "scalar::serde_text::vec")]
    init: Vec<Scalar>,
    #[serde(with = "scalar::serde_text::vec")]
    out: Vec<Scalar>,
}

fn matrix_text(m: &QMatrix) -> serde_json::Value {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(scalar::format).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

impl From<&LinearRealization> for RealizationDoc {
    fn from(r: &LinearRealization) -> Self {
        Self {
            dim: r.dim(),
            generators: r.generators.names().to_vec(),
            action: r
                .generators
                .names()
                .iter()
                .zip(&r.action)
                .map(|(n, m)| (n.clone(), matrix_text(m)))
                .collect(),
            init: r.init.clone(),
            out: r.out.clone(),
        }
    }
}

impl TryFrom<RealizationDoc> for LinearRealization {
    type Error = RealizeError;

    fn try_from(doc: RealizationDoc) -> Result<Self, RealizeError> {
        let generators = Generators::new(doc.generators)?;
        if doc.init.len() != doc.dim {
            return Err(RealizeError::Shape(format!(
                "dim is {} but init has {} entries",
                doc.dim,
                doc.init.len()
            )));
        }
        let mut action = Vec::with_capacity(generators.len());
        for name in generators.names() {
            let raw = doc
                .action
                .get(name)
                .ok_or_else(|| RealizeError::Shape(format!("no action for generator {name}")))?;
            let rows: Vec<Vec<String>> =
                serde_json::from_value(raw.clone()).map_err(|e| RealizeError::Shape(e.to_string()))?;
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|t| scalar::parse(t)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| RealizeError::Shape(e.to_string()))?;
            if rows.len() != doc.dim || rows.iter().any(|r| r.len() != doc.dim) {
                return Err(RealizeError::Shape(format!(
                    "action for {name} is not {0}x{0}",
                    doc.dim
                )));
            }
            action.push(if doc.dim == 0 {
                QMatrix::zeros(0, 0)
            } else {
                QMatrix::from_rows(rows)
            });
        }
        if let Some(extra) = doc.action.keys().find(|k| generators.sym(k).is_err()) {
            return Err(RealizeError::Shape(format!("action for unknown generator {extra}")));
        }
        LinearRealization::new(generators, action, doc.init, doc.out)
    }
}

/// Minimal realization by Hankel factorization.
///
/// Uses prefixes and suffixes of length `≤ max_len − 1` for the pivot block and
/// one extra letter for the transitions, so `2·max_len ≤ p.truncation()` is
/// required for the stability check at `(max_len, max_len)`.
pub fn realize_from_hankel(p: &SimpleSeries, max_len: usize) -> Result<LinearRealization, RealizeError> {
    if max_len == 0 {
        return Err(RealizeError::ZeroLength);
    }
    let big = hankel(p, max_len, max_len)?;
    let small = hankel(p, max_len - 1, max_len - 1)?;
    let (current, previous) = (hankel_rank(&big), hankel_rank(&small));
    if current != previous {
        return Err(RealizeError::NotStabilized {
            previous,
            current,
            max_len,
        });
    }
    let g = p.space().clone();
    let n = previous;
    if n == 0 {
        return LinearRealization::new(
            g.clone(),
            vec![QMatrix::zeros(0, 0); g.len()],
            Vec::new(),
            Vec::new(),
        );
    }

    let all_cols: Vec<usize> = (0..small.suffixes.len()).collect();
    let rows_p = small.matrix.independent_rows();
    let cols_q = small.matrix.select(&rows_p, &all_cols).transpose().independent_rows();
    let pivots: Vec<&SimpleWord> = rows_p.iter().map(|&i| &small.prefixes[i]).collect();
    let suffixes: Vec<&SimpleWord> = cols_q.iter().map(|&j| &small.suffixes[j]).collect();
    let b = small.matrix.select(&rows_p, &cols_q);
    let b_inv = b.inverse().expect("pivot minor is invertible by construction");

    let value = |u: &SimpleWord, v: &SimpleWord| p.coeff(&u.concat(v));
    let eps = SimpleWord::empty();
    let init = b_inv.left_apply(&suffixes.iter().map(|v| value(&eps, v)).collect::<Vec<_>>());
    let out = pivots.iter().map(|u| p.coeff(u)).collect();
    let action = g
        .letters()
        .par_iter()
        .map(|&s| {
            let m = QMatrix::from_fn(n, n, |i, j| value(&pivots[i].appended(s), suffixes[j]));
            &m * &b_inv
        })
        .collect();
    LinearRealization::new(g, action, init, out)
}

/// Lie rank of one projection at `(depth, eval_len)` next to `(depth, eval_len − 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionRank {
    pub pid: String,
    pub label: String,
    pub rank: usize,
    pub previous_rank: Option<usize>,
    pub stabilized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub bracket_depth: usize,
    pub eval_len: usize,
    pub projections: Vec<ProjectionRank>,
    /// Finite ranks are always observed at a finite truncation.
    pub regular_at_truncation: bool,
    pub all_stabilized: bool,
}

pub fn is_regular(p: &LabeledSeries, bracket_depth: usize, eval_len: usize) -> Result<RegularityReport, RealizeError> {
    let a = p.space();
    let pairs: Vec<_> = a.pids().flat_map(|i| a.labels().map(move |l| (i, l))).collect();
    let projections = pairs
        .par_iter()
        .map(|&(i, l)| {
            let q = project(p, i, l)?;
            let rank = lie_rank(&q, bracket_depth, eval_len)?;
            let previous_rank = match eval_len {
                0 => None,
                e => Some(lie_rank(&q, bracket_depth, e - 1)?),
            };
            Ok(ProjectionRank {
                pid: a.pid_name(i).to_string(),
                label: a.label_name(l).to_string(),
                rank,
                previous_rank,
                stabilized: previous_rank == Some(rank),
            })
        })
        .collect::<Result<Vec<_>, RealizeError>>()?;
    let all_stabilized = projections.iter().all(|r| r.stabilized);
    Ok(RegularityReport {
        bracket_depth,
        eval_len,
        projections,
        regular_at_truncation: true,
        all_stabilized,
    })
}
