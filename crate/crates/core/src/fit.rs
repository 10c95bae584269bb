//! Parametrized classifier families, the goodness objective and near-best search.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::events::{Alphabet, EventWord, EventsError, Label, LetterSet};
use crate::profiles::{
    agreement_count, orbit, series_from_triple, Classifier, LearningSet, Prediction, ProfilesError, StateSpace,
};
use crate::scalar::{self, Scalar};
use crate::series::{LabeledSeries, SeriesError};

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("parameter {index} = {value} outside [{lower}, {upper}]")]
    OutOfBox {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("invalid parameter box: {0}")]
    BadBox(String),
    #[error("expected {expected} parameters, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid search setting: {0}")]
    Config(String),
    #[error(transparent)]
    Profiles(#[from] ProfilesError),
    #[error(transparent)]
    Events(#[from] EventsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A compact box `∏ [lower_j, upper_j] ⊂ ℝ^m`. `m = 0` describes a family without parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ParameterBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, FitError> {
        if lower.len() != upper.len() {
            return Err(FitError::BadBox(format!(
                "{} lower bounds, {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !l.is_finite() || !u.is_finite() || l > u {
                return Err(FitError::BadBox(format!("coordinate {j}: [{l}, {u}]")));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(m: usize, lower: f64, upper: f64) -> Result<Self, FitError> {
        Self::new(vec![lower; m], vec![upper; m])
    }

    pub fn empty() -> Self {
        Self {
            lower: Vec::new(),
            upper: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, j: usize) -> f64 {
        self.upper[j] - self.lower[j]
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| l + (u - l) / 2.0)
            .collect()
    }

    pub fn check(&self, a: &[f64]) -> Result<(), FitError> {
        if a.len() != self.dim() {
            return Err(FitError::Arity {
                expected: self.dim(),
                got: a.len(),
            });
        }
        for (j, &v) in a.iter().enumerate() {
            if !(self.lower[j] <= v && v <= self.upper[j]) {
                return Err(FitError::OutOfBox {
                    index: j,
                    value: v,
                    lower: self.lower[j],
                    upper: self.upper[j],
                });
            }
        }
        Ok(())
    }

    pub fn clamp(&self, a: &mut [f64]) {
        for (j, v) in a.iter_mut().enumerate() {
            *v = v.clamp(self.lower[j], self.upper[j]);
        }
    }

    /// Map a point of the unit cube into the box.
    pub fn from_unit(&self, t: &[f64]) -> Vec<f64> {
        t.iter()
            .enumerate()
            .map(|(j, &t)| self.lower[j] + t * self.width(j))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    LinearThreshold,
    Lookup,
    Constant,
    Custom,
}

type BuildFn = dyn Fn(&[f64]) -> Classifier + Send + Sync;

/// `M : A → F`.
#[derive(Clone)]
pub struct ParametrizedFamily {
    bounds: ParameterBox,
    kind: FamilyKind,
    build: Arc<BuildFn>,
}

impl fmt::Debug for ParametrizedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametrizedFamily")
            .field("kind", &self.kind)
            .field("bounds", &self.bounds)
            .finish()
    }
}

impl ParametrizedFamily {
    pub fn custom(bounds: ParameterBox, build: impl Fn(&[f64]) -> Classifier + Send + Sync + 'static) -> Self {
        Self {
            bounds,
            kind: FamilyKind::Custom,
            build: Arc::new(build),
        }
    }

    /// No parameters; always the same classifier.
    pub fn constant(label: Label) -> Self {
        Self {
            bounds: ParameterBox::empty(),
            kind: FamilyKind::Constant,
            build: Arc::new(move |_| Classifier::Constant(label)),
        }
    }

    /// Parameters laid out label by label as `[w_ℓ (dim entries), b_ℓ]`.
    pub fn linear_threshold(bounds: ParameterBox, labels: usize, dim: usize) -> Result<Self, FitError> {
        let m = labels * (dim + 1);
        if bounds.dim() != m {
            return Err(FitError::Arity {
                expected: m,
                got: bounds.dim(),
            });
        }
        Ok(Self {
            bounds,
            kind: FamilyKind::LinearThreshold,
            build: Arc::new(move |a| {
                let (weights, bias) = a
                    .chunks(dim + 1)
                    .map(|c| (c[..dim].to_vec(), c[dim]))
                    .unzip();
                Classifier::LinearThreshold { weights, bias }
            }),
        })
    }

    /// Interval table on one coordinate; the parameters are the cuts (sorted before use).
    pub fn lookup(bounds: ParameterBox, coordinate: usize, labels: Vec<Label>) -> Result<Self, FitError> {
        if labels.is_empty() || bounds.dim() + 1 != labels.len() {
            return Err(FitError::Arity {
                expected: labels.len().saturating_sub(1),
                got: bounds.dim(),
            });
        }
        Ok(Self {
            bounds,
            kind: FamilyKind::Lookup,
            build: Arc::new(move |a| {
                let mut cuts = a.to_vec();
                cuts.sort_by(f64::total_cmp);
                Classifier::Lookup {
                    coordinate,
                    cuts,
                    labels: labels.clone(),
                }
            }),
        })
    }

    pub fn bounds(&self) -> &ParameterBox {
        &self.bounds
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn build(&self, a: &[f64]) -> Result<Classifier, FitError> {
        self.bounds.check(a)?;
        Ok((self.build)(a))
    }

    /// Same builder with every coordinate outside `active` pinned at its box midpoint.
    pub fn frozen(&self, active: &[usize]) -> Self {
        let mid = self.bounds.midpoint();
        let (mut lower, mut upper) = (self.bounds.lower.clone(), self.bounds.upper.clone());
        for j in (0..self.bounds.dim()).filter(|j| !active.contains(j)) {
            lower[j] = mid[j];
            upper[j] = mid[j];
        }
        Self {
            bounds: ParameterBox { lower, upper },
            kind: self.kind,
            build: self.build.clone(),
        }
    }
}

/// `a` with every coordinate outside `active` replaced by the box midpoint.
pub fn freeze(bounds: &ParameterBox, a: &[f64], active: &[usize]) -> Vec<f64> {
    let mid = bounds.midpoint();
    a.iter()
        .enumerate()
        .map(|(j, &v)| if active.contains(&j) { v } else { mid[j] })
        .collect()
}

/// Declarative family description used by configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyConfig {
    LinearThreshold { lower: Vec<f64>, upper: Vec<f64> },
    Lookup {
        coordinate: usize,
        labels: Vec<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    Constant { label: String },
}

impl FamilyConfig {
    pub fn build(&self, alphabet: &Alphabet, dim: usize) -> Result<ParametrizedFamily, FitError> {
        match self {
            FamilyConfig::LinearThreshold { lower, upper } => ParametrizedFamily::linear_threshold(
                ParameterBox::new(lower.clone(), upper.clone())?,
                alphabet.label_count(),
                dim,
            ),
            FamilyConfig::Lookup {
                coordinate,
                labels,
                lower,
                upper,
            } => {
                if *coordinate >= dim {
                    return Err(FitError::Config(format!(
                        "lookup coordinate {coordinate} outside state dimension {dim}"
                    )));
                }
                let labels = labels
                    .iter()
                    .map(|l| alphabet.label(l))
                    .collect::<Result<Vec<_>, _>>()?;
                ParametrizedFamily::lookup(ParameterBox::new(lower.clone(), upper.clone())?, *coordinate, labels)
            }
            FamilyConfig::Constant { label } => Ok(ParametrizedFamily::constant(alphabet.label(label)?)),
        }
    }
}

/// The evaluation set `{(h, p_h, χ·h) : |h| ≤ N}`, computed once.
///
/// `χ·h` does not depend on the classifier, so every goodness evaluation reuses it.
#[derive(Debug, Clone)]
pub struct Horizon {
    n: usize,
    pids: usize,
    entries: Vec<(EventWord, Scalar, LearningSet)>,
}

impl Horizon {
    pub fn new(space: &StateSpace, chi: &LearningSet, p: &LabeledSeries, n: usize) -> Result<Self, FitError> {
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
        let entries = orbit(space, chi, n)
            .into_iter()
            .map(|(h, x)| {
                let ph = p.coeff(&h);
                (h, ph, x)
            })
            .collect();
        Ok(Self {
            n,
            pids: chi.profiles().len(),
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `max_h |p_h − ⟪f, χ·h⟫|`, exactly.
    pub fn deviation(&self, f: &Classifier) -> Scalar {
        let denom = self.pids as i64;
        self.entries
            .iter()
            .map(|(_, ph, x)| (ph - scalar::ratio(agreement_count(f, x) as i64, denom)).abs())
            .fold(Scalar::zero(), |m, d| if d > m { d } else { m })
    }

    /// Predictions of `f` for every pid at every horizon word.
    fn predictions(&self, f: &Classifier) -> Vec<Vec<Prediction>> {
        self.entries
            .iter()
            .map(|(_, _, x)| x.profiles().iter().map(|p| f.predict(&p.state)).collect())
            .collect()
    }

    /// `⟪f_ℓ, χ·h⟫` numerators for every word: pids where `f` says `ℓ` and the label is `ℓ`.
    fn restricted_counts(&self, preds: &[Vec<Prediction>], label: Label) -> Vec<usize> {
        self.entries
            .iter()
            .zip(preds)
            .map(|((_, _, x), pr)| {
                x.profiles()
                    .iter()
                    .zip(pr)
                    .filter(|(p, q)| p.label == label && **q == Prediction::Label(label))
                    .count()
            })
            .collect()
    }
}

/// `M̃(a) = max_{|h| ≤ N} |p_h − ⟪M(a), χ·h⟫|` as a double.
pub fn goodness(family: &ParametrizedFamily, a: &[f64], horizon: &Horizon) -> Result<f64, FitError> {
    Ok(scalar::to_f64(&exact_goodness(family, a, horizon)?))
}

pub fn exact_goodness(family: &ParametrizedFamily, a: &[f64], horizon: &Horizon) -> Result<Scalar, FitError> {
    Ok(horizon.deviation(&family.build(a)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub epsilon: f64,
    pub budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            budget: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub a: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoodnessReport {
    pub a0: Vec<f64>,
    pub value: f64,
    #[serde(with = "scalar::serde_text")]
    pub exact_value: Scalar,
    pub horizon: usize,
    pub epsilon: f64,
    pub budget: usize,
    pub evaluations: usize,
    pub grid_points: usize,
    /// Simplex diameter fell below `epsilon`.
    pub converged: bool,
    pub budget_limited: bool,
    /// Goodness is exactly zero: `M(a0)` realizes `p` up to the horizon.
    pub exact_realization: bool,
    /// Distance to the infimum is at most this, since goodness is never negative.
    pub certified_gap_bound: f64,
    pub trace: Vec<TracePoint>,
}

/// Radical inverse of `k` in base `b`.
fn radical_inverse(mut k: usize, b: usize) -> f64 {
    let (mut x, mut f) = (0.0, 1.0 / b as f64);
    while k > 0 {
        x += (k % b) as f64 * f;
        k /= b;
        f /= b as f64;
    }
    x
}

fn primes(m: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(m);
    let mut c = 2;
    while out.len() < m {
        if out.iter().all(|p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// `count` Halton points in the box; the first is the midpoint.
pub fn halton_grid(bounds: &ParameterBox, count: usize) -> Vec<Vec<f64>> {
    let bases = primes(bounds.dim());
    (0..count)
        .map(|k| {
            if k == 0 {
                bounds.midpoint()
            } else {
                let t: Vec<f64> = bases.iter().map(|&b| radical_inverse(k, b)).collect();
                bounds.from_unit(&t)
            }
        })
        .collect()
}

struct Run<'a> {
    family: &'a ParametrizedFamily,
    horizon: &'a Horizon,
    budget: usize,
    points: Vec<Vec<f64>>,
    values: Vec<Scalar>,
}

impl Run<'_> {
    fn left(&self) -> usize {
        self.budget - self.points.len()
    }

    fn eval(&mut self, mut a: Vec<f64>) -> Option<Scalar> {
        if self.left() == 0 {
            return None;
        }
        self.family.bounds.clamp(&mut a);
        let v = self.horizon.deviation(&(self.family.build)(&a));
        self.points.push(a);
        self.values.push(v.clone());
        Some(v)
    }
}

/// Grid over the box, then a box-clamped Nelder–Mead simplex from the best grid point.
pub fn near_best_search(
    family: &ParametrizedFamily,
    horizon: &Horizon,
    config: &SearchConfig,
) -> Result<GoodnessReport, FitError> {
    if !(config.epsilon > 0.0) {
        return Err(FitError::Config("epsilon must be positive".into()));
    }
    if config.budget == 0 {
        return Err(FitError::Config("budget must allow at least one evaluation".into()));
    }
    let bounds = family.bounds();
    let m = bounds.dim();
    let grid_points = if m == 0 || config.budget == 1 {
        1
    } else {
        (config.budget / 2).max(1)
    };
    let grid = halton_grid(bounds, grid_points);
    let values: Vec<Scalar> = grid
        .par_iter()
        .map(|a| horizon.deviation(&(family.build)(a)))
        .collect();
    let mut run = Run {
        family,
        horizon,
        budget: config.budget,
        points: grid,
        values,
    };

    let free: Vec<usize> = (0..m).filter(|&j| bounds.width(j) > 0.0).collect();
    let (converged, budget_limited) = if free.is_empty() {
        (true, false)
    } else {
        let start = argmin(&run.values);
        nelder_mead(&mut run, &free, start, config.epsilon)
    };

    let best = argmin(&run.values);
    let exact_value = run.values[best].clone();
    let value = scalar::to_f64(&exact_value);
    let trace = run
        .points
        .iter()
        .zip(&run.values)
        .map(|(a, v)| TracePoint {
            a: a.clone(),
            value: scalar::to_f64(v),
        })
        .collect();
    Ok(GoodnessReport {
        a0: run.points[best].clone(),
        value,
        exact_realization: exact_value.is_zero(),
        exact_value,
        horizon: horizon.n(),
        epsilon: config.epsilon,
        budget: config.budget,
        evaluations: run.points.len(),
        grid_points,
        converged,
        budget_limited,
        certified_gap_bound: value,
        trace,
    })
}

/// First index of the minimum.
fn argmin(values: &[Scalar]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v < &values[best] {
            best = i;
        }
    }
    best
}

/// Returns `(converged, budget_limited)`.
fn nelder_mead(run: &mut Run<'_>, free: &[usize], start: usize, epsilon: f64) -> (bool, bool) {
    let bounds = run.family.bounds().clone();
    let x0 = run.points[start].clone();
    let mut simplex: Vec<(Vec<f64>, Scalar)> = vec![(x0.clone(), run.values[start].clone())];
    for &j in free {
        let step = 0.1 * bounds.width(j);
        let mut x = x0.clone();
        x[j] = if x[j] + step <= bounds.upper()[j] { x[j] + step } else { x[j] - step };
        match run.eval(x.clone()) {
            Some(v) => simplex.push((x, v)),
            None => return (false, true),
        }
    }

    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        let mut x: Vec<f64> = a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect();
        bounds.clamp(&mut x);
        x
    };

    loop {
        simplex.sort_by(|a, b| a.1.cmp(&b.1));
        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| free.iter().map(move |&j| (x[j] - best[j]).abs()))
            .fold(0.0, f64::max);
        if diameter < epsilon {
            return (true, false);
        }
        let n = simplex.len() - 1;
        let mut centroid = vec![0.0; x0.len()];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let (worst, f_worst) = simplex[n].clone();
        let xr = combine(&centroid, &worst, -1.0);
        let Some(fr) = run.eval(xr.clone()) else {
            return (false, true);
        };
        if fr < simplex[0].1 {
            let xe = combine(&centroid, &worst, -2.0);
            let Some(fe) = run.eval(xe.clone()) else {
                return (false, true);
            };
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let xc = if fr < f_worst {
            combine(&centroid, &xr, 0.5)
        } else {
            combine(&centroid, &worst, 0.5)
        };
        let Some(fc) = run.eval(xc.clone()) else {
            return (false, true);
        };
        if fc < fr.clone().min(f_worst) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&best, &vertex.0, 0.5);
            let Some(v) = run.eval(x.clone()) else {
                return (false, true);
            };
            *vertex = (x, v);
        }
    }
}

/// `f_ℓ`: `ℓ` where `f` says `ℓ`, `⋆` elsewhere.
pub fn label_restrict(f: &Classifier, label: Label, alphabet: &Alphabet) -> Result<Classifier, FitError> {
    alphabet.check_label(label)?;
    Ok(match f {
        Classifier::Restricted { label: l, .. } if *l == label => f.clone(),
        _ => Classifier::Restricted {
            inner: Box::new(f.clone()),
            label,
        },
    })
}

/// `p_ℓ(h) = ⟪f_ℓ, χ·h⟫` for `|h| ≤ n`.
pub fn label_series(
    space: &StateSpace,
    f: &Classifier,
    chi: &LearningSet,
    label: Label,
    n: usize,
) -> Result<LabeledSeries, FitError> {
    let fl = label_restrict(f, label, chi.alphabet())?;
    Ok(series_from_triple(space, &fl, chi, n)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub total: LabeledSeries,
    pub parts: Vec<(Label, LabeledSeries)>,
    /// Words where `Σ_ℓ p_ℓ(h) ≠ p(h)`.
    pub mismatches: Vec<EventWord>,
}

/// `p` and its label parts, with the sum identity checked on every word.
pub fn decompose(space: &StateSpace, f: &Classifier, chi: &LearningSet, n: usize) -> Result<Decomposition, FitError> {
    let total = series_from_triple(space, f, chi, n)?;
    let parts = chi
        .alphabet()
        .labels()
        .map(|l| Ok((l, label_series(space, f, chi, l, n)?)))
        .collect::<Result<Vec<_>, FitError>>()?;
    let mismatches = crate::word::words_up_to(chi.alphabet().letters(), n)
        .into_iter()
        .filter(|h| {
            let sum = parts
                .iter()
                .fold(Scalar::zero(), |acc, (_, s)| acc + s.coeff(h));
            sum != total.coeff(h)
        })
        .collect();
    Ok(Decomposition {
        total,
        parts,
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    pub probe_count: usize,
    pub tol: f64,
    /// Perturbation as a fraction of each coordinate's box width.
    pub step_fraction: f64,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            probe_count: 64,
            tol: 1e-9,
            step_fraction: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelActivity {
    pub label: String,
    pub active: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActiveReport {
    pub per_label: Vec<LabelActivity>,
    /// Union over labels.
    pub active: Vec<usize>,
    pub inactive: Vec<usize>,
    pub probes: usize,
    pub tol: f64,
}

/// Probe which coordinates move any `⟪M(a)_ℓ, χ·h⟫` on the horizon.
///
/// Each probe point is drawn uniformly from the box; coordinate `j` is pushed by
/// `±δ_j` and the two restricted tables are compared.
pub fn active_parameters(
    family: &ParametrizedFamily,
    horizon: &Horizon,
    alphabet: &Alphabet,
    config: &ProbeConfig,
) -> Result<ActiveReport, FitError> {
    if !(config.tol > 0.0) {
        return Err(FitError::Config("tol must be positive".into()));
    }
    let bounds = family.bounds();
    let m = bounds.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let probes: Vec<Vec<f64>> = (0..config.probe_count)
        .map(|_| (0..m).map(|j| bounds.lower()[j] + rng.gen::<f64>() * bounds.width(j)).collect())
        .collect();
    let labels: Vec<Label> = alphabet.labels().collect();
    let denom = horizon.pids as f64;

    let tasks: Vec<(usize, usize)> = (0..probes.len())
        .flat_map(|p| (0..m).map(move |j| (p, j)))
        .collect();
    let hits: Vec<Vec<bool>> = tasks
        .par_iter()
        .map(|&(p, j)| {
            let delta = config.step_fraction * bounds.width(j);
            let (mut lo, mut hi) = (probes[p].clone(), probes[p].clone());
            lo[j] -= delta;
            hi[j] += delta;
            bounds.clamp(&mut lo);
            bounds.clamp(&mut hi);
            let plo = horizon.predictions(&(family.build)(&lo));
            let phi = horizon.predictions(&(family.build)(&hi));
            labels
                .iter()
                .map(|&l| {
                    let a = horizon.restricted_counts(&plo, l);
                    let b = horizon.restricted_counts(&phi, l);
                    a.iter()
                        .zip(&b)
                        .any(|(x, y)| ((*x as f64 - *y as f64) / denom).abs() > config.tol)
                })
                .collect()
        })
        .collect();

    let mut per_label: Vec<LabelActivity> = labels
        .iter()
        .map(|&l| LabelActivity {
            label: alphabet.label_name(l).to_string(),
            active: Vec::new(),
        })
        .collect();
    for (&(_, j), row) in tasks.iter().zip(&hits) {
        for (k, &hit) in row.iter().enumerate() {
            if hit && !per_label[k].active.contains(&j) {
                per_label[k].active.push(j);
            }
        }
    }
    let mut active: Vec<usize> = Vec::new();
    for pl in &mut per_label {
        pl.active.sort_unstable();
        active.extend(&pl.active);
    }
    active.sort_unstable();
    active.dedup();
    let inactive = (0..m).filter(|j| !active.contains(j)).collect();
    Ok(ActiveReport {
        per_label,
        active,
        inactive,
        probes: config.probe_count,
        tol: config.tol,
    })
}
