//! Truncated formal series: exact coefficient tables on all words up to a
//! fixed length, with the left and right shift actions.
//!
//! Tables are sparse and canonical (zero coefficients are never stored), so
//! two series are equal exactly when their letter sets, truncations and
//! tables agree.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::events::{Alphabet, Generators, LetterSet};
use crate::scalar::Scalar;
use crate::word::{words_up_to, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("word of length {len} exceeds truncation {truncation}")]
    TruncationExceeded { len: usize, truncation: usize },
    #[error("word {word} uses a letter outside {space}")]
    ForeignLetter { word: String, space: String },
    #[error("duplicate coefficient for word {0}")]
    DuplicateWord(String),
    #[error("{coeffs} coefficients for {series} series")]
    LengthMismatch { coeffs: usize, series: usize },
    #[error("letter set mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },
    #[error("linear combination of zero series")]
    EmptyCombination,
}

/// Any deterministic rule assigning a coefficient to every word.
pub trait SeriesOracle<L: Letter> {
    fn coefficient(&self, w: &Word<L>) -> Scalar;
}

impl<L: Letter, F: Fn(&Word<L>) -> Scalar> SeriesOracle<L> for F {
    fn coefficient(&self, w: &Word<L>) -> Scalar {
        self(w)
    }
}

#[derive(Clone, PartialEq)]
pub struct Series<A: LetterSet> {
    space: A,
    truncation: usize,
    table: BTreeMap<Word<A::Letter>, Scalar>,
}

/// A series over labeled event words (an element of `H*`).
pub type LabeledSeries = Series<Alphabet>;
/// A series over generator words only (an element of `U*`).
pub type SimpleSeries = Series<Generators>;

impl<A: LetterSet> fmt::Debug for Series<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Series")
            .field("space", &self.space)
            .field("truncation", &self.truncation)
            .field(
                "table",
                &self
                    .table
                    .iter()
                    .map(|(w, c)| (w, crate::scalar::format(c)))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl<A: LetterSet> Series<A> {
    pub fn zero(space: A, truncation: usize) -> Self {
        Self {
            space,
            truncation,
            table: BTreeMap::new(),
        }
    }

    /// Builds a series from explicit coefficients. Zero coefficients are dropped.
    pub fn from_entries(
        space: A,
        truncation: usize,
        entries: impl IntoIterator<Item = (Word<A::Letter>, Scalar)>,
    ) -> Result<Self, SeriesError> {
        let mut table = BTreeMap::new();
        for (w, c) in entries {
            if w.len() > truncation {
                return Err(SeriesError::TruncationExceeded {
                    len: w.len(),
                    truncation,
                });
            }
            if !w.letters().iter().all(|l| space.contains(l)) {
                return Err(SeriesError::ForeignLetter {
                    word: format!("{w:?}"),
                    space: space.describe(),
                });
            }
            if table.contains_key(&w) {
                return Err(SeriesError::DuplicateWord(format!("{w:?}")));
            }
            table.insert(w, c);
        }
        table.retain(|_, c| !c.is_zero());
        Ok(Self {
            space,
            truncation,
            table,
        })
    }

    /// For callers that already guarantee validity (distinct, in-range words).
    pub(crate) fn from_entries_unchecked(
        space: A,
        truncation: usize,
        entries: impl IntoIterator<Item = (Word<A::Letter>, Scalar)>,
    ) -> Self {
        let table = entries.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self {
            space,
            truncation,
            table,
        }
    }

    /// Tabulates an oracle on every word of length at most `truncation`.
    pub fn tabulate(space: A, truncation: usize, oracle: impl SeriesOracle<A::Letter>) -> Self {
        let words = words_up_to(space.letters(), truncation);
        let entries = words.into_iter().map(|w| {
            let c = oracle.coefficient(&w);
            (w, c)
        });
        Self::from_entries_unchecked(space, truncation, entries)
    }

    /// `1` on members of the language, `0` elsewhere.
    pub fn indicator(space: A, truncation: usize, member: impl Fn(&Word<A::Letter>) -> bool) -> Self {
        Self::tabulate(space, truncation, |w: &Word<A::Letter>| {
            if member(w) {
                crate::scalar::one()
            } else {
                crate::scalar::zero()
            }
        })
    }

    pub fn space(&self) -> &A {
        &self.space
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn support_len(&self) -> usize {
        self.table.len()
    }

    /// Nonzero coefficients in length-lex order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word<A::Letter>, &Scalar)> {
        self.table.iter()
    }

    /// Coefficient of `w`; errors rather than guessing beyond the truncation.
    pub fn evaluate(&self, w: &Word<A::Letter>) -> Result<Scalar, SeriesError> {
        self.check_len(w.len())?;
        Ok(self.coeff(w))
    }

    /// Coefficient lookup without the truncation check.
    pub(crate) fn coeff(&self, w: &Word<A::Letter>) -> Scalar {
        self.table.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    fn check_len(&self, len: usize) -> Result<(), SeriesError> {
        if len > self.truncation {
            Err(SeriesError::TruncationExceeded {
                len,
                truncation: self.truncation,
            })
        } else {
            Ok(())
        }
    }

    fn check_word(&self, w: &Word<A::Letter>) -> Result<(), SeriesError> {
        self.check_len(w.len())?;
        if w.letters().iter().all(|l| self.space.contains(l)) {
            Ok(())
        } else {
            Err(SeriesError::ForeignLetter {
                word: format!("{w:?}"),
                space: self.space.describe(),
            })
        }
    }

    /// `h ⇀ p`: `k ↦ p(k·h)`, truncated at `N − |h|`.
    pub fn right_shift(&self, h: &Word<A::Letter>) -> Result<Self, SeriesError> {
        self.check_word(h)?;
        let entries = self
            .table
            .iter()
            .filter_map(|(w, c)| w.strip_suffix(h).map(|k| (k, c.clone())));
        Ok(Self::from_entries_unchecked(
            self.space.clone(),
            self.truncation - h.len(),
            entries,
        ))
    }

    /// `p ↼ h`: `k ↦ p(h·k)`, truncated at `N − |h|`.
    pub fn left_shift(&self, h: &Word<A::Letter>) -> Result<Self, SeriesError> {
        self.check_word(h)?;
        let entries = self
            .table
            .iter()
            .filter_map(|(w, c)| w.strip_prefix(h).map(|k| (k, c.clone())));
        Ok(Self::from_entries_unchecked(
            self.space.clone(),
            self.truncation - h.len(),
            entries,
        ))
    }

    /// Drops coefficients of words longer than `truncation`.
    pub fn restrict(&self, truncation: usize) -> Result<Self, SeriesError> {
        self.check_len(truncation)?;
        let entries = self
            .table
            .iter()
            .filter(|(w, _)| w.len() <= truncation)
            .map(|(w, c)| (w.clone(), c.clone()));
        Ok(Self::from_entries_unchecked(self.space.clone(), truncation, entries))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let entries = self.table.iter().map(|(w, x)| (w.clone(), x * c));
        Self::from_entries_unchecked(self.space.clone(), self.truncation, entries)
    }

    /// `Σ cᵢ·pᵢ`, truncated at the smallest input truncation.
    pub fn linear_combine(coeffs: &[Scalar], series: &[&Self]) -> Result<Self, SeriesError> {
        if coeffs.len() != series.len() {
            return Err(SeriesError::LengthMismatch {
                coeffs: coeffs.len(),
                series: series.len(),
            });
        }
        let first = series.first().ok_or(SeriesError::EmptyCombination)?;
        for s in &series[1..] {
            if s.space != first.space {
                return Err(SeriesError::AlphabetMismatch {
                    left: first.space.describe(),
                    right: s.space.describe(),
                });
            }
        }
        let truncation = series.iter().map(|s| s.truncation).min().unwrap_or(0);
        let mut table: BTreeMap<Word<A::Letter>, Scalar> = BTreeMap::new();
        for (c, s) in coeffs.iter().zip(series) {
            if c.is_zero() {
                continue;
            }
            for (w, x) in s.table.range(..).take_while(|(w, _)| w.len() <= truncation) {
                *table.entry(w.clone()).or_insert_with(Scalar::zero) += c * x;
            }
        }
        Ok(Self::from_entries_unchecked(
            first.space.clone(),
            truncation,
            table,
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        Self::linear_combine(
            &[crate::scalar::one(), -crate::scalar::one()],
            &[self, other],
        )
    }

    /// The coefficient vector on the given words, `0` where absent.
    pub fn values_on(&self, words: &[Word<A::Letter>]) -> Result<Vec<Scalar>, SeriesError> {
        words.iter().map(|w| self.evaluate(w)).collect()
    }
}

impl Series<Generators> {
    /// Convenience for single-character generator names: `p.at("ab")`.
    pub fn at(&self, text: &str) -> Scalar {
        let w = self
            .space
            .parse_chars(text)
            .unwrap_or_else(|e| panic!("bad word {text:?}: {e}"));
        self.evaluate(&w)
            .unwrap_or_else(|e| panic!("bad word {text:?}: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::Sym;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn ab() -> Generators {
        Generators::new(["a", "b"]).unwrap()
    }

    fn geometric(g: &Generators, n: usize) -> SimpleSeries {
        Series::tabulate(g.clone(), n, |w: &Word<Sym>| {
            ratio(1, 1i64 << w.len())
        })
    }

    #[test]
    fn evaluate_examples() {
        let g = ab();
        let z = SimpleSeries::zero(g.clone(), 3);
        assert_eq!(z.at("ab"), int(0));
        let eps = Series::indicator(g.clone(), 3, |w: &Word<Sym>| w.is_empty());
        assert_eq!(eps.at(""), int(1));
        for w in words_up_to(g.letters(), 3).into_iter().skip(1) {
            assert_eq!(eps.evaluate(&w).unwrap(), int(0));
        }
    }

    #[test]
    fn evaluate_refuses_beyond_truncation() {
        let g = ab();
        let p = geometric(&g, 2);
        let w = g.parse_chars("aaa").unwrap();
        assert_eq!(
            p.evaluate(&w),
            Err(SeriesError::TruncationExceeded {
                len: 3,
                truncation: 2
            })
        );
    }

    #[test]
    fn shift_examples() {
        let g = ab();
        let p = geometric(&g, 3);
        assert_eq!(p.right_shift(&Word::empty()).unwrap(), p);
        assert_eq!(p.left_shift(&Word::empty()).unwrap(), p);
        let u = g.parse_chars("ab").unwrap();
        let v = g.parse_chars("b").unwrap();
        let uv = u.concat(&v);
        let ind = Series::indicator(g.clone(), 3, |w: &Word<Sym>| *w == uv);
        assert_eq!(ind.right_shift(&v).unwrap().evaluate(&u).unwrap(), int(1));
        assert_eq!(ind.left_shift(&u).unwrap().evaluate(&v).unwrap(), int(1));
        let shifted = ind.right_shift(&v).unwrap();
        assert_eq!(shifted.truncation(), 2);
        assert!(shifted.evaluate(&g.parse_chars("aaa").unwrap()).is_err());
        assert!(p.right_shift(&g.parse_chars("aaaa").unwrap()).is_err());
    }

    #[test]
    fn geometric_right_shift_halves() {
        // Oracle: every word up to length 3 compared against (1/2)·p directly.
        let g = Generators::new(["a"]).unwrap();
        let p = geometric(&g, 4);
        let a = g.parse_chars("a").unwrap();
        let shifted = p.right_shift(&a).unwrap();
        assert_eq!(shifted.truncation(), 3);
        for w in words_up_to(g.letters(), 3) {
            let expect = ratio(1, 2) * ratio(1, 1i64 << w.len());
            assert_eq!(shifted.evaluate(&w).unwrap(), expect);
        }
        assert_eq!(shifted, p.scale(&ratio(1, 2)).restrict(3).unwrap());
    }

    #[test]
    fn indicator_examples() {
        let g = ab();
        let all = Series::indicator(g.clone(), 2, |_: &Word<Sym>| true);
        assert!(words_up_to(g.letters(), 2)
            .iter()
            .all(|w| all.evaluate(w).unwrap() == int(1)));
        assert!(Series::indicator(g.clone(), 2, |_: &Word<Sym>| false).is_zero());
        let a = g.sym("a").unwrap();
        let even_a = Series::indicator(g.clone(), 2, |w: &Word<Sym>| {
            w.letters().iter().filter(|&&s| s == a).count() % 2 == 0
        });
        let expect = [("", 1), ("a", 0), ("b", 1), ("aa", 1), ("ab", 0), ("ba", 0), ("bb", 1)];
        for (w, c) in expect {
            assert_eq!(even_a.at(w), int(c), "word {w:?}");
        }
    }

    #[test]
    fn linear_combine_examples() {
        let g = ab();
        let p = geometric(&g, 3);
        let q = Series::indicator(g.clone(), 2, |w: &Word<Sym>| w.len() == 1);
        let c = SimpleSeries::linear_combine(&[int(1), int(0)], &[&p, &q]).unwrap();
        assert_eq!(c, p.restrict(2).unwrap());
        assert!(p.sub(&p).unwrap().is_zero());
        let half = SimpleSeries::linear_combine(&[ratio(1, 2), ratio(1, 2)], &[&p, &q]).unwrap();
        for w in words_up_to(g.letters(), 2) {
            let expect = (p.evaluate(&w).unwrap() + q.evaluate(&w).unwrap()) / int(2);
            assert_eq!(half.evaluate(&w).unwrap(), expect);
        }
        assert!(matches!(
            SimpleSeries::linear_combine(&[int(1)], &[&p, &q]),
            Err(SeriesError::LengthMismatch { .. })
        ));
        let other = SimpleSeries::zero(Generators::new(["x"]).unwrap(), 2);
        assert!(matches!(
            SimpleSeries::linear_combine(&[int(1), int(1)], &[&p, &other]),
            Err(SeriesError::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn from_entries_validates() {
        let g = ab();
        let a = g.parse_chars("a").unwrap();
        assert!(matches!(
            SimpleSeries::from_entries(g.clone(), 1, [(a.clone(), int(1)), (a.clone(), int(2))]),
            Err(SeriesError::DuplicateWord(_))
        ));
        assert!(matches!(
            SimpleSeries::from_entries(g.clone(), 0, [(a.clone(), int(1))]),
            Err(SeriesError::TruncationExceeded { .. })
        ));
        assert!(matches!(
            SimpleSeries::from_entries(g.clone(), 1, [(Word::single(Sym(5)), int(1))]),
            Err(SeriesError::ForeignLetter { .. })
        ));
        let s = SimpleSeries::from_entries(g, 1, [(a, int(0))]).unwrap();
        assert!(s.is_zero());
    }

    fn random_series(n: usize) -> impl Strategy<Value = SimpleSeries> {
        let g = ab();
        let words = words_up_to(g.letters(), n);
        proptest::collection::vec((-3i64..=3, 1i64..=3), words.len()).prop_map(move |cs| {
            let entries = words.iter().cloned().zip(cs.into_iter().map(|(a, b)| ratio(a, b)));
            SimpleSeries::from_entries(g.clone(), n, entries).unwrap()
        })
    }

    fn short_word(max: usize) -> impl Strategy<Value = Word<Sym>> {
        proptest::collection::vec((0usize..2).prop_map(Sym), 0..=max).prop_map(Word::from)
    }

    proptest! {
        #[test]
        fn left_and_right_shifts_commute(p in random_series(4), h in short_word(2), g in short_word(2)) {
            let a = p.right_shift(&h).unwrap().left_shift(&g).unwrap();
            let b = p.left_shift(&g).unwrap().right_shift(&h).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn shifts_are_linear(p in random_series(3), q in random_series(3), h in short_word(3)) {
            let c = [ratio(2, 3), ratio(-5, 2)];
            let lhs = SimpleSeries::linear_combine(&c, &[&p, &q]).unwrap().right_shift(&h).unwrap();
            let rhs = SimpleSeries::linear_combine(
                &c,
                &[&p.right_shift(&h).unwrap(), &q.right_shift(&h).unwrap()],
            ).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = SimpleSeries::linear_combine(&c, &[&p, &q]).unwrap().left_shift(&h).unwrap();
            let rhs = SimpleSeries::linear_combine(
                &c,
                &[&p.left_shift(&h).unwrap(), &q.left_shift(&h).unwrap()],
            ).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn right_shift_composition_exhaustive() {
        // (g ⇀ (h ⇀ p)) = (g·h) ⇀ p for every |g| + |h| ≤ 4.
        let g = ab();
        let words = words_up_to(g.letters(), 4);
        let p = Series::tabulate(g.clone(), 4, |w: &Word<Sym>| {
            let mut x = 0i64;
            for (i, s) in w.letters().iter().enumerate() {
                x += (i as i64 + 1) * (s.0 as i64 + 2);
            }
            ratio(x, 1 + w.len() as i64)
        });
        for h in &words {
            for k in &words {
                if h.len() + k.len() > 4 {
                    continue;
                }
                let two_step = p.right_shift(h).unwrap().right_shift(k).unwrap();
                let one_step = p.right_shift(&k.concat(h)).unwrap();
                assert_eq!(two_step, one_step);
            }
        }
    }
}
