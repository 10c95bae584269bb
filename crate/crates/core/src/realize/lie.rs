//! Lyndon-word basis of the free Lie algebra on the generators, with each
//! bracket stored as its expansion in the free associative algebra.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::events::{Generators, LetterSet, SimpleWord, Sym};
use crate::linalg::QMatrix;
use crate::scalar::Scalar;
use crate::series::SimpleSeries;
use crate::word::{words_up_to, Word};

use super::RealizeError;

/// Integer linear combination of words.
pub type Expansion = BTreeMap<SimpleWord, i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    /// The Lyndon word indexing this basis element.
    pub lyndon: SimpleWord,
    /// Bracketing from the standard factorization, e.g. `[a,[a,b]]`.
    pub bracket: String,
    pub expansion: Expansion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieBracketBasis {
    depth: usize,
    elements: Vec<LieElement>,
}

impl LieBracketBasis {
    /// All Lyndon brackets of length `1..=depth`, ordered by length then lexicographically.
    pub fn new(generators: &Generators, depth: usize) -> Self {
        let mut lyndon = lyndon_words(generators.len(), depth);
        lyndon.sort();
        let mut memo: BTreeMap<SimpleWord, (String, Expansion)> = BTreeMap::new();
        let elements = lyndon
            .into_iter()
            .map(|w| {
                let (bracket, expansion) = bracket_of(generators, &w, &mut memo);
                LieElement {
                    lyndon: w,
                    bracket,
                    expansion,
                }
            })
            .collect();
        Self { depth, elements }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn elements(&self) -> &[LieElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Lyndon words of length `1..=max_len` over `k` letters, via Duval's generation
/// algorithm (lexicographic order).
pub fn lyndon_words(k: usize, max_len: usize) -> Vec<SimpleWord> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    while !w.is_empty() {
        out.push(w.iter().map(|&i| Sym(i)).collect());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

fn is_lyndon(w: &[Sym]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// `w = u·v` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &SimpleWord) -> Option<(SimpleWord, SimpleWord)> {
    let l = w.letters();
    (1..l.len())
        .find(|&i| is_lyndon(&l[i..]))
        .map(|i| (Word::from(l[..i].to_vec()), Word::from(l[i..].to_vec())))
}

fn bracket_of(
    g: &Generators,
    w: &SimpleWord,
    memo: &mut BTreeMap<SimpleWord, (String, Expansion)>,
) -> (String, Expansion) {
    if let Some(hit) = memo.get(w) {
        return hit.clone();
    }
    let result = match standard_factorization(w) {
        None => {
            let s = w.letters()[0];
            (g.name(s).to_string(), Expansion::from([(w.clone(), 1)]))
        }
        Some((u, v)) => {
            let (bu, eu) = bracket_of(g, &u, memo);
            let (bv, ev) = bracket_of(g, &v, memo);
            (format!("[{bu},{bv}]"), commutator(&eu, &ev))
        }
    };
    memo.insert(w.clone(), result.clone());
    result
}

/// `xy − yx` in the free associative algebra.
pub fn commutator(x: &Expansion, y: &Expansion) -> Expansion {
    let mut out = Expansion::new();
    for (wx, cx) in x {
        for (wy, cy) in y {
            *out.entry(wx.concat(wy)).or_insert(0) += cx * cy;
            *out.entry(wy.concat(wx)).or_insert(0) -= cx * cy;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `b ⇀ p` evaluated at `k`: `Σ c_w · p(k·w)`.
fn shifted_value(p: &SimpleSeries, e: &Expansion, k: &SimpleWord) -> Scalar {
    e.iter().fold(Scalar::zero(), |acc, (w, c)| {
        let v = p.coeff(&k.concat(w));
        if v.is_zero() {
            acc
        } else {
            acc + v * Scalar::from_integer((*c).into())
        }
    })
}

/// `b ⇀ p` as a series truncated at `N − depth(b)`.
pub fn lie_shift(p: &SimpleSeries, element: &LieElement) -> Result<SimpleSeries, RealizeError> {
    let mut acc: Option<SimpleSeries> = None;
    for (w, c) in &element.expansion {
        let term = p.right_shift(w)?.scale(&Scalar::from_integer((*c).into()));
        acc = Some(match acc {
            None => term,
            Some(a) => SimpleSeries::linear_combine(
                &[crate::scalar::one(), crate::scalar::one()],
                &[&a, &term],
            )?,
        });
    }
    Ok(acc.unwrap_or_else(|| SimpleSeries::zero(p.space().clone(), p.truncation())))
}

/// Rank of `{b ⇀ p : b a Lyndon bracket of length ≤ bracket_depth}`, each shifted
/// series read on every word of length `≤ eval_len`.
pub fn lie_rank(p: &SimpleSeries, bracket_depth: usize, eval_len: usize) -> Result<usize, RealizeError> {
    Ok(lie_matrix(p, bracket_depth, eval_len)?.rank())
}

/// One row per bracket, one column per evaluation word.
pub fn lie_matrix(p: &SimpleSeries, bracket_depth: usize, eval_len: usize) -> Result<QMatrix, RealizeError> {
    if bracket_depth + eval_len > p.truncation() {
        return Err(RealizeError::HorizonTooShort {
            needed: bracket_depth + eval_len,
            truncation: p.truncation(),
        });
    }
    let basis = LieBracketBasis::new(p.space(), bracket_depth);
    let ks = words_up_to(p.space().letters(), eval_len);
    Ok(QMatrix::from_fn(basis.len(), ks.len(), |r, c| {
        shifted_value(p, &basis.elements[r].expansion, &ks[c])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::series::Series;

    fn ab() -> Generators {
        Generators::new(["a", "b"]).unwrap()
    }

    /// Brute force: every word checked against the definition (strictly smaller
    /// than each of its proper suffixes).
    fn brute_lyndon(k: usize, n: usize) -> Vec<SimpleWord> {
        let letters: Vec<Sym> = (0..k).map(Sym).collect();
        let mut v: Vec<SimpleWord> = words_up_to(&letters, n)
            .into_iter()
            .filter(|w| is_lyndon(w.letters()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn duval_matches_definition() {
        for k in 1..=3 {
            for n in 0..=6 {
                let mut d = lyndon_words(k, n);
                d.sort();
                assert_eq!(d, brute_lyndon(k, n), "k={k} n={n}");
            }
        }
        // Witt's formula for two letters: 2, 1, 2, 3, 6, 9.
        let counts: Vec<usize> = (1..=6)
            .map(|n| lyndon_words(2, 6).iter().filter(|w| w.len() == n).count())
            .collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
    }

    #[test]
    fn generators_then_commutators() {
        let g = ab();
        let b = LieBracketBasis::new(&g, 3);
        let names: Vec<&str> = b.elements().iter().map(|e| e.bracket.as_str()).collect();
        assert_eq!(names, vec!["a", "b", "[a,b]", "[a,[a,b]]", "[[a,b],b]"]);
        let a = g.parse_chars("a").unwrap();
        assert_eq!(b.elements()[0].expansion, Expansion::from([(a, 1)]));
        let ab_ = &b.elements()[2].expansion;
        assert_eq!(
            ab_,
            &Expansion::from([(g.parse_chars("ab").unwrap(), 1), (g.parse_chars("ba").unwrap(), -1)])
        );
    }

    #[test]
    fn expansions_respect_bracket_rule() {
        let g = Generators::new(["a", "b", "c"]).unwrap();
        let basis = LieBracketBasis::new(&g, 4);
        let by_word: BTreeMap<_, _> = basis
            .elements()
            .iter()
            .map(|e| (e.lyndon.clone(), e.expansion.clone()))
            .collect();
        for e in basis.elements() {
            match standard_factorization(&e.lyndon) {
                None => assert_eq!(e.lyndon.len(), 1),
                Some((u, v)) => {
                    assert_eq!(e.expansion, commutator(&by_word[&u], &by_word[&v]));
                }
            }
            // Homogeneous of the Lyndon word's length.
            assert!(e.expansion.keys().all(|w| w.len() == e.lyndon.len()));
        }
        // The brackets are linearly independent.
        let words = words_up_to(g.letters(), 4);
        let m = QMatrix::from_fn(basis.len(), words.len(), |r, c| {
            int(*basis.elements()[r].expansion.get(&words[c]).unwrap_or(&0))
        });
        assert_eq!(m.rank(), basis.len());
    }

    #[test]
    fn lie_rank_examples() {
        let g1 = Generators::new(["a"]).unwrap();
        let geo = Series::tabulate(g1.clone(), 4, |w: &SimpleWord| ratio(1, 1i64 << w.len()));
        assert_eq!(lie_rank(&geo, 2, 2).unwrap(), 1);
        assert_eq!(lie_rank(&SimpleSeries::zero(ab(), 4), 2, 2).unwrap(), 0);
        assert!(matches!(
            lie_rank(&geo, 3, 2),
            Err(RealizeError::HorizonTooShort { .. })
        ));
    }

    #[test]
    fn a_star_b_rank_by_explicit_tables() {
        // Oracle: build a⇀p, b⇀p and ab⇀p − ba⇀p as coefficient tables, then eliminate.
        let g = ab();
        let (a, b) = (Sym(0), Sym(1));
        let member = |w: &SimpleWord| {
            let l = w.letters();
            !l.is_empty() && l[l.len() - 1] == b && l[..l.len() - 1].iter().all(|&x| x == a)
        };
        let p = Series::indicator(g.clone(), 5, member);
        let ks = words_up_to(g.letters(), 3);
        let table = |w: &str| -> Vec<Scalar> {
            let s = p.right_shift(&g.parse_chars(w).unwrap()).unwrap();
            ks.iter().map(|k| s.evaluate(k).unwrap()).collect()
        };
        let ab_row: Vec<Scalar> = table("ab")
            .into_iter()
            .zip(table("ba"))
            .map(|(x, y)| x - y)
            .collect();
        let m = QMatrix::from_rows(vec![table("a"), table("b"), ab_row]);
        let expected = m.rank();
        assert_eq!(lie_rank(&p, 2, 3).unwrap(), expected);
        // a⇀p vanishes and [a,b]⇀p coincides with b⇀p.
        assert_eq!(expected, 1);
    }

    #[test]
    fn lie_shift_matches_matrix_rows() {
        let g = ab();
        let p = Series::tabulate(g.clone(), 4, |w: &SimpleWord| {
            int(w.letters().iter().map(|s| s.0 as i64 * 2 + 1).product())
        });
        let basis = LieBracketBasis::new(&g, 2);
        let m = lie_matrix(&p, 2, 2).unwrap();
        let ks = words_up_to(g.letters(), 2);
        for (r, e) in basis.elements().iter().enumerate() {
            let s = lie_shift(&p, e).unwrap();
            for (c, k) in ks.iter().enumerate() {
                assert_eq!(s.evaluate(k).unwrap(), m[(r, c)]);
            }
        }
    }
}
