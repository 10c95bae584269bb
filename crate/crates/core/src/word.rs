//! Finite words over an ordered letter set.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

/// Anything usable as a letter: a dense, totally ordered index type.
pub trait Letter: Copy + Ord + Hash + Debug + Send + Sync + 'static {}

impl<T: Copy + Ord + Hash + Debug + Send + Sync + 'static> Letter for T {}

/// A finite sequence of letters. Ordered length-first, then lexicographically,
/// so sorted collections of words come out in length-lex order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word<L>(Vec<L>);

impl<L: Letter> Debug for Word<L> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            f.debug_list().entries(&self.0).finish()
        }
    }
}

impl<L: Letter> Ord for Word<L> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl<L: Letter> PartialOrd for Word<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: Letter> From<Vec<L>> for Word<L> {
    fn from(v: Vec<L>) -> Self {
        Word(v)
    }
}

impl<L: Letter> FromIterator<L> for Word<L> {
    fn from_iter<I: IntoIterator<Item = L>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<L: Letter> Word<L> {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(letter: L) -> Self {
        Word(vec![letter])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[L] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<L> {
        self.0
    }

    pub fn concat(&self, other: &Word<L>) -> Word<L> {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, letter: L) {
        self.0.push(letter);
    }

    pub fn appended(&self, letter: L) -> Word<L> {
        let mut w = self.clone();
        w.push(letter);
        w
    }

    /// `Some(k)` when `self = k · suffix`.
    pub fn strip_suffix(&self, suffix: &Word<L>) -> Option<Word<L>> {
        self.0
            .strip_suffix(suffix.0.as_slice())
            .map(|k| Word(k.to_vec()))
    }

    /// `Some(k)` when `self = prefix · k`.
    pub fn strip_prefix(&self, prefix: &Word<L>) -> Option<Word<L>> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|k| Word(k.to_vec()))
    }

    pub fn reversed(&self) -> Word<L> {
        Word(self.0.iter().rev().copied().collect())
    }
}

/// Number of words of length at most `n` over `k` letters.
pub fn count_words_up_to(k: usize, n: usize) -> usize {
    (0..=n).map(|len| k.pow(len as u32)).sum()
}

/// All words of length exactly `len`, in lexicographic order of the letter slice.
pub fn words_of_len<L: Letter>(letters: &[L], len: usize) -> Vec<Word<L>> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for w in &out {
            for &l in letters {
                next.push(w.appended(l));
            }
        }
        out = next;
    }
    out
}

/// All words of length at most `n`, in length-lex order.
///
/// `letters` must be sorted for the output to be sorted under `Word`'s `Ord`.
pub fn words_up_to<L: Letter>(letters: &[L], n: usize) -> Vec<Word<L>> {
    (0..=n).flat_map(|len| words_of_len(letters, len)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumeration_is_length_lex() {
        let ws = words_up_to(&[0u8, 1], 2);
        let expect: Vec<Word<u8>> = vec![
            vec![],
            vec![0],
            vec![1],
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![1, 1],
        ]
        .into_iter()
        .map(Word::from)
        .collect();
        assert_eq!(ws, expect);
        let mut sorted = ws.clone();
        sorted.sort();
        assert_eq!(sorted, ws);
        assert_eq!(ws.len(), count_words_up_to(2, 2));
    }

    #[test]
    fn strip_affixes() {
        let w = Word::from(vec![1, 2, 3]);
        assert_eq!(w.strip_suffix(&Word::from(vec![3])), Some(Word::from(vec![1, 2])));
        assert_eq!(w.strip_prefix(&Word::from(vec![1, 2])), Some(Word::from(vec![3])));
        assert_eq!(w.strip_prefix(&Word::from(vec![2])), None);
        assert_eq!(w.strip_suffix(&Word::empty()), Some(w.clone()));
    }

    fn word() -> impl Strategy<Value = Word<u8>> {
        proptest::collection::vec(0u8..3, 0..=6).prop_map(Word::from)
    }

    proptest! {
        #[test]
        fn concat_is_a_monoid(u in word(), v in word(), w in word()) {
            prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
            prop_assert_eq!(u.concat(&Word::empty()), u.clone());
            prop_assert_eq!(Word::empty().concat(&u), u.clone());
            prop_assert_eq!(u.concat(&v).len(), u.len() + v.len());
        }
    }
}
