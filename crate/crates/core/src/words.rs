//! Free-group words and ordered word multisets.
//!
//! A [`Word`] is a sequence of nonzero signed generator indices: letter `i`
//! means the generator `x_i`, letter `-i` its inverse (indices are 1-based).
//! A [`WordSet`] is an *ordered* multiset of words over a declared rank —
//! order matters because word sets act as set word maps, and duplicates are
//! legal and counted.
//!
//! Words are stored exactly as constructed. Certificate computations read
//! the stored letter sequence (a product with a cancelled pair is still a
//! product), while [`length_stats`] reports freely reduced lengths.

use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// A word in a free group: nonzero signed 1-based generator indices.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<i32>,
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Word{:?}", self.letters)
    }
}

impl Word {
    /// The empty word (identity element).
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if let Some(&l) = letters.iter().find(|&&l| l == 0) {
            return Err(Error::LetterOutOfRange { letter: l, rank: 0 });
        }
        Ok(Word { letters })
    }

    /// Word consisting of the single generator `x_i` (1-based).
    pub fn generator(i: usize) -> Self {
        Word { letters: vec![i as i32] }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used (0 for the empty word).
    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Free reduction: repeatedly cancel adjacent `(i, -i)` pairs.
    /// Idempotent, and evaluation in any group is unchanged.
    pub fn reduce(&self) -> Word {
        let mut stack: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match stack.last() {
                Some(&top) if top == -l => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word { letters: stack }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1])
    }

    /// Length of the freely reduced form.
    pub fn reduced_len(&self) -> usize {
        self.reduce().len()
    }

    /// The inverse word: reversed letters with flipped signs.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Concatenation (no reduction).
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Substitute `g[i-1]` for generator `x_i` in this word.
    /// The result is freely reduced.
    pub fn substitute(&self, g: &[Word]) -> Result<Word> {
        let mut out: Vec<i32> = Vec::new();
        for &l in &self.letters {
            let idx = l.unsigned_abs() as usize;
            if idx == 0 || idx > g.len() {
                return Err(Error::LetterOutOfRange { letter: l, rank: g.len() });
            }
            let w = &g[idx - 1];
            if l > 0 {
                out.extend_from_slice(&w.letters);
            } else {
                out.extend(w.letters.iter().rev().map(|&x| -x));
            }
        }
        Ok(Word { letters: out }.reduce())
    }

    /// Signed exponent sums per generator index (the abelianized image).
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = vec![0i64; rank];
        for &l in &self.letters {
            let idx = l.unsigned_abs() as usize - 1;
            sums[idx] += if l > 0 { 1 } else { -1 };
        }
        sums
    }

    /// Total occurrences of letters with index in `indices`, signs ignored,
    /// counted in the stored (unreduced) sequence.
    pub fn occurrences_in(&self, indices: &[u32]) -> u64 {
        self.letters
            .iter()
            .filter(|l| indices.contains(&(l.unsigned_abs())))
            .count() as u64
    }
}

/// An ordered multiset of words over a declared rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSet {
    pub rank: usize,
    pub label: String,
    pub words: Vec<Word>,
}

impl WordSet {
    pub fn new(rank: usize, words: Vec<Word>, label: impl Into<String>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParams("rank must be positive".into()));
        }
        if words.is_empty() {
            return Err(Error::InvalidParams("word set must be nonempty".into()));
        }
        for w in &words {
            for &l in w.letters() {
                if l == 0 || l.unsigned_abs() as usize > rank {
                    return Err(Error::LetterOutOfRange { letter: l, rank });
                }
            }
        }
        Ok(WordSet { rank, label: label.into(), words })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The standard basis `x_1, ..., x_k` as a word set.
    pub fn basis(rank: usize) -> Self {
        WordSet {
            rank,
            label: format!("basis(k={rank})"),
            words: (1..=rank).map(Word::generator).collect(),
        }
    }

    /// Apply this set as a set word map to a tuple of words.
    ///
    /// `g.words` substitutes for the generators, so `g.words.len()` must
    /// equal `self.rank`; the output lives over `g.rank` and preserves the
    /// order of `self.words`. Output words are freely reduced.
    pub fn set_word_map(&self, g: &WordSet) -> Result<WordSet> {
        if g.words.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: g.words.len() });
        }
        let words = self
            .words
            .iter()
            .map(|w| w.substitute(&g.words))
            .collect::<Result<Vec<_>>>()?;
        WordSet::new(
            g.rank,
            words,
            format!("{}({})", self.label, g.label),
        )
    }

    pub fn reduce_all(&self) -> WordSet {
        WordSet {
            rank: self.rank,
            label: self.label.clone(),
            words: self.words.iter().map(|w| w.reduce()).collect(),
        }
    }

    /// Abelianized rows mod 2 as bitmasks, for rank <= 64.
    pub fn parity_masks(&self) -> Result<Vec<u64>> {
        if self.rank > 64 {
            return Err(Error::CapExceeded {
                what: "bitmask abelianization",
                needed: self.rank as u128,
                cap: 64,
            });
        }
        Ok(self
            .words
            .iter()
            .map(|w| {
                let mut m = 0u64;
                for &l in w.letters() {
                    m ^= 1u64 << (l.unsigned_abs() - 1);
                }
                m
            })
            .collect())
    }
}

/// Reduced-length statistics of a word set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthStats {
    pub max_len: usize,
    pub avg_len: Ratio<u64>,
}

/// Maximum and average freely reduced word length.
pub fn length_stats(set: &WordSet) -> LengthStats {
    let lens: Vec<usize> = set.words.iter().map(|w| w.reduced_len()).collect();
    let max_len = lens.iter().copied().max().unwrap_or(0);
    let total: u64 = lens.iter().map(|&l| l as u64).sum();
    LengthStats {
        max_len,
        avg_len: Ratio::new(total, set.words.len() as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[i32]) -> Word {
        Word::new(letters.to_vec()).unwrap()
    }

    #[test]
    fn reduce_identity_cancellation() {
        assert_eq!(w(&[1, -1]).reduce(), Word::identity());
    }

    #[test]
    fn reduce_nested_cancellation() {
        assert_eq!(w(&[1, 2, -2, -1]).reduce(), Word::identity());
    }

    #[test]
    fn reduce_inner_cancellation_only() {
        assert_eq!(w(&[1, 2, -2, 1]).reduce(), w(&[1, 1]));
    }

    #[test]
    fn reduce_is_idempotent() {
        let word = w(&[3, -3, 2, 1, -1, -2, 2]);
        let once = word.reduce();
        assert_eq!(once.reduce(), once);
    }

    #[test]
    fn set_word_map_collapse_to_one_generator() {
        let a = WordSet::new(2, vec![w(&[1]), w(&[2]), w(&[1, 2])], "a").unwrap();
        let g = WordSet::new(1, vec![w(&[1]), w(&[1])], "g").unwrap();
        let out = a.set_word_map(&g).unwrap();
        assert_eq!(out.words, vec![w(&[1]), w(&[1]), w(&[1, 1])]);
        assert_eq!(out.rank, 1);
    }

    #[test]
    fn set_word_map_swap() {
        let a = WordSet::new(2, vec![w(&[1, 2])], "a").unwrap();
        let g = WordSet::new(2, vec![w(&[2]), w(&[1])], "g").unwrap();
        assert_eq!(a.set_word_map(&g).unwrap().words, vec![w(&[2, 1])]);
    }

    #[test]
    fn set_word_map_identity_on_basis() {
        let a = WordSet::basis(2);
        let g = WordSet::new(3, vec![w(&[3, 1]), w(&[-2])], "g").unwrap();
        let out = a.set_word_map(&g).unwrap();
        assert_eq!(out.words, g.words);
    }

    #[test]
    fn set_word_map_rank_mismatch() {
        let a = WordSet::basis(2);
        let g = WordSet::new(1, vec![w(&[1])], "g").unwrap();
        assert!(a.set_word_map(&g).is_err());
    }

    #[test]
    fn substitute_handles_inverses() {
        // x1 x2^-1 with x1 -> [1,2], x2 -> [3] gives [1,2,-3]
        let word = w(&[1, -2]);
        let out = word.substitute(&[w(&[1, 2]), w(&[3])]).unwrap();
        assert_eq!(out, w(&[1, 2, -3]));
    }

    #[test]
    fn length_stats_basic() {
        let a = WordSet::new(2, vec![w(&[1]), w(&[2])], "a").unwrap();
        let s = length_stats(&a);
        assert_eq!(s.max_len, 1);
        assert_eq!(s.avg_len, Ratio::new(1, 1));

        let b = WordSet::new(2, vec![Word::identity(), w(&[1, 2])], "b").unwrap();
        let s = length_stats(&b);
        assert_eq!(s.max_len, 2);
        assert_eq!(s.avg_len, Ratio::new(1, 1));
    }

    #[test]
    fn length_stats_uses_reduced_lengths() {
        let a = WordSet::new(2, vec![w(&[1, -1, 2]), w(&[1, 2, -2, -1])], "a").unwrap();
        let s = length_stats(&a);
        assert_eq!(s.max_len, 1);
        assert_eq!(s.avg_len, Ratio::new(1, 2));
    }

    #[test]
    fn occurrences_count_unreduced() {
        // [1,-1] reduces away, but the stored product has two occurrences.
        assert_eq!(w(&[1, -1]).occurrences_in(&[1]), 2);
        assert_eq!(w(&[1, 1]).occurrences_in(&[1]), 2);
        assert_eq!(w(&[1, 2]).occurrences_in(&[1, 2]), 2);
    }

    #[test]
    fn wordset_rejects_out_of_range() {
        assert!(WordSet::new(2, vec![w(&[3])], "bad").is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = WordSet::new(3, vec![w(&[1, -3]), Word::identity()], "roundtrip").unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let b: WordSet = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        // field layout pinned by the external interface
        assert!(s.contains("\"rank\":3"));
        assert!(s.contains("\"words\":[[1,-3],[]]"));
    }
}
