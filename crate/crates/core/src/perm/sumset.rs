//! Dense bit-vector sumsets.
//!
//! A [`SumsetBitset`] holds every value `0..=cap` that can be written as a
//! sub-multiset sum of some list of part lengths. Parts are folded in with a
//! shift-and-or, using binary splitting for repeated parts.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SumsetBitset {
    cap: usize,
    words: Vec<u64>,
    /// Sum of every part folded in so far (ignores `cap`).
    total: usize,
}

impl SumsetBitset {
    /// The sumset of the empty list: just `{0}`.
    pub fn zero(cap: usize) -> Self {
        let mut words = vec![0u64; cap / WORD + 1];
        words[0] = 1;
        SumsetBitset { cap, words, total: 0 }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Sum of all parts, regardless of `cap`.
    pub fn total(&self) -> usize {
        self.total
    }

    /// True when some achievable sums were cut off by `cap`.
    pub fn is_truncated(&self) -> bool {
        self.total > self.cap
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, value: usize) -> bool {
        value <= self.cap && self.words[value / WORD] >> (value % WORD) & 1 == 1
    }

    /// Folds in `multiplicity` copies of a part of length `len`.
    pub fn add_part(&mut self, len: usize, multiplicity: usize) {
        if len == 0 || multiplicity == 0 {
            return;
        }
        self.total = self.total.saturating_add(len.saturating_mul(multiplicity));
        // 1, 2, 4, ..., rest: every count in 0..=multiplicity is a sub-sum.
        let mut left = multiplicity;
        let mut chunk = 1usize;
        while left > 0 {
            let take = chunk.min(left);
            match len.checked_mul(take) {
                Some(shift) if shift <= self.cap => self.shift_or(shift),
                _ => break,
            }
            left -= take;
            chunk = chunk.saturating_mul(2);
        }
    }

    /// `self |= self << shift`, truncated at `cap`.
    fn shift_or(&mut self, shift: usize) {
        let ws = shift / WORD;
        let bs = shift % WORD;
        let n = self.words.len();
        for i in (ws..n).rev() {
            let src = i - ws;
            let mut v = self.words[src] << bs;
            if bs > 0 && src > 0 {
                v |= self.words[src - 1] >> (WORD - bs);
            }
            self.words[i] |= v;
        }
        self.mask_tail();
    }

    fn mask_tail(&mut self) {
        let used = self.cap % WORD + 1;
        if used < WORD {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << used) - 1;
        }
    }

    /// In-place intersection. Both sides must share `cap`.
    pub fn intersect_with(&mut self, other: &SumsetBitset) {
        debug_assert_eq!(self.cap, other.cap);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
        self.total = self.total.min(other.total);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Smallest set value in `lo..=hi`.
    pub fn first_in(&self, lo: usize, hi: usize) -> Option<usize> {
        let hi = hi.min(self.cap);
        if lo > hi {
            return None;
        }
        let mut wi = lo / WORD;
        let mut w = self.words[wi] & (!0u64 << (lo % WORD));
        loop {
            if w != 0 {
                let v = wi * WORD + w.trailing_zeros() as usize;
                return (v <= hi).then_some(v);
            }
            wi += 1;
            if wi * WORD > hi {
                return None;
            }
            w = self.words[wi];
        }
    }

    /// Smallest value strictly between `0` and `n`.
    pub fn interior_min(&self, n: usize) -> Option<usize> {
        if n < 2 {
            return None;
        }
        self.first_in(1, n - 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for SumsetBitset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SumsetBitset")
            .field("cap", &self.cap)
            .field("values", &self.to_vec())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(parts: &[usize], cap: usize) -> Vec<usize> {
        let mut out = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << parts.len()) {
            let s: usize = (0..parts.len()).filter(|i| mask >> i & 1 == 1).map(|i| parts[i]).sum();
            if s <= cap {
                out.insert(s);
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn zero_holds_only_zero() {
        let s = SumsetBitset::zero(130);
        assert_eq!(s.to_vec(), vec![0]);
        assert!(!s.is_truncated());
    }

    #[test]
    fn multiplicity_uses_every_count() {
        let mut s = SumsetBitset::zero(100);
        s.add_part(7, 5);
        assert_eq!(s.to_vec(), vec![0, 7, 14, 21, 28, 35]);
        let mut t = SumsetBitset::zero(100);
        t.add_part(1, 2);
        assert_eq!(t.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn matches_brute_force_across_word_boundaries() {
        let parts = [63, 64, 65, 1, 129, 3, 3, 70];
        let cap = 200;
        let mut s = SumsetBitset::zero(cap);
        for &p in &parts {
            s.add_part(p, 1);
        }
        assert_eq!(s.to_vec(), brute(&parts, cap));
        assert!(s.is_truncated());
    }

    #[test]
    fn first_in_scans_words() {
        let mut s = SumsetBitset::zero(300);
        s.add_part(250, 1);
        assert_eq!(s.first_in(1, 299), Some(250));
        assert_eq!(s.first_in(1, 249), None);
        assert_eq!(s.interior_min(250), None);
        assert_eq!(s.interior_min(251), Some(250));
    }
}
