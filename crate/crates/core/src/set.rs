//! Fixed-capacity bitsets over dense element ids.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Result};

const WORD: usize = 64;

/// A subset of `{0, .., universe - 1}`.
///
/// Binary operations require both operands to share a universe and panic
/// otherwise; mixing ground sets is a programming error, not a data error.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ElementSet {
    universe: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn new(universe: usize) -> Self {
        ElementSet {
            universe,
            words: alloc::vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.trim();
        s
    }

    /// Builds a set from element ids, rejecting ids outside the universe.
    pub fn from_ids<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Result<Self> {
        let mut s = Self::new(universe);
        for id in ids {
            if id >= universe {
                return Err(invalid(alloc::format!(
                    "element id {id} out of range for ground set of size {universe}"
                )));
            }
            s.insert(id);
        }
        Ok(s)
    }

    pub fn singleton(universe: usize, e: usize) -> Self {
        let mut s = Self::new(universe);
        s.insert(e);
        s
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        e < self.universe && self.words[e / WORD] >> (e % WORD) & 1 == 1
    }

    /// Inserts `e`; returns `true` if it was not present.
    #[inline]
    pub fn insert(&mut self, e: usize) -> bool {
        assert!(e < self.universe, "element {e} outside universe {}", self.universe);
        let (w, b) = (e / WORD, e % WORD);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    /// Removes `e`; returns `true` if it was present.
    #[inline]
    pub fn remove(&mut self, e: usize) -> bool {
        if e >= self.universe {
            return false;
        }
        let (w, b) = (e / WORD, e % WORD);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.universe, other.universe,
            "element sets over different ground sets"
        );
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> Self {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    /// `self ∪ {e}` as a new set.
    pub fn with(&self, e: usize) -> Self {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    /// `self ∖ {e}` as a new set.
    pub fn without(&self, e: usize) -> Self {
        let mut s = self.clone();
        s.remove(e);
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.check(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// The elements `offset..offset + len`, re-based to start at zero.
    pub fn extract(&self, offset: usize, len: usize) -> Self {
        assert!(offset + len <= self.universe);
        let mut out = Self::new(len);
        if offset.is_multiple_of(WORD) {
            let start = offset / WORD;
            let n = out.words.len();
            out.words.copy_from_slice(&self.words[start..start + n]);
            out.trim();
        } else {
            for e in 0..len {
                if self.contains(offset + e) {
                    out.insert(e);
                }
            }
        }
        out
    }

    /// Maps every element through `map` into a set over `universe`.
    pub fn map_into(&self, universe: usize, map: &[usize]) -> Self {
        let mut out = Self::new(universe);
        for e in self.iter() {
            out.insert(map[e]);
        }
        out
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone)]
pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}
