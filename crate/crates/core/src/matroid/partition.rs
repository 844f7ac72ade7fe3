//! Matroid partition: pack elements of a set into `bins` independent sets,
//! each element used at most `copies` times and at most once per bin.
//!
//! With `copies = 1` this is the classical matroid partition problem and the
//! number of covered elements is the `bins`-fold union rank. With `copies = q`
//! it is the partition problem on the `q`-fold parallel extension with the
//! copies of an element merged into one node of the exchange graph.

use alloc::vec::Vec;

use super::RankOracle;
use crate::error::{invalid, Result};
use crate::set::ElementSet;

const UNREACHED: u32 = u32::MAX;

/// A maximum packing together with the elements that can still reach a
/// free slot.
#[derive(Debug, Clone)]
pub struct MatroidPartition {
    bins: Vec<ElementSet>,
    subset: ElementSet,
    reaching: ElementSet,
}

impl MatroidPartition {
    pub fn compute<O: RankOracle + ?Sized>(
        oracle: &O,
        subset: &ElementSet,
        bins: usize,
        copies: usize,
    ) -> Result<Self> {
        if bins == 0 || copies == 0 {
            return Err(invalid("matroid partition needs at least one bin and one copy"));
        }
        if subset.universe() != oracle.ground_size() {
            return Err(invalid("subset does not match the oracle's ground set"));
        }
        let mut engine = Engine {
            oracle,
            full_rank: oracle.rank(subset),
            sizes: alloc::vec![0; bins],
            bins: alloc::vec![ElementSet::new(subset.universe()); bins],
            subset: subset.clone(),
            levels: None,
        };
        for x in subset {
            let mut used = 0;
            while used < copies {
                if let Some(j) = engine.direct_slot(x) {
                    engine.place(x, j);
                } else {
                    let level = engine.levels()[x];
                    if level == UNREACHED {
                        break;
                    }
                    engine.augment(x);
                }
                used += 1;
            }
        }
        let levels = engine.levels();
        let mut reaching = ElementSet::new(subset.universe());
        for e in subset {
            if levels[e] != UNREACHED {
                reaching.insert(e);
            }
        }
        Ok(MatroidPartition {
            bins: engine.bins,
            subset: subset.clone(),
            reaching,
        })
    }

    pub fn bins(&self) -> &[ElementSet] {
        &self.bins
    }

    /// Total number of (element, bin) placements.
    pub fn covered(&self) -> usize {
        self.bins.iter().map(ElementSet::len).sum()
    }

    /// Elements of the subset with an augmenting path to a free slot.
    pub fn reaching(&self) -> &ElementSet {
        &self.reaching
    }

    /// Elements with no augmenting path: the maximal minimizer side of the
    /// min-max formula.
    pub fn stuck(&self) -> ElementSet {
        self.subset.difference(&self.reaching)
    }
}

struct Engine<'o, O: ?Sized> {
    oracle: &'o O,
    full_rank: usize,
    subset: ElementSet,
    bins: Vec<ElementSet>,
    sizes: Vec<usize>,
    levels: Option<Vec<u32>>,
}

impl<O: RankOracle + ?Sized> Engine<'_, O> {
    fn fits(&self, x: usize, j: usize) -> bool {
        !self.bins[j].contains(x)
            && self.sizes[j] < self.full_rank
            && self.oracle.rank(&self.bins[j].with(x)) > self.sizes[j]
    }

    fn direct_slot(&self, x: usize) -> Option<usize> {
        (0..self.bins.len()).find(|&j| self.fits(x, j))
    }

    fn place(&mut self, x: usize, j: usize) {
        self.bins[j].insert(x);
        self.sizes[j] += 1;
        self.levels = None;
    }

    /// Distance of every subset element to a free slot in the exchange graph.
    fn levels(&mut self) -> &[u32] {
        if self.levels.is_none() {
            self.levels = Some(self.compute_levels());
        }
        self.levels.as_deref().unwrap_or(&[])
    }

    fn compute_levels(&self) -> Vec<u32> {
        let mut level = alloc::vec![UNREACHED; self.subset.universe()];
        let mut labeled = ElementSet::new(self.subset.universe());
        let mut frontier = ElementSet::new(self.subset.universe());
        for e in &self.subset {
            if self.direct_slot(e).is_some() {
                level[e] = 0;
                frontier.insert(e);
            }
        }
        labeled.union_with(&frontier);
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            // Only bins that lost an element to the last layer can have
            // changed their answer for unlabeled elements.
            let dirty: Vec<(usize, ElementSet)> = (0..self.bins.len())
                .filter(|&j| !self.bins[j].is_disjoint(&frontier))
                .map(|j| (j, self.bins[j].difference(&labeled)))
                .collect();
            let mut next = ElementSet::new(self.subset.universe());
            for e in &self.subset {
                if level[e] != UNREACHED {
                    continue;
                }
                for (j, rest) in &dirty {
                    if self.bins[*j].contains(e) {
                        continue;
                    }
                    if self.oracle.rank(&rest.with(e)) > rest.len() {
                        level[e] = d;
                        next.insert(e);
                        break;
                    }
                }
            }
            labeled.union_with(&next);
            frontier = next;
        }
        level
    }

    /// Moves along a shortest path from `x` to a free slot, adding one new
    /// placement of `x`. Requires `x` to be reachable.
    fn augment(&mut self, x: usize) {
        let level = self.levels().to_vec();
        let mut steps: Vec<(usize, usize, Option<usize>)> = Vec::new();
        let mut cur = x;
        loop {
            let lc = level[cur];
            if lc == 0 {
                let j = self
                    .direct_slot(cur)
                    .expect("level-0 element has a direct slot");
                steps.push((cur, j, None));
                break;
            }
            let mut found = None;
            'bins: for j in 0..self.bins.len() {
                if self.bins[j].contains(cur) {
                    continue;
                }
                for y in &self.bins[j] {
                    if level[y] != lc - 1 {
                        continue;
                    }
                    let mut swapped = self.bins[j].without(y);
                    swapped.insert(cur);
                    if self.oracle.rank(&swapped) == self.sizes[j] {
                        found = Some((j, y));
                        break 'bins;
                    }
                }
            }
            let (j, y) = found.expect("labeled element has an edge one level down");
            steps.push((cur, j, Some(y)));
            cur = y;
        }
        for (e, j, out) in steps {
            self.bins[j].insert(e);
            match out {
                Some(y) => {
                    self.bins[j].remove(y);
                }
                None => self.sizes[j] += 1,
            }
        }
        self.levels = None;
    }
}
