//! Matroids presented through their rank function.

mod flow;
mod kinds;
mod minor;
mod partition;

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::set::ElementSet;

pub use kinds::{DirectSum, Explicit, Graphic, MatroidKind, Partition, Uniform, MAX_EXPLICIT_GROUND};
pub use minor::{MinorView, ParallelExtension};
pub use partition::MatroidPartition;

/// A matroid given by ground-set size and rank function.
///
/// `rank` is only called with sets over `ground_size()` elements; the
/// checked free functions in this module enforce that for callers holding
/// untrusted sets. Implementations must be loopless unless they are minors
/// of loopless matroids.
pub trait RankOracle {
    fn ground_size(&self) -> usize;

    fn rank(&self, set: &ElementSet) -> usize;

    fn label(&self) -> String {
        String::from("matroid")
    }

    /// `self / contract | restrict` as a concrete matroid on the elements of
    /// `restrict` in increasing order. `None` when the kind is not closed
    /// under minors or the minor has loops.
    fn minor_kind(&self, _contract: &ElementSet, _restrict: &ElementSet) -> Option<MatroidKind> {
        None
    }

    /// `D(S, p/q)` for `p > q > 0`, when the kind has a method faster than
    /// matroid partition.
    fn densest_direct(&self, _subset: &ElementSet, _p: usize, _q: usize) -> Option<ElementSet> {
        None
    }
}

impl<T: RankOracle + ?Sized> RankOracle for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn rank(&self, set: &ElementSet) -> usize {
        (**self).rank(set)
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn minor_kind(&self, contract: &ElementSet, restrict: &ElementSet) -> Option<MatroidKind> {
        (**self).minor_kind(contract, restrict)
    }
    fn densest_direct(&self, subset: &ElementSet, p: usize, q: usize) -> Option<ElementSet> {
        (**self).densest_direct(subset, p, q)
    }
}

impl<T: RankOracle + ?Sized> RankOracle for alloc::boxed::Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn rank(&self, set: &ElementSet) -> usize {
        (**self).rank(set)
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn minor_kind(&self, contract: &ElementSet, restrict: &ElementSet) -> Option<MatroidKind> {
        (**self).minor_kind(contract, restrict)
    }
    fn densest_direct(&self, subset: &ElementSet, p: usize, q: usize) -> Option<ElementSet> {
        (**self).densest_direct(subset, p, q)
    }
}

impl<T: RankOracle + ?Sized> RankOracle for alloc::sync::Arc<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn rank(&self, set: &ElementSet) -> usize {
        (**self).rank(set)
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn minor_kind(&self, contract: &ElementSet, restrict: &ElementSet) -> Option<MatroidKind> {
        (**self).minor_kind(contract, restrict)
    }
    fn densest_direct(&self, subset: &ElementSet, p: usize, q: usize) -> Option<ElementSet> {
        (**self).densest_direct(subset, p, q)
    }
}

/// Derived matroid operations available on every rank oracle.
pub trait MatroidExt: RankOracle {
    fn ground(&self) -> ElementSet {
        ElementSet::full(self.ground_size())
    }

    fn empty(&self) -> ElementSet {
        ElementSet::new(self.ground_size())
    }

    fn full_rank(&self) -> usize {
        self.rank(&self.ground())
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.rank(set) == set.len()
    }

    /// Whether `set ∪ {e}` is independent, given that `set` is.
    fn can_extend(&self, independent: &ElementSet, e: usize) -> bool {
        !independent.contains(e) && self.rank(&independent.with(e)) == independent.len() + 1
    }

    /// Closure of `set`: every element whose addition keeps the rank.
    fn span(&self, set: &ElementSet) -> ElementSet {
        let r = self.rank(set);
        let mut out = set.clone();
        for e in 0..self.ground_size() {
            if !set.contains(e) && self.rank(&set.with(e)) == r {
                out.insert(e);
            }
        }
        out
    }

    fn in_span(&self, set: &ElementSet, e: usize) -> bool {
        set.contains(e) || self.rank(&set.with(e)) == self.rank(set)
    }
}

impl<T: RankOracle + ?Sized> MatroidExt for T {}

fn check_universe<O: RankOracle + ?Sized>(oracle: &O, set: &ElementSet) -> Result<()> {
    if set.universe() != oracle.ground_size() {
        return Err(invalid(alloc::format!(
            "set over {} elements passed to matroid with ground set of size {}",
            set.universe(),
            oracle.ground_size()
        )));
    }
    Ok(())
}

/// Rank of `subset`, rejecting sets over a different ground set.
pub fn rank<O: RankOracle + ?Sized>(oracle: &O, subset: &ElementSet) -> Result<usize> {
    check_universe(oracle, subset)?;
    Ok(oracle.rank(subset))
}

/// Rank of a set given as raw element ids.
pub fn rank_of_ids<O: RankOracle + ?Sized>(oracle: &O, ids: &[usize]) -> Result<usize> {
    let set = ElementSet::from_ids(oracle.ground_size(), ids.iter().copied())?;
    Ok(oracle.rank(&set))
}

pub fn is_independent<O: RankOracle + ?Sized>(oracle: &O, subset: &ElementSet) -> Result<bool> {
    check_universe(oracle, subset)?;
    Ok(oracle.is_independent(subset))
}

pub fn span<O: RankOracle + ?Sized>(oracle: &O, subset: &ElementSet) -> Result<ElementSet> {
    check_universe(oracle, subset)?;
    Ok(oracle.span(subset))
}

/// Maximum-weight independent set by the matroid greedy algorithm.
///
/// Elements are scanned by weight descending, ties by id ascending, so the
/// output is deterministic.
pub fn greedy_max_weight<O: RankOracle + ?Sized>(oracle: &O, weights: &[f64]) -> Result<ElementSet> {
    if weights.len() != oracle.ground_size() {
        return Err(invalid(alloc::format!(
            "{} weights for a ground set of size {}",
            weights.len(),
            oracle.ground_size()
        )));
    }
    if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
        return Err(invalid(alloc::format!("weights must be non-negative, got {w}")));
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let mut picked = oracle.empty();
    let full = oracle.full_rank();
    for e in order {
        if picked.len() == full {
            break;
        }
        if oracle.can_extend(&picked, e) {
            picked.insert(e);
        }
    }
    Ok(picked)
}

pub fn weight_of(set: &ElementSet, weights: &[f64]) -> f64 {
    set.iter().map(|e| weights[e]).fold(0.0, |a, w| a + w)
}

/// The minor `M / contract | restrict_to`, re-indexed over `restrict_to`.
pub fn minor<'a, O: RankOracle + 'a>(
    oracle: &'a O,
    contract: &ElementSet,
    restrict_to: &ElementSet,
) -> Result<MinorView<'a>> {
    MinorView::new(oracle, contract, restrict_to)
}

pub fn parallel_extension<'a, O: RankOracle + 'a>(oracle: &'a O, copies: usize) -> Result<ParallelExtension<'a>> {
    ParallelExtension::new(oracle, copies)
}

/// Rank of `subset` in the `h`-fold union of the matroid.
pub fn union_rank<O: RankOracle + ?Sized>(oracle: &O, subset: &ElementSet, h: usize) -> Result<usize> {
    check_universe(oracle, subset)?;
    if h == 0 {
        return Err(invalid("union rank needs h >= 1"));
    }
    Ok(MatroidPartition::compute(oracle, subset, h, 1)?.covered())
}
