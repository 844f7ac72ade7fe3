use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::{Cell, RefCell};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::matroid::{MatroidKind, RankOracle};
use crate::set::ElementSet;
use crate::weights::WeightProfile;

/// Draws `|N|` of the profile's weights uniformly without replacement and
/// assigns them to the elements in uniformly random order.
pub fn assign_weights<R: Rng + ?Sized>(profile: &WeightProfile, elements: usize, rng: &mut R) -> Result<Vec<f64>> {
    if elements > profile.len() {
        return Err(invalid(format!(
            "{elements} elements but only {} weights in the profile",
            profile.len()
        )));
    }
    let mut idx: Vec<usize> = (0..profile.len()).collect();
    idx.shuffle(rng);
    Ok(idx[..elements].iter().map(|&i| profile.weights()[i]).collect())
}

pub fn random_order<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

/// One trial's view of an instance: a matroid, weights per element and an
/// arrival order, revealed one element at a time.
///
/// The stream is itself a [`RankOracle`] over the full ground set, but it
/// answers honestly only for revealed elements. Any query touching an
/// unrevealed element, any selection of something other than the current
/// arrival, and any selection that breaks independence is recorded as a
/// protocol violation.
pub struct ArrivalStream<'m> {
    matroid: &'m dyn RankOracle,
    weights: Vec<f64>,
    order: Vec<usize>,
    pos: Cell<usize>,
    current: Cell<Option<usize>>,
    revealed: RefCell<ElementSet>,
    sampled: RefCell<ElementSet>,
    selected: RefCell<ElementSet>,
    violation: RefCell<Option<String>>,
    queries: Cell<u64>,
}

impl core::fmt::Debug for ArrivalStream<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ArrivalStream")
            .field("matroid", &self.matroid.label())
            .field("position", &self.pos.get())
            .field("selected", &self.selected.borrow())
            .finish()
    }
}

impl<'m> ArrivalStream<'m> {
    /// `weights[e]` is the weight of element `e`; `order` lists every
    /// element once.
    pub fn new(matroid: &'m dyn RankOracle, weights: Vec<f64>, order: Vec<usize>) -> Result<Self> {
        let n = matroid.ground_size();
        if weights.len() != n {
            return Err(invalid(format!("{} weights for {n} elements", weights.len())));
        }
        if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(invalid("weights must be non-negative"));
        }
        let mut seen = ElementSet::new(n);
        for &e in &order {
            if e >= n || !seen.insert(e) {
                return Err(invalid("arrival order must list every element exactly once"));
            }
        }
        if order.len() != n {
            return Err(invalid("arrival order must list every element exactly once"));
        }
        Ok(ArrivalStream {
            matroid,
            weights,
            order,
            pos: Cell::new(0),
            current: Cell::new(None),
            revealed: RefCell::new(ElementSet::new(n)),
            sampled: RefCell::new(ElementSet::new(n)),
            selected: RefCell::new(ElementSet::new(n)),
            violation: RefCell::new(None),
            queries: Cell::new(0),
        })
    }

    /// Random assignment of `profile` weights and uniformly random order.
    pub fn random<R: Rng + ?Sized>(matroid: &'m dyn RankOracle, profile: &WeightProfile, rng: &mut R) -> Result<Self> {
        let n = matroid.ground_size();
        let weights = assign_weights(profile, n, rng)?;
        let order = random_order(n, rng);
        Self::new(matroid, weights, order)
    }

    pub fn ground_size(&self) -> usize {
        self.order.len()
    }

    /// Elements not yet revealed.
    pub fn remaining(&self) -> usize {
        self.order.len() - self.revealed.borrow().len()
    }

    fn flag(&self, msg: String) {
        let mut v = self.violation.borrow_mut();
        if v.is_none() {
            *v = Some(msg);
        }
    }

    fn advance(&self) -> Option<usize> {
        let revealed = self.revealed.borrow();
        let mut p = self.pos.get();
        while p < self.order.len() && revealed.contains(self.order[p]) {
            p += 1;
        }
        self.pos.set(p);
        self.order.get(p).copied()
    }

    /// Reveals the next arrival, which becomes selectable until the next
    /// call.
    pub fn next_arrival(&self) -> Option<(usize, f64)> {
        let e = self.advance()?;
        self.revealed.borrow_mut().insert(e);
        self.pos.set(self.pos.get() + 1);
        self.current.set(Some(e));
        Some((e, self.weights[e]))
    }

    /// Sampling phase: every unrevealed element joins the sample
    /// independently with probability `p`. Sampled elements are revealed
    /// but can never be selected.
    pub fn sample<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> Result<ElementSet> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("sampling probability {p} outside [0,1]")));
        }
        self.current.set(None);
        let mut out = ElementSet::new(self.ground_size());
        let mut revealed = self.revealed.borrow_mut();
        for &e in &self.order {
            if !revealed.contains(e) && rng.random_bool(p) {
                out.insert(e);
            }
        }
        revealed.union_with(&out);
        self.sampled.borrow_mut().union_with(&out);
        Ok(out)
    }

    /// Sampling phase with a fixed sample, for fixtures that prescribe it.
    pub fn sample_exact(&self, set: &ElementSet) -> Result<()> {
        if set.universe() != self.ground_size() {
            return Err(invalid("sample does not match the ground set"));
        }
        self.current.set(None);
        let mut revealed = self.revealed.borrow_mut();
        if !set.is_disjoint(&revealed) {
            return Err(invalid("sample contains revealed elements"));
        }
        revealed.union_with(set);
        self.sampled.borrow_mut().union_with(set);
        Ok(())
    }

    /// Weight of a revealed element.
    pub fn weight(&self, e: usize) -> f64 {
        if !self.revealed.borrow().contains(e) {
            self.flag(format!("weight of unrevealed element {e} requested"));
            return 0.0;
        }
        self.weights[e]
    }

    /// Irrevocably selects the current arrival.
    pub fn select(&self, e: usize) -> Result<()> {
        let err = |msg: String| {
            self.flag(msg.clone());
            Err(Error::ProtocolViolation(msg))
        };
        if self.current.get() != Some(e) {
            return err(format!("element {e} selected outside its arrival"));
        }
        if self.sampled.borrow().contains(e) {
            return err(format!("sampled element {e} selected"));
        }
        let mut selected = self.selected.borrow_mut();
        if selected.contains(e) {
            return err(format!("element {e} selected twice"));
        }
        let with = selected.with(e);
        if self.matroid.rank(&with) != with.len() {
            return err(format!("selecting {e} breaks independence"));
        }
        *selected = with;
        Ok(())
    }

    pub fn selected(&self) -> ElementSet {
        self.selected.borrow().clone()
    }

    pub fn revealed(&self) -> ElementSet {
        self.revealed.borrow().clone()
    }

    pub fn sampled(&self) -> ElementSet {
        self.sampled.borrow().clone()
    }

    pub fn violation(&self) -> Option<String> {
        self.violation.borrow().clone()
    }

    pub fn rank_queries(&self) -> u64 {
        self.queries.get()
    }

    /// Total weight of the selected elements.
    pub fn selected_weight(&self) -> f64 {
        self.selected.borrow().iter().map(|e| self.weights[e]).fold(0.0, |a, w| a + w)
    }

    /// The hidden weight vector, for offline evaluation after the trial.
    pub fn weights_offline(&self) -> &[f64] {
        &self.weights
    }
}

impl RankOracle for ArrivalStream<'_> {
    fn ground_size(&self) -> usize {
        self.order.len()
    }

    fn rank(&self, set: &ElementSet) -> usize {
        self.queries.set(self.queries.get() + 1);
        let revealed = self.revealed.borrow();
        if set.is_subset(&revealed) {
            return self.matroid.rank(set);
        }
        let hidden = set.difference(&revealed);
        drop(revealed);
        self.flag(format!("rank query touches unrevealed elements {hidden:?}"));
        self.matroid.rank(&set.intersection(&self.revealed.borrow()))
    }

    fn label(&self) -> String {
        format!("stream over {}", self.matroid.label())
    }

    // Both hooks read ranks of subsets of their arguments only. Sets that
    // reach past the revealed elements fall back to `rank`, which flags them.
    fn minor_kind(&self, contract: &ElementSet, restrict: &ElementSet) -> Option<MatroidKind> {
        let revealed = self.revealed.borrow();
        if !contract.is_subset(&revealed) || !restrict.is_subset(&revealed) {
            return None;
        }
        self.queries.set(self.queries.get() + 1);
        self.matroid.minor_kind(contract, restrict)
    }

    fn densest_direct(&self, subset: &ElementSet, p: usize, q: usize) -> Option<ElementSet> {
        if !subset.is_subset(&self.revealed.borrow()) {
            return None;
        }
        self.queries.set(self.queries.get() + 1);
        self.matroid.densest_direct(subset, p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Uniform;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hooks_only_see_revealed_elements() {
        let u = Uniform::new(4, 1).unwrap();
        let s = ArrivalStream::new(&u, vec![1.0; 4], vec![0, 1, 2, 3]).unwrap();
        s.next_arrival();
        s.next_arrival();
        let seen = ElementSet::from_ids(4, [0, 1]).unwrap();
        assert_eq!(s.densest_direct(&seen, 2, 1), Some(seen.clone()));
        assert!(s.minor_kind(&ElementSet::singleton(4, 0), &ElementSet::singleton(4, 1)).is_none());
        assert!(s.densest_direct(&ElementSet::full(4), 2, 1).is_none());
        assert!(s.minor_kind(&ElementSet::new(4), &ElementSet::full(4)).is_none());
        assert!(s.violation().is_none());
        let d = crate::principal::densest_set(&s, &ElementSet::full(4), crate::curve::int(2)).unwrap();
        assert_eq!(d, ElementSet::full(4));
        assert!(s.violation().is_some());
    }

    #[test]
    fn guard_flags_unrevealed_queries() {
        let u = Uniform::new(3, 2).unwrap();
        let s = ArrivalStream::new(&u, vec![1.0, 2.0, 3.0], vec![2, 0, 1]).unwrap();
        assert_eq!(s.next_arrival(), Some((2, 3.0)));
        assert_eq!(s.rank(&ElementSet::singleton(3, 2)), 1);
        assert!(s.violation().is_none());
        s.rank(&ElementSet::singleton(3, 1));
        assert!(s.violation().is_some());
    }

    #[test]
    fn selection_rules() {
        let u = Uniform::new(3, 1).unwrap();
        let s = ArrivalStream::new(&u, vec![1.0, 2.0, 3.0], vec![0, 1, 2]).unwrap();
        s.next_arrival();
        assert!(s.select(1).is_err());
        let s = ArrivalStream::new(&u, vec![1.0, 2.0, 3.0], vec![0, 1, 2]).unwrap();
        s.next_arrival();
        s.select(0).unwrap();
        s.next_arrival();
        assert!(matches!(s.select(1), Err(Error::ProtocolViolation(_))));
        assert_eq!(s.selected().to_vec(), vec![0]);
    }

    #[test]
    fn sampled_elements_are_skipped() {
        let u = Uniform::new(6, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = ArrivalStream::new(&u, vec![1.0; 6], vec![0, 1, 2, 3, 4, 5]).unwrap();
        let sample = s.sample(0.5, &mut rng).unwrap();
        let mut arrivals = Vec::new();
        while let Some((e, _)) = s.next_arrival() {
            assert!(!sample.contains(e));
            arrivals.push(e);
        }
        assert_eq!(arrivals.len() + sample.len(), 6);
        assert!(arrivals.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn weight_assignment_uses_profile_subset() {
        let p = WeightProfile::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut w = assign_weights(&p, 3, &mut rng).unwrap();
        w.sort_by(f64::total_cmp);
        w.dedup();
        assert_eq!(w.len(), 3);
        assert!(assign_weights(&p, 6, &mut rng).is_err());
    }
}
