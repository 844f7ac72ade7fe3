use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::RankOracle;
use crate::error::{invalid, Result};
use crate::set::ElementSet;

const ABSENT: usize = usize::MAX;

/// `base / contracted | restricted_to`, with the restricted elements
/// re-indexed `0..|restricted_to|` in increasing base-id order.
#[derive(Clone)]
pub struct MinorView<'a> {
    base: &'a dyn RankOracle,
    contracted: ElementSet,
    contracted_rank: usize,
    ids: Vec<usize>,
    local: Vec<usize>,
}

impl core::fmt::Debug for MinorView<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MinorView")
            .field("base", &self.base.label())
            .field("contracted", &self.contracted)
            .field("ids", &self.ids)
            .finish()
    }
}

impl<'a> MinorView<'a> {
    pub fn new(base: &'a dyn RankOracle, contract: &ElementSet, restrict_to: &ElementSet) -> Result<Self> {
        let n = base.ground_size();
        if contract.universe() != n || restrict_to.universe() != n {
            return Err(invalid("minor sets must live on the base ground set"));
        }
        if !contract.is_disjoint(restrict_to) {
            return Err(invalid(format!(
                "contracted and restricted sets overlap in {:?}",
                contract.intersection(restrict_to)
            )));
        }
        let ids = restrict_to.to_vec();
        let mut local = alloc::vec![ABSENT; n];
        for (i, &e) in ids.iter().enumerate() {
            local[e] = i;
        }
        Ok(MinorView {
            base,
            contracted_rank: base.rank(contract),
            contracted: contract.clone(),
            ids,
            local,
        })
    }

    /// `base | restrict_to`.
    pub fn restriction(base: &'a dyn RankOracle, restrict_to: &ElementSet) -> Result<Self> {
        Self::new(base, &ElementSet::new(base.ground_size()), restrict_to)
    }

    /// A minor of this minor, expressed directly over the original base.
    /// Both sets use this view's local ids.
    pub fn minor(&self, contract: &ElementSet, restrict_to: &ElementSet) -> Result<MinorView<'a>> {
        if contract.universe() != self.ids.len() || restrict_to.universe() != self.ids.len() {
            return Err(invalid("minor sets must live on the view's ground set"));
        }
        let c = self.contracted.union(&self.to_base(contract));
        MinorView::new(self.base, &c, &self.to_base(restrict_to))
    }

    pub fn base(&self) -> &'a dyn RankOracle {
        self.base
    }

    pub fn contracted(&self) -> &ElementSet {
        &self.contracted
    }

    /// Base ids of the view's elements, indexed by local id.
    pub fn base_ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn base_id(&self, local: usize) -> usize {
        self.ids[local]
    }

    pub fn local_id(&self, base: usize) -> Option<usize> {
        match self.local.get(base) {
            Some(&i) if i != ABSENT => Some(i),
            _ => None,
        }
    }

    pub fn to_base(&self, set: &ElementSet) -> ElementSet {
        set.map_into(self.base.ground_size(), &self.ids)
    }

    /// Local form of a base set; elements outside the view are dropped.
    pub fn from_base(&self, set: &ElementSet) -> ElementSet {
        let mut out = ElementSet::new(self.ids.len());
        for e in set {
            if let Some(i) = self.local_id(e) {
                out.insert(i);
            }
        }
        out
    }
}

impl RankOracle for MinorView<'_> {
    fn ground_size(&self) -> usize {
        self.ids.len()
    }
    fn rank(&self, set: &ElementSet) -> usize {
        let mut u = self.to_base(set);
        u.union_with(&self.contracted);
        self.base.rank(&u) - self.contracted_rank
    }
    fn label(&self) -> String {
        format!(
            "{} / {} | {}",
            self.base.label(),
            self.contracted.len(),
            self.ids.len()
        )
    }
}

/// Every element replaced by `copies` parallel copies; copy `c` of element
/// `e` has id `e * copies + c`.
#[derive(Clone)]
pub struct ParallelExtension<'a> {
    base: &'a dyn RankOracle,
    copies: usize,
}

impl core::fmt::Debug for ParallelExtension<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ParallelExtension")
            .field("base", &self.base.label())
            .field("copies", &self.copies)
            .finish()
    }
}

impl<'a> ParallelExtension<'a> {
    pub fn new(base: &'a dyn RankOracle, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(invalid("parallel extension needs at least one copy"));
        }
        Ok(ParallelExtension { base, copies })
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    /// Originals with at least one copy in `set`.
    pub fn support(&self, set: &ElementSet) -> ElementSet {
        let mut out = ElementSet::new(self.base.ground_size());
        for e in set {
            out.insert(e / self.copies);
        }
        out
    }

    /// All copies of the elements in `set` (a base set).
    pub fn lift(&self, set: &ElementSet) -> ElementSet {
        let mut out = ElementSet::new(self.ground_size());
        for e in set {
            for c in 0..self.copies {
                out.insert(e * self.copies + c);
            }
        }
        out
    }
}

impl RankOracle for ParallelExtension<'_> {
    fn ground_size(&self) -> usize {
        self.base.ground_size() * self.copies
    }
    fn rank(&self, set: &ElementSet) -> usize {
        self.base.rank(&self.support(set))
    }
    fn label(&self) -> String {
        format!("{} x{}", self.base.label(), self.copies)
    }
}
