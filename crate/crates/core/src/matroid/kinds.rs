use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::RankOracle;
use crate::error::{invalid, Result};
use crate::set::ElementSet;

/// Largest ground set accepted by [`Explicit`].
pub const MAX_EXPLICIT_GROUND: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Uniform {
    n: usize,
    k: usize,
}

impl Uniform {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(invalid(format!("uniform matroid U({n},{k}) needs k <= n")));
        }
        if n > 0 && k == 0 {
            return Err(invalid("U(n,0) consists of loops"));
        }
        Ok(Uniform { n, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl RankOracle for Uniform {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn rank(&self, set: &ElementSet) -> usize {
        set.len().min(self.k)
    }
    fn label(&self) -> String {
        format!("uniform({},{})", self.n, self.k)
    }
    fn minor_kind(&self, contract: &ElementSet, restrict: &ElementSet) -> Option<MatroidKind> {
        let k = self.k - contract.len().min(self.k);
        Uniform::new(restrict.len(), k.min(restrict.len())).ok().map(Into::into)
    }
    fn densest_direct(&self, subset: &ElementSet, p: usize, q: usize) -> Option<ElementSet> {
        // Below rank k every element costs p - q > 0, above it gains q.
        let s = subset.len();
        Some(if q * s >= p * s.min(self.k) {
            subset.clone()
        } else {
            ElementSet::new(self.n)
        })
    }
}

/// Elements are numbered class by class: class 0 owns ids `0..sizes[0]`, etc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
    capacities: Vec<usize>,
}

impl Partition {
    pub fn new(class_sizes: &[usize], capacities: &[usize]) -> Result<Self> {
        if class_sizes.len() != capacities.len() {
            return Err(invalid("partition matroid needs one capacity per class"));
        }
        let mut class_of = Vec::new();
        for (c, (&size, &cap)) in class_sizes.iter().zip(capacities).enumerate() {
            if size > 0 && cap == 0 {
                return Err(invalid(format!("class {c} has capacity 0 and would be all loops")));
            }
            class_of.extend(core::iter::repeat_n(c, size));
        }
        Ok(Partition {
            class_of,
            capacities: capacities.to_vec(),
        })
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.class_of[e]
    }

    fn class_counts(&self, set: &ElementSet) -> Vec<usize> {
        let mut counts = alloc::vec![0usize; self.capacities.len()];
        for e in set {
            counts[self.class_of[e]] += 1;
        }
        counts
    }
}

impl RankOracle for Partition {
    fn ground_size(&self) -> usize {
        self.class_of.len()
    }
    fn rank(&self, set: &ElementSet) -> usize {
        self.class_counts(set)
            .iter()
            .zip(&self.capacities)
            .map(|(&c, &cap)| c.min(cap))
            .sum()
    }
    fn label(&self) -> String {
        format!("partition({} classes)", self.capacities.len())
    }
    fn minor_kind(&self, contract: &ElementSet, restrict: &ElementSet) -> Option<MatroidKind> {
        let caps: Vec<usize> = self
            .class_counts(contract)
            .iter()
            .zip(&self.capacities)
            .map(|(&c, &cap)| cap - c.min(cap))
            .collect();
        Partition::new(&self.class_counts(restrict), &caps).ok().map(Into::into)
    }
    fn densest_direct(&self, subset: &ElementSet, p: usize, q: usize) -> Option<ElementSet> {
        // The objective splits over classes, each a uniform matroid.
        let keep: Vec<bool> = self
            .class_counts(subset)
            .iter()
            .zip(&self.capacities)
            .map(|(&s, &cap)| q * s >= p * s.min(cap))
            .collect();
        let mut out = subset.clone();
        for e in subset {
            if !keep[self.class_of[e]] {
                out.remove(e);
            }
        }
        Some(out)
    }
}

/// Cycle matroid of a multigraph; element `i` is edge `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graphic {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graphic {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(invalid(format!(
                    "edge {i} = ({u},{v}) references a vertex outside 0..{vertices}"
                )));
            }
            if u == v {
                return Err(invalid(format!("edge {i} is a self-loop at vertex {u}")));
            }
        }
        Ok(Graphic { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl RankOracle for Graphic {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }
    fn rank(&self, set: &ElementSet) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        let mut r = 0;
        for e in set {
            let (u, v) = self.edges[e];
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                r += 1;
            }
        }
        r
    }
    fn label(&self) -> String {
        format!("graphic({}V,{}E)", self.vertices, self.edges.len())
    }
    fn minor_kind(&self, contract: &ElementSet, restrict: &ElementSet) -> Option<MatroidKind> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        for e in contract {
            let (u, v) = self.edges[e];
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
        let mut label = alloc::vec![usize::MAX; self.vertices];
        let mut count = 0;
        let mut edges = Vec::with_capacity(restrict.len());
        for e in restrict {
            let (u, v) = self.edges[e];
            let mut end = |x: usize| {
                let root = find(&mut parent, x);
                if label[root] == usize::MAX {
                    label[root] = count;
                    count += 1;
                }
                label[root]
            };
            edges.push((end(u), end(v)));
        }
        Graphic::new(count, edges).ok().map(Into::into)
    }
    fn densest_direct(&self, subset: &ElementSet, p: usize, q: usize) -> Option<ElementSet> {
        Some(super::flow::graph_densest(self.vertices, &self.edges, subset, p, q))
    }
}

/// Matroid given by its list of bases; validated against the exchange axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explicit {
    n: usize,
    bases: Vec<u32>,
}

impl Explicit {
    pub fn new(n: usize, bases: &[Vec<usize>]) -> Result<Self> {
        if n > MAX_EXPLICIT_GROUND {
            return Err(invalid(format!(
                "explicit matroids are limited to {MAX_EXPLICIT_GROUND} elements, got {n}"
            )));
        }
        if bases.is_empty() {
            return Err(invalid("an explicit matroid needs at least one basis"));
        }
        let mut masks = BTreeSet::new();
        for b in bases {
            let mut m = 0u32;
            for &e in b {
                if e >= n {
                    return Err(invalid(format!("basis element {e} outside 0..{n}")));
                }
                if m >> e & 1 == 1 {
                    return Err(invalid(format!("basis lists element {e} twice")));
                }
                m |= 1 << e;
            }
            masks.insert(m);
        }
        let r = masks.first().map_or(0, |m| m.count_ones());
        if masks.iter().any(|m| m.count_ones() != r) {
            return Err(invalid("bases have different sizes"));
        }
        for &b1 in &masks {
            for &b2 in &masks {
                let mut only1 = b1 & !b2;
                while only1 != 0 {
                    let x = only1.trailing_zeros();
                    only1 &= only1 - 1;
                    let mut only2 = b2 & !b1;
                    let mut ok = false;
                    while only2 != 0 {
                        let y = only2.trailing_zeros();
                        only2 &= only2 - 1;
                        if masks.contains(&((b1 & !(1 << x)) | 1 << y)) {
                            ok = true;
                            break;
                        }
                    }
                    if !ok {
                        return Err(invalid(format!(
                            "basis exchange fails for bases {b1:#b}, {b2:#b} at element {x}"
                        )));
                    }
                }
            }
        }
        let covered = masks.iter().fold(0u32, |acc, m| acc | m);
        let all = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
        if covered != all {
            let e = (all & !covered).trailing_zeros();
            return Err(invalid(format!("element {e} is a loop")));
        }
        Ok(Explicit {
            n,
            bases: masks.into_iter().collect(),
        })
    }

    pub fn bases(&self) -> Vec<Vec<usize>> {
        self.bases
            .iter()
            .map(|&m| (0..self.n).filter(|e| m >> e & 1 == 1).collect())
            .collect()
    }

    /// Builds the explicit form of any small oracle by enumerating subsets.
    pub fn from_oracle<O: RankOracle + ?Sized>(oracle: &O) -> Result<Self> {
        let n = oracle.ground_size();
        if n > MAX_EXPLICIT_GROUND {
            return Err(invalid(format!("ground set of {n} too large to enumerate")));
        }
        let full = oracle.rank(&ElementSet::full(n));
        let mut bases = Vec::new();
        for mask in 0u32..(1u32 << n) {
            if mask.count_ones() as usize != full {
                continue;
            }
            let set = mask_to_set(n, mask);
            if oracle.rank(&set) == full {
                bases.push(set.to_vec());
            }
        }
        Explicit::new(n, &bases)
    }
}

fn mask_to_set(n: usize, mask: u32) -> ElementSet {
    let mut s = ElementSet::new(n);
    for e in 0..n {
        if mask >> e & 1 == 1 {
            s.insert(e);
        }
    }
    s
}

impl RankOracle for Explicit {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn rank(&self, set: &ElementSet) -> usize {
        let mut m = 0u32;
        for e in set {
            m |= 1 << e;
        }
        self.bases
            .iter()
            .map(|b| (b & m).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }
    fn label(&self) -> String {
        format!("explicit({} elements, {} bases)", self.n, self.bases.len())
    }
}

/// Children occupy consecutive id ranges in order.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSum {
    children: Vec<MatroidKind>,
    offsets: Vec<usize>,
}

impl DirectSum {
    pub fn new(children: Vec<MatroidKind>) -> Self {
        let mut offsets = Vec::with_capacity(children.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for c in &children {
            acc += c.ground_size();
            offsets.push(acc);
        }
        DirectSum { children, offsets }
    }

    pub fn children(&self) -> &[MatroidKind] {
        &self.children
    }

    /// First id of child `i`.
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }
}

impl RankOracle for DirectSum {
    fn ground_size(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }
    fn rank(&self, set: &ElementSet) -> usize {
        self.children
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let part = set.extract(self.offsets[i], c.ground_size());
                c.rank(&part)
            })
            .sum()
    }
    fn label(&self) -> String {
        let parts: Vec<String> = self.children.iter().map(|c| c.label()).collect();
        format!("sum[{}]", parts.join(", "))
    }
    fn minor_kind(&self, contract: &ElementSet, restrict: &ElementSet) -> Option<MatroidKind> {
        let mut children = Vec::new();
        for (i, c) in self.children.iter().enumerate() {
            let r = restrict.extract(self.offsets[i], c.ground_size());
            if !r.is_empty() {
                let k = contract.extract(self.offsets[i], c.ground_size());
                children.push(c.minor_kind(&k, &r)?);
            }
        }
        Some(DirectSum::new(children).into())
    }
    fn densest_direct(&self, subset: &ElementSet, p: usize, q: usize) -> Option<ElementSet> {
        // The objective is additive over the summands.
        let mut out = ElementSet::new(self.ground_size());
        for (i, c) in self.children.iter().enumerate() {
            let part = subset.extract(self.offsets[i], c.ground_size());
            let d = match c.densest_direct(&part, p, q) {
                Some(d) => d,
                None => crate::principal::densest_by_partition(c, &part, p, q).ok()?,
            };
            let ids: Vec<usize> = (self.offsets[i]..self.offsets[i + 1]).collect();
            out.union_with(&d.map_into(self.ground_size(), &ids));
        }
        Some(out)
    }
}

/// Closed enumeration of the concrete matroid classes.
#[derive(Debug, Clone, PartialEq)]
pub enum MatroidKind {
    Uniform(Uniform),
    Partition(Partition),
    Graphic(Graphic),
    DirectSum(Box<DirectSum>),
    Explicit(Explicit),
}

impl MatroidKind {
    fn inner(&self) -> &dyn RankOracle {
        match self {
            MatroidKind::Uniform(m) => m,
            MatroidKind::Partition(m) => m,
            MatroidKind::Graphic(m) => m,
            MatroidKind::DirectSum(m) => m.as_ref(),
            MatroidKind::Explicit(m) => m,
        }
    }
}

impl RankOracle for MatroidKind {
    fn ground_size(&self) -> usize {
        self.inner().ground_size()
    }
    fn rank(&self, set: &ElementSet) -> usize {
        self.inner().rank(set)
    }
    fn label(&self) -> String {
        self.inner().label()
    }
    fn minor_kind(&self, contract: &ElementSet, restrict: &ElementSet) -> Option<MatroidKind> {
        self.inner().minor_kind(contract, restrict)
    }
    fn densest_direct(&self, subset: &ElementSet, p: usize, q: usize) -> Option<ElementSet> {
        self.inner().densest_direct(subset, p, q)
    }
}

impl From<Uniform> for MatroidKind {
    fn from(m: Uniform) -> Self {
        MatroidKind::Uniform(m)
    }
}
impl From<Partition> for MatroidKind {
    fn from(m: Partition) -> Self {
        MatroidKind::Partition(m)
    }
}
impl From<Graphic> for MatroidKind {
    fn from(m: Graphic) -> Self {
        MatroidKind::Graphic(m)
    }
}
impl From<DirectSum> for MatroidKind {
    fn from(m: DirectSum) -> Self {
        MatroidKind::DirectSum(Box::new(m))
    }
}
impl From<Explicit> for MatroidKind {
    fn from(m: Explicit) -> Self {
        MatroidKind::Explicit(m)
    }
}
