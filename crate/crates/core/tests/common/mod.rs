//! Random instances and brute-force reference oracles shared by the
//! integration tests. Reference ranks are computed from each class's
//! definition, not through the library's oracles.
#![allow(dead_code)]

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ramsp_core::matroid::{DirectSum, Explicit, Graphic, MatroidKind, Partition, Uniform};
use ramsp_core::{ElementSet, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub enum Spec {
    Uniform { n: usize, k: usize },
    Partition { sizes: Vec<usize>, caps: Vec<usize> },
    Graphic { v: usize, edges: Vec<(usize, usize)> },
    Explicit { n: usize, bases: Vec<Vec<usize>> },
    Sum(Vec<Spec>),
}

impl Spec {
    pub fn n(&self) -> usize {
        match self {
            Spec::Uniform { n, .. } | Spec::Explicit { n, .. } => *n,
            Spec::Partition { sizes, .. } => sizes.iter().sum(),
            Spec::Graphic { edges, .. } => edges.len(),
            Spec::Sum(parts) => parts.iter().map(Spec::n).sum(),
        }
    }

    pub fn build(&self) -> MatroidKind {
        match self {
            Spec::Uniform { n, k } => Uniform::new(*n, *k).unwrap().into(),
            Spec::Partition { sizes, caps } => Partition::new(sizes, caps).unwrap().into(),
            Spec::Graphic { v, edges } => Graphic::new(*v, edges.clone()).unwrap().into(),
            Spec::Explicit { n, bases } => Explicit::new(*n, bases).unwrap().into(),
            Spec::Sum(parts) => DirectSum::new(parts.iter().map(Spec::build).collect()).into(),
        }
    }

    /// Rank of the members of `u` (indexed by element).
    pub fn rank(&self, u: &[bool]) -> usize {
        match self {
            Spec::Uniform { k, .. } => u.iter().filter(|b| **b).count().min(*k),
            Spec::Partition { sizes, caps } => {
                let mut start = 0;
                let mut r = 0;
                for (s, c) in sizes.iter().zip(caps) {
                    r += u[start..start + s].iter().filter(|b| **b).count().min(*c);
                    start += s;
                }
                r
            }
            Spec::Graphic { v, edges } => {
                let mut adj = vec![Vec::new(); *v];
                for (i, &(a, b)) in edges.iter().enumerate() {
                    if u[i] {
                        adj[a].push(b);
                        adj[b].push(a);
                    }
                }
                let mut seen = vec![false; *v];
                let mut components = 0;
                for s in 0..*v {
                    if seen[s] {
                        continue;
                    }
                    components += 1;
                    let mut stack = vec![s];
                    seen[s] = true;
                    while let Some(x) = stack.pop() {
                        for &y in &adj[x] {
                            if !seen[y] {
                                seen[y] = true;
                                stack.push(y);
                            }
                        }
                    }
                }
                v - components
            }
            Spec::Explicit { bases, .. } => bases
                .iter()
                .map(|b| b.iter().filter(|&&e| u[e]).count())
                .max()
                .unwrap_or(0),
            Spec::Sum(parts) => {
                let mut start = 0;
                let mut r = 0;
                for p in parts {
                    let m = p.n();
                    r += p.rank(&u[start..start + m]);
                    start += m;
                }
                r
            }
        }
    }

    pub fn rank_set(&self, s: &ElementSet) -> usize {
        self.rank(&to_bools(s))
    }

    pub fn rank_mask(&self, mask: u64) -> usize {
        self.rank(&mask_bools(self.n(), mask))
    }
}

pub fn to_bools(s: &ElementSet) -> Vec<bool> {
    (0..s.universe()).map(|e| s.contains(e)).collect()
}

pub fn mask_bools(n: usize, mask: u64) -> Vec<bool> {
    (0..n).map(|e| mask >> e & 1 == 1).collect()
}

pub fn mask_set(n: usize, mask: u64) -> ElementSet {
    ElementSet::from_ids(n, (0..n).filter(|e| mask >> e & 1 == 1)).unwrap()
}

pub fn set_mask(s: &ElementSet) -> u64 {
    s.iter().fold(0, |m, e| m | 1 << e)
}

pub fn random_graph<R: Rng>(rng: &mut R, v: usize, e: usize) -> Vec<(usize, usize)> {
    (0..e)
        .map(|_| {
            let a = rng.random_range(0..v);
            let mut b = rng.random_range(0..v - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect()
}

/// Bases of a small matroid by enumeration of its reference rank.
pub fn enumerate_bases(spec: &Spec) -> Vec<Vec<usize>> {
    let n = spec.n();
    let full = spec.rank_mask((1u64 << n) - 1);
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == full && spec.rank_mask(*m) == full)
        .map(|m| (0..n).filter(|e| m >> e & 1 == 1).collect())
        .collect()
}

/// A random loopless matroid on at most `max_n` (≥ 2) elements.
pub fn random_spec<R: Rng>(rng: &mut R, max_n: usize) -> Spec {
    let kind = rng.random_range(0..5);
    random_kind(rng, max_n, kind)
}

fn random_kind<R: Rng>(rng: &mut R, max_n: usize, kind: u32) -> Spec {
    match kind {
        0 => {
            let n = rng.random_range(1..=max_n);
            Spec::Uniform { n, k: rng.random_range(1..=n) }
        }
        1 => {
            let mut sizes = Vec::new();
            let mut total = 0;
            let target = rng.random_range(1..=max_n);
            while total < target {
                let s = rng.random_range(1..=(target - total).min(4));
                sizes.push(s);
                total += s;
            }
            let caps = sizes.iter().map(|&s| rng.random_range(1..=s)).collect();
            Spec::Partition { sizes, caps }
        }
        2 => {
            let v = rng.random_range(2..=6);
            let e = rng.random_range(1..=max_n);
            Spec::Graphic { v, edges: random_graph(rng, v, e) }
        }
        3 => {
            let g = random_kind(rng, max_n.min(9), 2);
            Spec::Explicit { n: g.n(), bases: enumerate_bases(&g) }
        }
        _ => {
            if max_n < 2 {
                return random_kind(rng, max_n, 0);
            }
            let a = rng.random_range(1..max_n);
            let (ka, kb) = (rng.random_range(0..3), rng.random_range(0..3));
            let left = random_kind(rng, a, ka);
            let right = random_kind(rng, max_n - left.n().min(max_n - 1), kb);
            Spec::Sum(vec![left, right])
        }
    }
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> ElementSet {
    ElementSet::from_ids(n, (0..n).filter(|_| rng.random_bool(p))).unwrap()
}

/// Random step curve with densities in `[1, max_density]` and rank ends
/// up to 2000, both with small denominators.
pub fn random_curve<R: Rng>(rng: &mut R, max_steps: usize, max_density: i128) -> ramsp_core::RankDensityCurve {
    let steps = rng.random_range(1..=max_steps);
    let mut dens: Vec<Rational> = (0..steps)
        .map(|_| {
            let q = rng.random_range(1..=4);
            Ratio::new(rng.random_range(q..=max_density * q), q)
        })
        .collect();
    dens.sort_unstable_by(|a, b| b.cmp(a));
    dens.dedup();
    let last = dens.len() - 1;
    if rng.random_bool(0.5) {
        dens[last] = Ratio::from_integer(1);
        dens.dedup();
    }
    let mut ends: Vec<i128> = (0..dens.len()).map(|_| rng.random_range(1..=2000)).collect();
    ends.sort_unstable();
    for i in 1..ends.len() {
        if ends[i] <= ends[i - 1] {
            ends[i] = ends[i - 1] + 1;
        }
    }
    let pairs: Vec<(Rational, Rational)> = ends
        .iter()
        .zip(&dens)
        .map(|(e, d)| (Ratio::new(*e, rng.random_range(1..=2)), *d))
        .collect();
    let mut fixed: Vec<(Rational, Rational)> = Vec::new();
    for (e, d) in pairs {
        match fixed.last() {
            Some((pe, _)) if *pe >= e => fixed.push((*pe + 1, d)),
            _ => fixed.push((e, d)),
        }
    }
    ramsp_core::RankDensityCurve::from_pairs(&fixed).unwrap()
}

pub fn shuffle<R: Rng, T>(rng: &mut R, v: &mut [T]) {
    v.shuffle(rng);
}

/// Pointwise combination of two step curves; the result is rebuilt from
/// the union of breakpoints, dropping everything from the first zero.
pub fn combine(
    a: &ramsp_core::RankDensityCurve,
    b: &ramsp_core::RankDensityCurve,
    f: impl Fn(Rational, Rational) -> Rational,
) -> ramsp_core::RankDensityCurve {
    let mut ends: Vec<Rational> = a.steps().iter().chain(b.steps()).map(|s| s.rank_end).collect();
    ends.sort();
    ends.dedup();
    let mut pairs = Vec::new();
    for t in ends {
        let v = f(a.eval(t), b.eval(t));
        if v == Ratio::from_integer(0) {
            break;
        }
        pairs.push((t, v));
    }
    ramsp_core::RankDensityCurve::from_pairs(&pairs).unwrap()
}

/// A random `(α, β)`-approximation of `rho`: a random curve clamped
/// between the downshift and `rho`.
pub fn random_approximation<R: Rng>(
    rng: &mut R,
    rho: &ramsp_core::RankDensityCurve,
    alpha: Rational,
    beta: Rational,
) -> ramsp_core::RankDensityCurve {
    let lower = rho.downshift(alpha, beta).unwrap();
    let top = rho.steps().first().map_or(1, |s| s.density.ceil().to_integer()).max(1);
    let g = random_curve(rng, 5, top);
    let g = combine(&g, &ramsp_core::RankDensityCurve::constant(rho.support_end(), Ratio::from_integer(1)).unwrap(), |x, y| x.max(y));
    let capped = combine(rho, &g, |x, y| x.min(y));
    combine(&lower, &capped, |x, y| x.max(y))
}
