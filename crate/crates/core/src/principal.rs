//! Densest sets `D(S, λ)`, principal sequences and rank-density curves.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::curve::{RankDensityCurve, Rational, Step};
use crate::error::{invalid, Error, Result};
use crate::matroid::{MatroidPartition, MinorView, RankOracle};
use crate::set::ElementSet;

/// Cap on `q·|S|` for `λ = p/q` with `q > 1`.
pub const MAX_COPIES: usize = 1 << 16;

/// Largest `|S|` accepted by [`brute_force_densest`].
pub const MAX_BRUTE_FORCE: usize = 22;

fn check_subset<O: RankOracle + ?Sized>(oracle: &O, subset: &ElementSet) -> Result<()> {
    if subset.universe() != oracle.ground_size() {
        return Err(invalid("subset does not match the oracle's ground set"));
    }
    Ok(())
}

fn split(lambda: Rational) -> Result<(usize, usize)> {
    if lambda < Rational::zero() {
        return Err(invalid(alloc::format!("lambda must be non-negative, got {lambda}")));
    }
    let p = usize::try_from(*lambda.numer()).map_err(|_| invalid("lambda numerator too large"))?;
    let q = usize::try_from(*lambda.denom()).map_err(|_| invalid("lambda denominator too large"))?;
    Ok((p, q))
}

/// `D(S, λ)`: the unique maximal maximizer of `|U| − λ·r(U)` over `U ⊆ S`.
pub fn densest_set<O: RankOracle + ?Sized>(
    oracle: &O,
    subset: &ElementSet,
    lambda: Rational,
) -> Result<ElementSet> {
    check_subset(oracle, subset)?;
    let (p, q) = split(lambda)?;
    // Every element then changes the objective by 1 − λ·Δr ≥ 0.
    if lambda <= Rational::one() {
        return Ok(subset.clone());
    }
    if let Some(d) = oracle.densest_direct(subset, p, q) {
        return Ok(d);
    }
    densest_by_partition(oracle, subset, p, q)
}

/// [`densest_set`] without the `λ ≤ 1` shortcut.
pub fn densest_by_partition<O: RankOracle + ?Sized>(
    oracle: &O,
    subset: &ElementSet,
    p: usize,
    q: usize,
) -> Result<ElementSet> {
    if p == 0 {
        return Ok(subset.clone());
    }
    if q > 1 && q.saturating_mul(subset.len()) > MAX_COPIES {
        return Err(Error::Unsupported(alloc::format!(
            "density {p}/{q} on {} elements needs more than {MAX_COPIES} copies",
            subset.len()
        )));
    }
    Ok(MatroidPartition::compute(oracle, subset, p, q)?.stuck())
}

/// Exhaustive `D(S, λ)`: the union of all maximizers.
pub fn brute_force_densest<O: RankOracle + ?Sized>(
    oracle: &O,
    subset: &ElementSet,
    lambda: Rational,
) -> Result<ElementSet> {
    check_subset(oracle, subset)?;
    let (p, q) = split(lambda)?;
    let elems = subset.to_vec();
    if elems.len() > MAX_BRUTE_FORCE {
        return Err(Error::Unsupported(alloc::format!(
            "brute force limited to {MAX_BRUTE_FORCE} elements, got {}",
            elems.len()
        )));
    }
    let (p, q) = (p as i128, q as i128);
    let mut best = i128::MIN;
    let mut union = ElementSet::new(subset.universe());
    for mask in 0u32..(1u32 << elems.len()) {
        let mut u = ElementSet::new(subset.universe());
        for (i, &e) in elems.iter().enumerate() {
            if mask >> i & 1 == 1 {
                u.insert(e);
            }
        }
        let value = q * u.len() as i128 - p * oracle.rank(&u) as i128;
        if value > best {
            best = value;
            union = u;
        } else if value == best {
            union.union_with(&u);
        }
    }
    Ok(union)
}

/// The chain `∅ ⊊ S₁ ⊊ … ⊊ S_k = S` of the principal partition of `M|S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalSequence {
    /// Cumulative sets `S_i`.
    pub sets: Vec<ElementSet>,
    /// Density of the minor `M/S_{i-1} | (S_i ∖ S_{i-1})`.
    pub densities: Vec<Rational>,
    /// `r(S_i)`.
    pub ranks: Vec<usize>,
}

impl PrincipalSequence {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn curve(&self) -> RankDensityCurve {
        let steps = self
            .ranks
            .iter()
            .zip(&self.densities)
            .map(|(&r, &d)| Step::new(Rational::from_integer(r as i128), d))
            .collect();
        RankDensityCurve::new(steps).expect("principal sequences have decreasing densities")
    }
}

fn density(size: usize, rank: usize) -> Rational {
    Rational::new(size as i128, rank as i128)
}

/// Maximum density and the maximal densest set of a loopless oracle,
/// by Dinkelbach iteration on `λ ↦ max |U| − λ r(U)`.
fn maximal_densest<O: RankOracle + ?Sized>(oracle: &O, ground: &ElementSet) -> Result<(Rational, ElementSet)> {
    let mut lambda = density(ground.len(), oracle.rank(ground));
    loop {
        let d = densest_set(oracle, ground, lambda)?;
        let r = oracle.rank(&d);
        let value = Rational::from_integer(d.len() as i128) - lambda * Rational::from_integer(r as i128);
        if value > Rational::zero() {
            lambda = density(d.len(), r);
        } else {
            return Ok((lambda, d));
        }
    }
}

/// Principal sequence of `M|S`, by repeatedly extracting the maximal
/// densest set of the contracted remainder.
pub fn principal_sequence<O: RankOracle>(oracle: &O, subset: &ElementSet) -> Result<PrincipalSequence> {
    check_subset(oracle, subset)?;
    let base: &dyn RankOracle = oracle;
    let mut seq = PrincipalSequence {
        sets: Vec::new(),
        densities: Vec::new(),
        ranks: Vec::new(),
    };
    let mut done = ElementSet::new(subset.universe());
    let mut rest = subset.clone();
    let mut done_rank = 0;
    while !rest.is_empty() {
        let ids = rest.to_vec();
        let kind;
        let view;
        let minor: &dyn RankOracle = match oracle.minor_kind(&done, &rest) {
            Some(k) => {
                kind = k;
                &kind
            }
            None => {
                view = MinorView::new(base, &done, &rest)?;
                &view
            }
        };
        let all = ElementSet::full(minor.ground_size());
        if minor.rank(&all) == 0 {
            return Err(invalid("subset contains loops"));
        }
        let (lambda, d) = maximal_densest(minor, &all)?;
        let d_base = d.map_into(subset.universe(), &ids);
        done.union_with(&d_base);
        rest.difference_with(&d_base);
        done_rank += minor.rank(&d);
        seq.sets.push(done.clone());
        seq.densities.push(lambda);
        seq.ranks.push(done_rank);
    }
    Ok(seq)
}

/// `ρ_{M|S}` as an exact step function.
pub fn rank_density_curve<O: RankOracle>(oracle: &O, subset: &ElementSet) -> Result<RankDensityCurve> {
    Ok(principal_sequence(oracle, subset)?.curve())
}
