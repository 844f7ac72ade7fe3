//! Conditioning an approximate rank-density curve into curves whose
//! densities are powers of `β` with geometrically growing ranks.
//!
//! [`find_good_curves`] only reads the input curve, so it can run inside an
//! online algorithm without any rank queries. [`check_good_curves`] verifies
//! the guarantees against a matroid.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::curve::{is_approximation, RankDensityCurve, Rational};
use crate::error::{invalid, Result};
use crate::matroid::RankOracle;
use crate::principal::densest_set;
use crate::set::ElementSet;
use crate::weights::WeightProfile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodCurveBundle {
    /// `ρ̄`.
    pub conditioned: RankDensityCurve,
    /// `ρ̄₁ … ρ̄₄`.
    pub splits: [RankDensityCurve; 4],
    /// Selected densities `λ̄₁ > … > λ̄_m`.
    pub grid: Vec<Rational>,
}

impl GoodCurveBundle {
    /// Densities of split curve `i` (0-based), i.e. the `μ_j`.
    pub fn split_densities(&self, i: usize) -> Vec<Rational> {
        self.splits[i].densities().collect()
    }
}

/// Largest `β^j ≤ x` for `x ≥ 1`.
pub fn floor_power(x: Rational, beta: u64) -> Rational {
    let b = Rational::from_integer(beta as i128);
    let mut p = Rational::one();
    while p * b <= x {
        p *= b;
    }
    p
}

pub fn is_power_of(x: Rational, beta: u64) -> bool {
    x >= Rational::one() && floor_power(x, beta) == x
}

fn check_params(alpha: Rational, beta: u64) -> Result<()> {
    if alpha < Rational::from_integer(24) {
        return Err(invalid(alloc::format!("alpha must be at least 24, got {alpha}")));
    }
    if beta < 3 {
        return Err(invalid(alloc::format!("beta must be an integer >= 3, got {beta}")));
    }
    Ok(())
}

/// `ρ` rounded down onto `grid` (descending) for `t ≤ r_max(min grid)`.
fn round_onto(rho: &RankDensityCurve, grid: &[Rational]) -> Result<RankDensityCurve> {
    let Some(&lowest) = grid.last() else {
        return Ok(RankDensityCurve::zero());
    };
    let end = rho.r_max(lowest);
    rho.truncate(end)
        .map_densities(|d| grid.iter().copied().find(|g| *g <= d).unwrap_or(Rational::zero()))
}

/// The construction behind the conditioned curve `ρ̄` and its four splits.
pub fn find_good_curves(approx: &RankDensityCurve, alpha: Rational, beta: u64) -> Result<GoodCurveBundle> {
    check_params(alpha, beta)?;
    let rounded = approx.map_densities(|d| floor_power(d, beta))?;
    let mut grid = Vec::new();
    if let Some(first) = rounded.densities().next() {
        grid.push(first);
        loop {
            let last = *grid.last().unwrap_or(&first);
            let next = rounded.eval(alpha * rounded.r_max(last));
            if next < Rational::one() {
                break;
            }
            grid.push(next);
        }
    }
    let conditioned = round_onto(&rounded, &grid)?;
    let tau = conditioned.support_end();
    let splits = core::array::from_fn(|i| {
        let class: Vec<Rational> = grid.iter().copied().skip(i).step_by(4).collect();
        if class.is_empty() {
            RankDensityCurve::constant(tau, Rational::one())
        } else {
            round_onto(&conditioned, &class)
        }
    });
    let [a, b, c, d] = splits;
    Ok(GoodCurveBundle {
        conditioned,
        splits: [a?, b?, c?, d?],
        grid,
    })
}

/// Outcome of checking the three guarantees of a bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleCheck {
    /// `ρ̄` is an `(α², β²)`-approximation of the reference.
    pub approximation: bool,
    /// `Σ F(ρ̄_i) ≥ F(ρ̄)` (up to float rounding).
    pub f_sum: bool,
    /// Powers of `β`, `ρ̄_i ≤ ρ_M`, and the rank-gap condition.
    pub structure: bool,
}

impl BundleCheck {
    pub fn all(&self) -> bool {
        self.approximation && self.f_sum && self.structure
    }
}

/// Rank of `D(N, λ)` for the gap condition.
pub trait DenseRank {
    fn dense_rank(&self, lambda: Rational) -> Result<Rational>;
}

/// Reads `r(D(N, λ))` off a reference curve: `r_max(λ)`.
#[derive(Debug)]
pub struct CurveRanks<'a>(pub &'a RankDensityCurve);

impl DenseRank for CurveRanks<'_> {
    fn dense_rank(&self, lambda: Rational) -> Result<Rational> {
        // D(N, λ) for λ ≤ 1 is N itself
        if lambda <= Rational::one() {
            return Ok(self.0.support_end());
        }
        Ok(self.0.r_max(lambda))
    }
}

/// Computes `r(D(N, λ))` with rank queries.
#[derive(Debug)]
pub struct OracleRanks<'a, O: ?Sized>(pub &'a O);

impl<O: RankOracle + ?Sized> DenseRank for OracleRanks<'_, O> {
    fn dense_rank(&self, lambda: Rational) -> Result<Rational> {
        let ground = ElementSet::full(self.0.ground_size());
        let d = densest_set(self.0, &ground, lambda)?;
        Ok(Rational::from_integer(self.0.rank(&d) as i128))
    }
}

/// Checks the bundle against the reference curve `ρ_M` (the curve the
/// input was an `(α, β)`-approximation of).
pub fn check_good_curves(
    bundle: &GoodCurveBundle,
    reference: &RankDensityCurve,
    ranks: &dyn DenseRank,
    profile: &WeightProfile,
    alpha: Rational,
    beta: u64,
) -> Result<BundleCheck> {
    let b = Rational::from_integer(beta as i128);
    let approximation = is_approximation(&bundle.conditioned, reference, alpha * alpha, b * b)?;
    let f_bar = profile.curve_value(&bundle.conditioned)?;
    let mut f_sum_total = 0.0;
    for s in &bundle.splits {
        f_sum_total += profile.curve_value(s)?;
    }
    let f_sum = f_sum_total >= f_bar - 1e-9 * f_bar.abs().max(1.0);
    let mut structure = true;
    for s in &bundle.splits {
        structure &= s.le(reference) && s.le(&bundle.conditioned);
        let mu: Vec<Rational> = s.densities().collect();
        structure &= mu.iter().all(|m| is_power_of(*m, beta));
        for pair in mu.windows(2) {
            let lhs = ranks.dense_rank(pair[1])?;
            let rhs = ranks.dense_rank(pair[0] / b)?;
            structure &= lhs >= alpha * rhs;
        }
    }
    Ok(BundleCheck {
        approximation,
        f_sum,
        structure,
    })
}
