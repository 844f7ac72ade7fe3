//! Rank-density curves: non-increasing, left-continuous step functions on
//! `(0, ∞)` with exact rational breakpoints and values.

use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

pub type Rational = Ratio<i128>;

pub fn rat(p: i128, q: i128) -> Rational {
    Ratio::new(p, q)
}

pub fn int(n: i128) -> Rational {
    Ratio::from_integer(n)
}

/// The curve takes value `density` on `(previous rank_end, rank_end]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub rank_end: Rational,
    pub density: Rational,
}

impl Step {
    pub fn new(rank_end: Rational, density: Rational) -> Self {
        Step { rank_end, density }
    }
}

/// Invariants: rank ends strictly increasing and positive, densities
/// strictly decreasing and at least one. The value past the last step is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RankDensityCurve {
    steps: Vec<Step>,
}

impl RankDensityCurve {
    pub fn zero() -> Self {
        RankDensityCurve { steps: Vec::new() }
    }

    /// Validates the steps; adjacent steps with equal density are merged.
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut out: Vec<Step> = Vec::with_capacity(steps.len());
        for s in steps {
            if s.density < Rational::one() {
                return Err(invalid(alloc::format!("density {} below 1", s.density)));
            }
            let prev_end = out.last().map_or(Rational::zero(), |p| p.rank_end);
            if s.rank_end <= prev_end {
                return Err(invalid(alloc::format!(
                    "rank ends must be positive and strictly increasing, got {} after {}",
                    s.rank_end,
                    prev_end
                )));
            }
            match out.last_mut() {
                Some(p) if p.density == s.density => p.rank_end = s.rank_end,
                Some(p) if p.density < s.density => {
                    return Err(invalid(alloc::format!(
                        "curve is not non-increasing: density {} after {}",
                        s.density,
                        p.density
                    )))
                }
                _ => out.push(s),
            }
        }
        Ok(RankDensityCurve { steps: out })
    }

    pub fn from_pairs(pairs: &[(Rational, Rational)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(e, d)| Step::new(e, d)).collect())
    }

    /// Value `density` on `(0, width]`.
    pub fn constant(width: Rational, density: Rational) -> Result<Self> {
        if width.is_zero() {
            return Ok(Self::zero());
        }
        Self::new(alloc::vec![Step::new(width, density)])
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_zero(&self) -> bool {
        self.steps.is_empty()
    }

    /// Right end of the support (0 for the zero curve).
    pub fn support_end(&self) -> Rational {
        self.steps.last().map_or(Rational::zero(), |s| s.rank_end)
    }

    pub fn densities(&self) -> impl Iterator<Item = Rational> + '_ {
        self.steps.iter().map(|s| s.density)
    }

    /// `ρ(t)`; points `t ≤ 0` read the first step.
    pub fn eval(&self, t: Rational) -> Rational {
        self.steps
            .iter()
            .find(|s| s.rank_end >= t)
            .map_or(Rational::zero(), |s| s.density)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.steps
            .iter()
            .find(|s| to_f64(s.rank_end) >= t)
            .map_or(0.0, |s| to_f64(s.density))
    }

    /// `max { t : ρ(t) ≥ λ }`, or 0 when no point reaches `λ`.
    pub fn r_max(&self, lambda: Rational) -> Rational {
        self.steps
            .iter()
            .rev()
            .find(|s| s.density >= lambda)
            .map_or(Rational::zero(), |s| s.rank_end)
    }

    /// Pointwise `self ≤ other`. Both are constant between merged
    /// breakpoints, so the breakpoints themselves are enough.
    pub fn le(&self, other: &RankDensityCurve) -> bool {
        self.steps
            .iter()
            .chain(&other.steps)
            .all(|s| self.eval(s.rank_end) <= other.eval(s.rank_end))
    }

    /// Rebuilds the curve with every density passed through `f`, dropping
    /// everything from the first step mapped below 1.
    pub fn map_densities(&self, mut f: impl FnMut(Rational) -> Rational) -> Result<Self> {
        let mut steps = Vec::new();
        for s in &self.steps {
            let d = f(s.density);
            if d < Rational::one() {
                break;
            }
            steps.push(Step::new(s.rank_end, d));
        }
        Self::new(steps)
    }

    /// Cuts the support at `t`.
    pub fn truncate(&self, t: Rational) -> Self {
        let mut steps = Vec::new();
        for s in &self.steps {
            if s.rank_end >= t {
                if t > Rational::zero() {
                    steps.push(Step::new(t, s.density));
                }
                break;
            }
            steps.push(s.clone());
        }
        RankDensityCurve { steps }
    }

    /// The `(α, β)`-downshift: `ρ(α)/β` on `(0, 1]`, `ρ(αt)/β` after,
    /// with values in `(0, 1)` raised to 1.
    pub fn downshift(&self, alpha: Rational, beta: Rational) -> Result<Self> {
        if alpha < Rational::one() || beta < Rational::one() {
            return Err(invalid("downshift needs alpha, beta >= 1"));
        }
        let mut steps = Vec::new();
        for s in &self.steps {
            if s.rank_end < alpha {
                continue;
            }
            let d = s.density / beta;
            steps.push(Step::new(s.rank_end / alpha, d.max(Rational::one())));
        }
        Self::new(steps)
    }

    /// Integral of `g(ρ(t))` over the support.
    pub fn integrate<E>(&self, mut g: impl FnMut(Rational) -> Result<f64, E>) -> Result<f64, E> {
        let mut prev = Rational::zero();
        let mut total = 0.0;
        for s in &self.steps {
            total += to_f64(s.rank_end - prev) * g(s.density)?;
            prev = s.rank_end;
        }
        Ok(total)
    }

    /// `(t, ρ(t))` at every breakpoint, for plotting.
    pub fn sample_points(&self) -> Vec<(Rational, Rational)> {
        self.steps.iter().map(|s| (s.rank_end, s.density)).collect()
    }
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Whether `candidate` is an `(α, β)`-approximation of `reference`:
/// `downshift(reference) ≤ candidate ≤ reference`.
pub fn is_approximation(
    candidate: &RankDensityCurve,
    reference: &RankDensityCurve,
    alpha: Rational,
    beta: Rational,
) -> Result<bool> {
    let lower = reference.downshift(alpha, beta)?;
    Ok(lower.le(candidate) && candidate.le(reference))
}
