//! The adversary's weight multiset and the functionals `η` and `F`.

use alloc::vec::Vec;

use num_integer::binomial;
use num_traits::{ToPrimitive, Zero};

use crate::curve::{RankDensityCurve, Rational};
use crate::error::{invalid, Result};

/// Largest `n` for which `η` is evaluated with exact binomial ratios.
pub const EXACT_ETA_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightProfile {
    weights: Vec<f64>,
    sorted: Vec<f64>,
    ln_fact: Vec<f64>,
}

impl WeightProfile {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("a weight profile needs at least one weight"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(invalid(alloc::format!("weights must be finite and non-negative, got {w}")));
        }
        let mut sorted = weights.clone();
        sorted.sort_by(f64::total_cmp);
        let mut ln_fact = Vec::with_capacity(weights.len() + 1);
        ln_fact.push(0.0);
        let mut acc = 0.0;
        for j in 1..=weights.len() {
            acc += libm::log(j as f64);
            ln_fact.push(acc);
        }
        Ok(WeightProfile {
            weights,
            sorted,
            ln_fact,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights in the order given.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sorted_ascending(&self) -> &[f64] {
        &self.sorted
    }

    pub fn w_max(&self) -> f64 {
        *self.sorted.last().unwrap_or(&0.0)
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k > self.len() {
            return Err(invalid(alloc::format!(
                "eta argument {k} exceeds the number of weights {}",
                self.len()
            )));
        }
        Ok(())
    }

    /// `η(a)`: expected maximum of `⌊a⌋` distinct uniformly sampled weights.
    pub fn eta(&self, a: f64) -> Result<f64> {
        if a.is_nan() || a < 0.0 {
            return Err(invalid(alloc::format!("eta argument must be >= 0, got {a}")));
        }
        if a > self.len() as f64 {
            return Err(invalid(alloc::format!(
                "eta argument {a} exceeds the number of weights {}",
                self.len()
            )));
        }
        self.eta_k(libm::floor(a) as usize)
    }

    pub fn eta_of(&self, density: Rational) -> Result<f64> {
        if density < Rational::zero() {
            return Err(invalid("eta argument must be >= 0"));
        }
        self.eta_k(density.to_integer() as usize)
    }

    /// `η(k)` for integer `k`, exact binomial ratios for small profiles.
    pub fn eta_k(&self, k: usize) -> Result<f64> {
        self.check_k(k)?;
        if k == 0 {
            return Ok(0.0);
        }
        if self.len() <= EXACT_ETA_LIMIT {
            let n = self.len() as u128;
            let total = binomial(n, k as u128) as f64;
            let mut acc = 0.0;
            for (i, w) in self.sorted.iter().enumerate().skip(k - 1) {
                acc += binomial(i as u128, k as u128 - 1) as f64 * w;
            }
            Ok(acc / total)
        } else {
            self.eta_log_space(k)
        }
    }

    /// `η(k)` through log-factorials; valid for every `n`.
    pub fn eta_log_space(&self, k: usize) -> Result<f64> {
        self.check_k(k)?;
        if k == 0 {
            return Ok(0.0);
        }
        let n = self.len();
        let lf = &self.ln_fact;
        let ln_total = lf[n] - lf[k] - lf[n - k];
        let mut acc = 0.0;
        for (i, w) in self.sorted.iter().enumerate().skip(k - 1) {
            // C(i, k-1) with i the 0-based index, i.e. C(i'-1, k-1) 1-based
            let ln_c = lf[i] - lf[k - 1] - lf[i + 1 - k];
            acc += libm::exp(ln_c - ln_total) * w;
        }
        Ok(acc)
    }

    /// Exact `η(k)` when every weight is an integer and `n ≤ 64`.
    pub fn eta_exact(&self, k: usize) -> Result<Option<Rational>> {
        self.check_k(k)?;
        if self.len() > EXACT_ETA_LIMIT || self.sorted.iter().any(|w| *w != libm::trunc(*w) || *w > 1e15) {
            return Ok(None);
        }
        if k == 0 {
            return Ok(Some(Rational::zero()));
        }
        let n = self.len() as i128;
        let mut num = 0i128;
        for (i, w) in self.sorted.iter().enumerate().skip(k - 1) {
            num += binomial(i as i128, k as i128 - 1) * (*w as i128);
        }
        Ok(Some(Rational::new(num, binomial(n, k as i128))))
    }

    /// `F(ρ) = ∫ η(ρ(t)) dt`.
    pub fn curve_value(&self, curve: &RankDensityCurve) -> Result<f64> {
        curve.integrate(|d| self.eta_of(d))
    }

    /// Exact `F(ρ)` when [`Self::eta_exact`] applies.
    pub fn curve_value_exact(&self, curve: &RankDensityCurve) -> Result<Option<Rational>> {
        let mut prev = Rational::zero();
        let mut total = Rational::zero();
        for s in curve.steps() {
            let k = s.density.to_integer().to_usize().unwrap_or(usize::MAX);
            match self.eta_exact(k)? {
                Some(e) => total += (s.rank_end - prev) * e,
                None => return Ok(None),
            }
            prev = s.rank_end;
        }
        Ok(Some(total))
    }
}

/// `F(ρ)` as a free function.
pub fn curve_value_f(profile: &WeightProfile, curve: &RankDensityCurve) -> Result<f64> {
    profile.curve_value(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{int, RankDensityCurve};
    use alloc::vec;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn eta_examples() {
        let p = WeightProfile::new(vec![0.0, 1.0]).unwrap();
        assert!(close(p.eta(2.0).unwrap(), 1.0));
        assert!(close(p.eta(1.0).unwrap(), 0.5));
        assert_eq!(p.eta(0.5).unwrap(), 0.0);
        assert!(p.eta(2.5).is_err());
        let q = WeightProfile::new(vec![4.0, 1.0, 2.0]).unwrap();
        assert!(close(q.eta(2.0).unwrap(), 10.0 / 3.0));
        assert_eq!(q.eta_exact(2).unwrap(), Some(Rational::new(10, 3)));
    }

    #[test]
    fn profile_validation() {
        assert!(WeightProfile::new(vec![]).is_err());
        assert!(WeightProfile::new(vec![1.0, -0.5]).is_err());
        assert!(WeightProfile::new(vec![f64::NAN]).is_err());
        let p = WeightProfile::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(p.sorted_ascending(), &[1.0, 2.0, 3.0]);
        assert_eq!(p.w_max(), 3.0);
    }

    #[test]
    fn f_examples() {
        let q = WeightProfile::new(vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(q.curve_value(&RankDensityCurve::zero()).unwrap(), 0.0);
        let c = RankDensityCurve::constant(int(2), int(3)).unwrap();
        assert!(close(q.curve_value(&c).unwrap(), 8.0));
        assert_eq!(q.curve_value_exact(&c).unwrap(), Some(int(8)));
        let too_dense = RankDensityCurve::constant(int(2), int(4)).unwrap();
        assert!(q.curve_value(&too_dense).is_err());
    }

    #[test]
    fn log_space_matches_exact() {
        let w: Vec<f64> = (0..64).map(|i| ((i * 37) % 101) as f64 + 0.25).collect();
        let p = WeightProfile::new(w).unwrap();
        for k in 1..=64 {
            let a = p.eta_k(k).unwrap();
            let b = p.eta_log_space(k).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.abs(), "k={k}: {a} vs {b}");
        }
    }
}
