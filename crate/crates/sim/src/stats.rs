use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BOOTSTRAP_RESAMPLES: usize = 1000;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean, with the sample variance.
pub fn std_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Frequency of `true` and its binomial standard error.
pub fn frequency(hits: &[bool]) -> (f64, f64) {
    let n = hits.len() as f64;
    let p = hits.iter().filter(|h| **h).count() as f64 / n;
    (p, (p * (1.0 - p) / n).sqrt())
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

/// Percentile bootstrap interval at 95% for a statistic of resampled
/// indices.
pub fn bootstrap_ci(n: usize, seed: u64, stat: impl Fn(&[usize]) -> f64) -> (f64, f64) {
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = vec![0usize; n];
    let mut values: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            for i in idx.iter_mut() {
                *i = rng.random_range(0..n);
            }
            stat(&idx)
        })
        .collect();
    values.sort_by(f64::total_cmp);
    (percentile(&values, 0.025), percentile(&values, 0.975))
}

pub fn bootstrap_mean(xs: &[f64], seed: u64) -> (f64, f64) {
    bootstrap_ci(xs.len(), seed, |idx| idx.iter().map(|&i| xs[i]).sum::<f64>() / idx.len() as f64)
}

/// Interval for `Σ num / Σ den`, resampling pairs.
pub fn bootstrap_ratio(num: &[f64], den: &[f64], seed: u64) -> (f64, f64) {
    assert_eq!(num.len(), den.len());
    bootstrap_ci(num.len(), seed, |idx| {
        let (a, b) = idx.iter().fold((0.0, 0.0), |(a, b), &i| (a + num[i], b + den[i]));
        if b > 0.0 {
            a / b
        } else {
            0.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        assert_eq!(mean(&[1.0, 2.0, 3.0]), 2.0);
        assert!((std_error(&[1.0, 2.0, 3.0]) - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(std_error(&[4.0]), 0.0);
        assert!(mean(&[]).is_nan());
        let (p, se) = frequency(&[true, false, false, true]);
        assert_eq!(p, 0.5);
        assert_eq!(se, 0.25);
    }

    #[test]
    fn bootstrap_brackets_the_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..500).map(|_| rng.random::<f64>()).collect();
        let (lo, hi) = bootstrap_mean(&xs, 1);
        let m = mean(&xs);
        assert!(lo < m && m < hi);
        // about ±1.96 standard errors
        let se = std_error(&xs);
        assert!(((hi - lo) / (2.0 * 1.96 * se) - 1.0).abs() < 0.2);
        assert_eq!(bootstrap_mean(&xs, 1), (lo, hi));
        let (rlo, rhi) = bootstrap_ratio(&xs, &vec![1.0; 500], 1);
        assert!(rlo < m && m < rhi);
    }
}
