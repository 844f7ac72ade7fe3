mod common;

use common::{random_approximation, random_curve, rng};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::Rng;
use ramsp_core::curve::{int, is_approximation, rat};
use ramsp_core::good_curves::{check_good_curves, find_good_curves, is_power_of, CurveRanks, OracleRanks};
use ramsp_core::principal::rank_density_curve;
use ramsp_core::{MatroidExt, RankDensityCurve, Rational, WeightProfile};

/// The downshift evaluated straight from its definition.
fn downshift_at(rho: &RankDensityCurve, alpha: Rational, beta: Rational, t: Rational) -> Rational {
    let phi = if t <= int(1) { rho.eval(alpha) / beta } else { rho.eval(alpha * t) / beta };
    if phi > int(0) && phi < int(1) {
        int(1)
    } else {
        phi
    }
}

/// `η(k)` by enumerating every `k`-subset of a small profile.
fn eta_enumerated(w: &[f64], k: usize) -> f64 {
    let n = w.len();
    let mut total = 0.0;
    let mut count = 0.0;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize == k {
            total += (0..n).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).fold(0.0, f64::max);
            count += 1.0;
        }
    }
    if k == 0 {
        0.0
    } else {
        total / count
    }
}

fn int_profile<R: Rng>(r: &mut R, n: usize) -> WeightProfile {
    WeightProfile::new((0..n).map(|_| f64::from(r.random_range(0..1000u32))).collect()).unwrap()
}

const PAIRS: [(i128, i128); 3] = [(2, 2), (24, 3), (288, 9)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn downshift_matches_definition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_curve(&mut r, 6, 400);
        let (a, b) = (rat(r.random_range(2..60), r.random_range(1..3)), rat(r.random_range(2..30), r.random_range(1..3)));
        let (alpha, beta) = (a.max(int(1)), b.max(int(1)));
        let d = rho.downshift(alpha, beta).unwrap();
        for _ in 0..200 {
            let t = rat(r.random_range(1..4000), r.random_range(1..5));
            prop_assert_eq!(d.eval(t), downshift_at(&rho, alpha, beta, t), "t={}", t);
        }
        for s in rho.steps() {
            let t = s.rank_end / alpha;
            prop_assert_eq!(d.eval(t), downshift_at(&rho, alpha, beta, t));
        }
        prop_assert!(d.le(&rho));
        prop_assert!(is_approximation(&d, &rho, alpha, beta).unwrap());
        prop_assert!(is_approximation(&rho, &rho, alpha, beta).unwrap());
    }

    #[test]
    fn curve_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_curve(&mut r, 8, 500);
        let dens: Vec<Rational> = c.densities().collect();
        prop_assert!(dens.windows(2).all(|w| w[0] > w[1]));
        prop_assert!(dens.iter().all(|d| *d >= int(1)));
        prop_assert!(c.steps().windows(2).all(|w| w[0].rank_end < w[1].rank_end));
        // left-continuity: the value at a breakpoint is the step's own
        for s in c.steps() {
            prop_assert_eq!(c.eval(s.rank_end), s.density);
            prop_assert!(c.r_max(s.density) >= s.rank_end);
        }
        prop_assert_eq!(c.eval(c.support_end() + rat(1, 7)), int(0));
        let t = rat(r.random_range(1..3000), 2);
        let cut = c.truncate(t);
        prop_assert!(cut.le(&c));
        prop_assert_eq!(cut.support_end(), t.min(c.support_end()));
        prop_assert!(c.le(&c));
    }

    #[test]
    fn approximation_of_approximation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho1 = random_curve(&mut r, 6, 2000);
        let (a1, b1) = PAIRS[r.random_range(0..3)];
        let (a2, b2) = PAIRS[r.random_range(0..3)];
        let rho2 = random_approximation(&mut r, &rho1, int(a1), int(b1));
        prop_assert!(is_approximation(&rho2, &rho1, int(a1), int(b1)).unwrap());
        let rho3 = random_approximation(&mut r, &rho2, int(a2), int(b2));
        prop_assert!(is_approximation(&rho3, &rho2, int(a2), int(b2)).unwrap());
        prop_assert!(is_approximation(&rho3, &rho1, int(a1 * a2), int(b1 * b2)).unwrap());
        // the double downshift itself
        let dd = rho1.downshift(int(a1), int(b1)).unwrap().downshift(int(a2), int(b2)).unwrap();
        prop_assert!(is_approximation(&dd, &rho1, int(a1 * a2), int(b1 * b2)).unwrap());
    }

    #[test]
    fn shifted_curve_bound_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 30;
        let profile = int_profile(&mut r, n);
        let rho = random_curve(&mut r, 6, n as i128);
        let (a, b) = PAIRS[r.random_range(0..3)];
        let approx = random_approximation(&mut r, &rho, int(a), int(b));
        let f = profile.curve_value_exact(&rho).unwrap().unwrap();
        let ft = profile.curve_value_exact(&approx).unwrap().unwrap();
        let w_max = Ratio::from_integer(profile.w_max() as i128);
        prop_assert!(f <= int(2 * a * b) * ft + int(a) * w_max);
    }

    #[test]
    fn eta_is_monotone_and_sublinear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..200);
        let profile = WeightProfile::new((0..n).map(|_| r.random::<f64>() * 100.0).collect()).unwrap();
        let mut prev = 0.0;
        for i in 0..=100 {
            let a = n as f64 * i as f64 / 100.0;
            let v = profile.eta(a).unwrap();
            prop_assert!(v >= prev - 1e-9);
            prev = v;
        }
        for _ in 0..20 {
            let a = 1.0 + r.random::<f64>() * (n as f64 - 1.0);
            let h = 1.0 + r.random::<f64>() * (n as f64 / a - 1.0);
            prop_assert!(profile.eta(a * h).unwrap() <= 2.0 * a * profile.eta(h).unwrap() + 1e-9);
        }
        prop_assert!((profile.eta(n as f64).unwrap() - profile.w_max()).abs() < 1e-9);
    }

    #[test]
    fn eta_matches_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..12);
        let w: Vec<f64> = (0..n).map(|_| f64::from(r.random_range(0..50u32))).collect();
        let profile = WeightProfile::new(w.clone()).unwrap();
        for k in 0..=n {
            let e = eta_enumerated(&w, k);
            prop_assert!((profile.eta_k(k).unwrap() - e).abs() < 1e-9);
            prop_assert!((profile.eta_log_space(k).unwrap() - e).abs() < 1e-7);
            let exact = profile.eta_exact(k).unwrap().unwrap();
            prop_assert!((ramsp_core::curve::to_f64(exact) - e).abs() < 1e-9);
        }
    }

    #[test]
    fn good_curves_guarantees(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 800;
        let profile = WeightProfile::new((0..n).map(|_| r.random::<f64>() * 10.0).collect()).unwrap();
        let rho = random_curve(&mut r, 8, 729);
        let (alpha, beta) = ([24i128, 30, 100][r.random_range(0..3)], [3u64, 4, 9][r.random_range(0..3)]);
        let approx = random_approximation(&mut r, &rho, int(alpha), int(beta as i128));
        let bundle = find_good_curves(&approx, int(alpha), beta).unwrap();
        let check = check_good_curves(&bundle, &rho, &CurveRanks(&rho), &profile, int(alpha), beta).unwrap();
        prop_assert!(check.approximation, "{:?}", bundle);
        prop_assert!(check.f_sum);
        prop_assert!(check.structure);
        prop_assert!(bundle.conditioned.le(&approx));
        prop_assert!(bundle.grid.iter().all(|g| is_power_of(*g, beta)));
    }
}

#[test]
fn eta_binomial_expectation() {
    // E[η(X)] ≤ 3η(mp) for X ~ B(m, p), by sampling and by the exact pmf
    let mut r = rng(99);
    let n = 60;
    let profile = WeightProfile::new((0..n).map(|_| r.random::<f64>().powi(4) * 100.0).collect()).unwrap();
    for &(m, p) in &[(60usize, 0.05f64), (40, 0.1), (20, 0.5), (60, 0.9)] {
        let draws = 20_000;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..draws {
            let x = (0..m).filter(|_| r.random_bool(p)).count();
            let v = profile.eta_k(x).unwrap();
            sum += v;
            sq += v * v;
        }
        let mean = sum / draws as f64;
        let se = ((sq / draws as f64 - mean * mean) / draws as f64).sqrt();
        let bound = 3.0 * profile.eta(m as f64 * p).unwrap();
        assert!(mean - 3.0 * se <= bound, "m={m} p={p}: {mean} vs {bound}");
        let mut exact = 0.0;
        let mut pmf = (1.0 - p).powi(m as i32);
        for k in 0..=m {
            exact += pmf * profile.eta_k(k).unwrap();
            pmf *= (m - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
        }
        assert!(exact <= bound + 1e-9);
        assert!((exact - mean).abs() <= 5.0 * se + 1e-9);
    }
}

#[test]
fn good_curves_on_matroids() {
    let mut r = rng(7);
    for _ in 0..40 {
        let v = r.random_range(4..9);
        let e = r.random_range(v..4 * v);
        let g = ramsp_core::matroid::Graphic::new(v, common::random_graph(&mut r, v, e)).unwrap();
        let rho = rank_density_curve(&g, &g.ground()).unwrap();
        let profile = WeightProfile::new((0..e).map(|_| r.random::<f64>()).collect()).unwrap();
        let bundle = find_good_curves(&rho, int(24), 3).unwrap();
        let check = check_good_curves(&bundle, &rho, &OracleRanks(&g), &profile, int(24), 3).unwrap();
        assert!(check.all(), "{check:?}");
        let by_curve = check_good_curves(&bundle, &rho, &CurveRanks(&rho), &profile, int(24), 3).unwrap();
        assert_eq!(check, by_curve);
    }
}
