mod common;

use common::{random_spec, random_subset, rng};
use proptest::prelude::*;
use rand::Rng;
use ramsp_core::curve::int;
use ramsp_core::matroid::{greedy_max_weight, MatroidKind};
use ramsp_core::online::{
    adversarial_sample_run, aided_run, chain_decompose, classical_secretary, grp_run, main_run, osp, ArrivalStream,
    Branch, Config,
};
use ramsp_core::principal::rank_density_curve;
use ramsp_core::{fixtures, ElementSet, MatroidExt, RankDensityCurve, RankOracle, Rational, WeightProfile};

fn exp_profile<R: Rng>(r: &mut R, n: usize) -> WeightProfile {
    WeightProfile::new((0..n).map(|_| -(1.0 - r.random::<f64>()).ln()).collect()).unwrap()
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn random_grid<R: Rng>(r: &mut R) -> Vec<Rational> {
    let mut grid: Vec<Rational> = [27, 9, 3, 1].into_iter().filter(|_| r.random_bool(0.6)).map(int).collect();
    if grid.is_empty() {
        grid.push(int(3));
    }
    grid
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn chain_parts_are_disjoint_and_combine_independently(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, 14);
        let m = spec.build();
        let n = spec.n();
        let sample = random_subset(&mut r, n, 0.5);
        let grid = random_grid(&mut r);
        let chain = chain_decompose(&m, &sample, &grid, 3).unwrap();
        let mut seen = sample.clone();
        let mut union = ElementSet::new(n);
        for i in 0..chain.len() {
            let part = &chain.parts[i];
            prop_assert!(part.intersection(&seen).is_empty());
            seen = seen.union(part);
            let minor = chain.minor(&m, i).unwrap();
            let weights: Vec<f64> = (0..minor.ground_size()).map(|_| r.random::<f64>()).collect();
            let basis = greedy_max_weight(&minor, &weights).unwrap();
            // any independent subset of the minor works, not only bases
            let keep: ElementSet = basis.iter().filter(|_| r.random_bool(0.8)).fold(ElementSet::new(minor.ground_size()), |s, e| s.with(e));
            union = union.union(&minor.to_base(&keep));
        }
        prop_assert!(m.is_independent(&union), "{:?}", chain);
        // the cores are nested
        for w in chain.cores.windows(2) {
            prop_assert!(w[0].is_subset(&w[1]));
        }
    }
}

#[test]
fn osp_value_and_rounds() {
    let mut r = rng(10);
    for &(h, s) in &[(1usize, 4usize), (3, 2), (9, 2)] {
        let m = fixtures::osp_fixture(h, s);
        let profile = exp_profile(&mut r, h * s);
        let bound = s as f64 / (2.0 * std::f64::consts::E) * profile.eta(h as f64).unwrap();
        let mut values = Vec::new();
        for _ in 0..20_000 {
            let stream = ArrivalStream::random(&m, &profile, &mut r).unwrap();
            let out = osp(&stream, h).unwrap();
            assert!(m.is_independent(&out.selected));
            assert!(stream.violation().is_none());
            assert!(2 * out.rounds >= s.max(2), "h={h} s={s} rounds={}", out.rounds);
            values.push(stream.selected_weight());
        }
        let (mean, se) = mean_se(&values);
        assert!(mean >= bound - 3.0 * se, "h={h} s={s}: {mean} < {bound}");
    }
}

#[test]
fn secretary_picks_the_maximum_often() {
    let m = fixtures::uniform(50, 1);
    let mut r = rng(11);
    let profile = exp_profile(&mut r, 50);
    let trials = 20_000;
    let mut hits = 0;
    for _ in 0..trials {
        let stream = ArrivalStream::random(&m, &profile, &mut r).unwrap();
        if let Some(e) = classical_secretary(&stream, 50).unwrap() {
            if stream.weight(e) == profile.w_max() {
                hits += 1;
            }
        }
    }
    let p = hits as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    assert!(p >= 1.0 / std::f64::consts::E - 0.02 - 3.0 * se, "{p}");
}

#[test]
fn adversarial_threshold_branch_catches_the_maximum() {
    // w_max unsampled and the runner-up sampled is enough for a hit
    let n = 20;
    let m = fixtures::uniform(n, 1);
    let mut r = rng(12);
    let weights: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let cfg = Config::forced(Branch::Secretary);
    let trials = 20_000;
    let mut hits = 0;
    for _ in 0..trials {
        // adversarial order: increasing weights
        let stream = ArrivalStream::new(&m, weights.clone(), (0..n).collect()).unwrap();
        let out = adversarial_sample_run(&stream, &cfg, &mut r).unwrap();
        if out.selected.contains(n - 1) {
            hits += 1;
        }
    }
    let p = 1.0 / std::f64::consts::E;
    let floor = p * (1.0 - p);
    let freq = hits as f64 / trials as f64;
    let se = (freq * (1.0 - freq) / trials as f64).sqrt();
    assert!(freq >= floor - 3.0 * se, "{freq} < {floor}");
    // with increasing weights the hit is exact: max unsampled, runner-up sampled
    assert!((freq - floor).abs() <= 4.0 * se, "{freq} vs {floor}");
}

#[test]
fn adversarial_chain_branch_sample_rate() {
    let m = fixtures::parallel_basis(10, 12);
    let n = m.ground_size();
    let mut r = rng(13);
    let profile = exp_profile(&mut r, n);
    let mut cfg = Config::forced(Branch::Chain);
    cfg.alpha = int(24);
    cfg.beta = 3;
    cfg.downshift = (int(1), int(1));
    let trials = 2_000;
    let mut total = 0;
    for _ in 0..trials {
        let stream = ArrivalStream::random(&m, &profile, &mut r).unwrap();
        let out = adversarial_sample_run(&stream, &cfg, &mut r).unwrap();
        assert!(m.is_independent(&out.selected));
        assert!(stream.violation().is_none());
        total += out.trace.sample_size;
    }
    let rate = total as f64 / (trials * n) as f64;
    assert!((rate - 0.75).abs() < 0.01, "{rate}");
}

#[test]
fn grp_beats_its_floor_on_a_dense_uniform_matroid() {
    // Uniform(270, 10) has density 27 over rank 10
    let m = fixtures::uniform(270, 10);
    let mut r = rng(14);
    let profile = exp_profile(&mut r, 270);
    let curve = RankDensityCurve::constant(int(10), int(27)).unwrap();
    let floor = profile.curve_value(&curve).unwrap() / (180.0 * std::f64::consts::E);
    let mut values = Vec::new();
    for _ in 0..3_000 {
        let stream = ArrivalStream::random(&m, &profile, &mut r).unwrap();
        let out = grp_run(&stream, &curve, 3, &Config::default(), &mut r).unwrap();
        assert!(m.is_independent(&out.selected));
        values.push(stream.selected_weight());
    }
    let (mean, se) = mean_se(&values);
    assert!(mean >= floor - 3.0 * se, "{mean} < {floor}");
}

#[test]
fn aided_run_on_exact_curve() {
    let mut r = rng(15);
    for &(n, k) in &[(40usize, 10usize), (100, 25)] {
        let m = fixtures::uniform(n, k);
        let profile = exp_profile(&mut r, n);
        let rho = rank_density_curve(&m, &m.ground()).unwrap();
        let (alpha, beta) = (24.0, 3.0);
        let bound = (profile.curve_value(&rho).unwrap() - alpha * alpha * profile.w_max())
            / (1440.0 * std::f64::consts::E * alpha * alpha * beta * beta);
        let mut values = Vec::new();
        for _ in 0..1_000 {
            let stream = ArrivalStream::random(&m, &profile, &mut r).unwrap();
            let out = aided_run(&stream, &rho, int(24), 3, &Config::default(), &mut r).unwrap();
            assert!(m.is_independent(&out.selected));
            assert!(stream.violation().is_none());
            values.push(stream.selected_weight());
        }
        let (mean, se) = mean_se(&values);
        if bound > 0.0 {
            assert!(mean >= bound - 3.0 * se);
        }
        assert!(mean > 0.0);
    }
}

fn safety_families<R: Rng>(r: &mut R) -> Vec<MatroidKind> {
    let mut out = vec![
        fixtures::uniform(30, 5),
        fixtures::parallel_basis(6, 9),
        fixtures::fig1().into(),
        fixtures::triangle_pendant().into(),
    ];
    for _ in 0..8 {
        out.push(random_spec(r, 14).build());
    }
    out
}

#[test]
fn every_algorithm_is_safe() {
    let mut r = rng(16);
    let families = safety_families(&mut r);
    let mut cfgs = vec![Config::default()];
    for b in Branch::ALL {
        let mut cfg = Config::forced(b);
        cfg.alpha = int(24);
        cfg.beta = 3;
        cfg.downshift = (int(2), int(1));
        cfgs.push(cfg);
    }
    for m in &families {
        let n = m.ground_size();
        let profile = exp_profile(&mut r, n);
        for cfg in &cfgs {
            for _ in 0..40 {
                let s = ArrivalStream::random(m, &profile, &mut r).unwrap();
                let out = main_run(&s, cfg, &mut r).unwrap();
                assert!(m.is_independent(&out.selected));
                assert!(s.violation().is_none(), "{:?}", s.violation());
                let s = ArrivalStream::random(m, &profile, &mut r).unwrap();
                let out = adversarial_sample_run(&s, cfg, &mut r).unwrap();
                assert!(m.is_independent(&out.selected));
                assert!(s.violation().is_none(), "{:?}", s.violation());
                let s = ArrivalStream::random(m, &profile, &mut r).unwrap();
                let out = aided_run(&s, &RankDensityCurve::zero(), int(24), 3, cfg, &mut r).unwrap();
                assert!(m.is_independent(&out.selected));
            }
        }
    }
}

#[test]
fn grp_rejects_bad_grids_before_reading() {
    let m = fixtures::uniform(10, 3);
    let mut r = rng(17);
    let profile = exp_profile(&mut r, 10);
    let s = ArrivalStream::random(&m, &profile, &mut r).unwrap();
    let bad = RankDensityCurve::constant(int(3), int(2)).unwrap();
    assert!(grp_run(&s, &bad, 3, &Config::default(), &mut r).is_err());
    assert!(grp_run(&s, &RankDensityCurve::constant(int(3), int(9)).unwrap(), 2, &Config::default(), &mut r).is_err());
    assert_eq!(s.remaining(), 10);
    assert!(s.revealed().is_empty());
}
