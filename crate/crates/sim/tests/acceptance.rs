//! One line per acceptance criterion, then a single assertion over all of
//! them. Run with `--nocapture` to see the lines.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ramsp_core::curve::{int, is_approximation, rat};
use ramsp_core::principal::rank_density_curve;
use ramsp_core::{fixtures, MatroidExt, RankDensityCurve, Rational, WeightProfile};
use ramsp_sim::checks::{self, Safety};
use ramsp_sim::harness::estimate_ratio;
use ramsp_sim::instances::{random_approximation, random_curve};
use ramsp_sim::io::read_edge_list;
use ramsp_sim::spec::{Arrival, Constants, InstanceSpec};
use ramsp_sim::suite::{self, VerifyOptions};

const SEED: u64 = 0;
const PAIRS: [(i128, i128); 3] = [(2, 2), (24, 3), (288, 9)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mismatches = checks::oracle_diff(1000, 12, SEED).unwrap();
    let secs = start.elapsed().as_secs_f64();
    outcome(mismatches == 0 && secs < 60.0, format!("1000 triples, {mismatches} mismatches, {secs:.1}s"))
}

fn nash_williams() -> Outcome {
    let (checked, bad) = checks::nash_williams_diff(50, 10, 4, SEED).unwrap();
    outcome(checked > 0 && bad == 0, format!("50 matroids, {checked} (subset, h) pairs, {bad} mismatches"))
}

fn fig1_curve() -> Outcome {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/fig1.edges");
    let g = read_edge_list(&path).unwrap();
    let got = rank_density_curve(&g, &g.ground()).unwrap();
    let expected = RankDensityCurve::from_pairs(&[
        (int(7), int(4)),
        (int(9), rat(5, 2)),
        (int(13), rat(9, 4)),
        (int(15), int(2)),
        (int(19), rat(3, 2)),
        (int(24), rat(6, 5)),
        (int(27), int(1)),
    ])
    .unwrap();
    let steps: Vec<String> = got.steps().iter().map(|s| format!("({},{})", s.rank_end, s.density)).collect();
    outcome(got == expected, format!("steps {}", steps.join(" ")))
}

fn shifted_curve() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let n = 30;
    let mut bad = 0;
    for i in 0..500 {
        let profile = WeightProfile::new((0..n).map(|_| f64::from(rng.random_range(0..1000u32))).collect()).unwrap();
        let rho = random_curve(&mut rng, 6, n as i128);
        let (a, b) = PAIRS[i % 3];
        let approx = random_approximation(&mut rng, &rho, int(a), int(b));
        let f = profile.curve_value_exact(&rho).unwrap().unwrap();
        let ft = profile.curve_value_exact(&approx).unwrap().unwrap();
        let w_max = Rational::from_integer(profile.w_max() as i128);
        if !is_approximation(&approx, &rho, int(a), int(b)).unwrap() || f > int(2 * a * b) * ft + int(a) * w_max {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("500 pairs, {bad} violations"))
}

fn approx_of_approx() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut bad = 0;
    for i in 0..500 {
        let rho1 = random_curve(&mut rng, 6, 2000);
        let (a1, b1) = PAIRS[i % 3];
        let (a2, b2) = PAIRS[(i / 3) % 3];
        let rho2 = random_approximation(&mut rng, &rho1, int(a1), int(b1));
        let rho3 = random_approximation(&mut rng, &rho2, int(a2), int(b2));
        if !is_approximation(&rho3, &rho1, int(a1 * a2), int(b1 * b2)).unwrap() {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("500 triples, {bad} violations"))
}

fn eta_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let n = 200;
    let profile = WeightProfile::new((0..n).map(|_| rng.random::<f64>().powi(3) * 100.0).collect()).unwrap();
    let grid: Vec<f64> = (0..100).map(|i| 1.0 + (n - 1) as f64 * i as f64 / 99.0).collect();
    let values: Vec<f64> = grid.iter().map(|&a| profile.eta(a).unwrap()).collect();
    let monotone = values.windows(2).all(|w| w[0] <= w[1] + 1e-9);
    let mut product_bad = 0;
    for _ in 0..500 {
        let a = 1.0 + rng.random::<f64>() * (n as f64 - 1.0);
        let h = 1.0 + rng.random::<f64>() * (n as f64 / a - 1.0);
        if profile.eta(a * h).unwrap() > 2.0 * a * profile.eta(h).unwrap() + 1e-9 {
            product_bad += 1;
        }
    }
    let mut worst = f64::NEG_INFINITY;
    let mut expectation_ok = true;
    for &(m, p) in &[(200usize, 0.005f64), (200, 0.05), (100, 0.2), (50, 0.5), (200, 0.9)] {
        let draws = 20_000;
        let vals: Vec<f64> = (0..draws)
            .map(|_| {
                let x = (0..m).filter(|_| rng.random_bool(p)).count();
                profile.eta_k(x).unwrap()
            })
            .collect();
        let mean = ramsp_sim::stats::mean(&vals);
        let se = ramsp_sim::stats::std_error(&vals);
        let bound = 3.0 * profile.eta(m as f64 * p).unwrap();
        worst = worst.max((mean - 3.0 * se) / bound);
        expectation_ok &= mean - 3.0 * se <= bound;
    }
    outcome(
        monotone && product_bad == 0 && expectation_ok,
        format!(
            "monotone on 100 points: {monotone}; product bound violations in 500: {product_bad}; \
             worst (mean - 3 SE) / 3 eta(mp) over 20000 draws: {worst:.3}"
        ),
    )
}

fn suite_outcome(name: &str, safety: &mut Safety) -> (suite::SuiteOutcome, f64) {
    let start = Instant::now();
    let out = suite::run_suite(name, &VerifyOptions { seed: SEED, trials: None }).unwrap();
    safety.add(out.safety);
    (out, start.elapsed().as_secs_f64())
}

fn values(out: &suite::SuiteOutcome, suffix: &str) -> String {
    out.rows
        .iter()
        .filter(|r| r.metric.ends_with(suffix))
        .map(|r| format!("{}={:.4}", r.metric.trim_end_matches(suffix), r.value))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main_run_ratio(safety: &mut Safety) -> Outcome {
    let spec = InstanceSpec {
        matroid: "uniform:100,25".parse().unwrap(),
        weights: "exp".parse().unwrap(),
        trials: 10_000,
        seed: SEED,
        arrival: Arrival::Random,
        constants: Constants::default(),
    };
    let est = estimate_ratio(&spec).unwrap();
    for r in &est.reports {
        safety.add(Safety {
            trials: 1,
            dependent: usize::from(!r.independent),
            violations: usize::from(r.violation),
        });
    }
    let ratio = est.metric("ratio").unwrap();
    outcome(
        ratio.value >= 0.01,
        format!("ratio {:.4} (95% CI {:.4}..{:.4}) over 10000 trials", ratio.value, ratio.ci_lo, ratio.ci_hi),
    )
}

#[test]
fn acceptance_criteria() {
    let mut safety = Safety::default();
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    let mut report = |n: usize, o: Outcome| {
        println!("criterion {n} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, o));
    };

    report(1, oracle_equivalence());
    report(2, nash_williams());
    report(3, fig1_curve());
    report(4, shifted_curve());
    report(5, approx_of_approx());
    report(6, eta_properties());

    let (ge, secs) = suite_outcome("good-event", &mut safety);
    report(7, outcome(ge.passed() && secs < 600.0, format!("{} in {secs:.0}s", values(&ge, "/frequency"))));

    let m = fixtures::parallel_basis(96, 3);
    let c = checks::check_concentration(&m, 1, 5000, SEED).unwrap();
    report(
        8,
        outcome(
            c.holds(),
            format!(
                "span excess {:.4} (bound {:.4}), core rank {:.4} (bound {:.4}), 5000 samples",
                c.card.value(),
                c.card_bound,
                c.rank.value(),
                c.rank_bound
            ),
        ),
    );

    let (ovf, _) = suite_outcome("opt-vs-f", &mut safety);
    report(9, outcome(ovf.passed(), format!("{} fixture/weight pairs, failures {:?}", ovf.rows.len() / 3, ovf.failures)));

    let (osp, _) = suite_outcome("osp", &mut safety);
    report(10, outcome(osp.passed(), format!("means {}; bounds {}", values(&osp, "/mean"), values(&osp, "/bound"))));

    let (sweep, _) = suite_outcome("safety", &mut safety);
    let twelve = main_run_ratio(&mut safety);
    report(
        11,
        outcome(
            sweep.passed() && safety.clean() && safety.trials >= 100_000,
            format!("{} trials, {} dependent, {} violations", safety.trials, safety.dependent, safety.violations),
        ),
    );
    report(12, twelve);

    let failed: Vec<usize> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
