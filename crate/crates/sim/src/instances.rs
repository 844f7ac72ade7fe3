//! Random matroids, random curves and the named fixture families used by
//! the verification suites.

use rand::Rng;
use ramsp_core::curve::{int, Rational};
use ramsp_core::matroid::{DirectSum, Explicit, Graphic, MatroidKind, Partition, Uniform};
use ramsp_core::{ElementSet, RankDensityCurve, RankOracle, Step};

use crate::spec::MatroidSource;

/// Random multigraph without loops.
pub fn random_multigraph<R: Rng + ?Sized>(rng: &mut R, vertices: usize, edges: usize) -> Graphic {
    let e = (0..edges)
        .map(|_| {
            let u = rng.random_range(0..vertices);
            let mut v = rng.random_range(0..vertices - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect();
    Graphic::new(vertices, e).expect("endpoints in range")
}

fn random_leaf<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> MatroidKind {
    match rng.random_range(0..4) {
        0 => {
            let n = rng.random_range(1..=max_n);
            Uniform::new(n, rng.random_range(1..=n)).expect("k <= n").into()
        }
        1 => {
            let target = rng.random_range(1..=max_n);
            let mut sizes = Vec::new();
            let mut total = 0;
            while total < target {
                let s = rng.random_range(1..=(target - total).min(4));
                sizes.push(s);
                total += s;
            }
            let caps: Vec<usize> = sizes.iter().map(|&s| rng.random_range(1..=s)).collect();
            Partition::new(&sizes, &caps).expect("valid capacities").into()
        }
        2 => {
            let v = rng.random_range(2..=6);
            let e = rng.random_range(1..=max_n);
            random_multigraph(rng, v, e).into()
        }
        _ => {
            let v = rng.random_range(2..=5);
            let e = rng.random_range(1..=max_n.min(10));
            let g = random_multigraph(rng, v, e);
            Explicit::from_oracle(&g).expect("graphs without loops are loopless matroids").into()
        }
    }
}

/// A random loopless matroid on at most `max_n` elements: uniform,
/// partition, graphic, explicit, or a direct sum of two of these.
pub fn random_matroid<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> MatroidKind {
    if max_n >= 2 && rng.random_bool(0.2) {
        let left = random_leaf(rng, max_n - 1);
        let right = random_leaf(rng, max_n - left.ground_size());
        return DirectSum::new(vec![left, right]).into();
    }
    random_leaf(rng, max_n)
}

pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> ElementSet {
    ElementSet::from_ids(n, (0..n).filter(|_| rng.random_bool(p))).expect("ids in range")
}

/// Integer or rational density, as used by the oracle comparisons.
pub fn random_lambda<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    if rng.random_bool(0.5) {
        int(rng.random_range(0..6))
    } else {
        Rational::new(rng.random_range(1..16), rng.random_range(2..5))
    }
}

/// A random rank-density curve: up to `max_steps` steps, rank ends with
/// denominators up to 3, densities in `[1, max_density]`.
pub fn random_curve<R: Rng + ?Sized>(rng: &mut R, max_steps: usize, max_density: i128) -> RankDensityCurve {
    let k = rng.random_range(1..=max_steps);
    let mut dens: Vec<Rational> = (0..k)
        .map(|_| {
            let q = rng.random_range(1..=4);
            Rational::new(rng.random_range(q..=max_density * q), q)
        })
        .collect();
    dens.sort_by(|a, b| b.cmp(a));
    dens.dedup();
    let mut end = int(0);
    let steps = dens
        .into_iter()
        .map(|d| {
            end += Rational::new(rng.random_range(1..=90), rng.random_range(1..=3));
            Step::new(end, d)
        })
        .collect();
    RankDensityCurve::new(steps).expect("strictly decreasing densities and increasing ends")
}

/// `f(a(t), b(t))` over the union of breakpoints, cut at the first zero.
fn combine(a: &RankDensityCurve, b: &RankDensityCurve, f: impl Fn(Rational, Rational) -> Rational) -> RankDensityCurve {
    let mut ends: Vec<Rational> = a.steps().iter().chain(b.steps()).map(|s| s.rank_end).collect();
    ends.sort();
    ends.dedup();
    let mut steps: Vec<Step> = Vec::new();
    for t in ends {
        let v = f(a.eval(t), b.eval(t));
        if v == int(0) {
            break;
        }
        match steps.last_mut() {
            Some(last) if last.density == v => last.rank_end = t,
            _ => steps.push(Step::new(t, v)),
        }
    }
    RankDensityCurve::new(steps).expect("pointwise combination of non-increasing curves")
}

/// A random `(α, β)`-approximation of `rho`: a random non-increasing curve
/// squeezed between the downshift and `rho`.
pub fn random_approximation<R: Rng + ?Sized>(
    rng: &mut R,
    rho: &RankDensityCurve,
    alpha: Rational,
    beta: Rational,
) -> RankDensityCurve {
    let lower = rho.downshift(alpha, beta).expect("alpha, beta >= 1");
    if rho.is_zero() {
        return lower;
    }
    let top = rho.steps()[0].density.ceil().to_integer();
    let g = random_curve(rng, 6, top.max(1));
    // the free curve covers the support of rho with at least 1
    let floor = RankDensityCurve::constant(rho.support_end(), int(1)).expect("positive width");
    let g = combine(&g, &floor, |x, y| x.max(y));
    let capped = combine(&g, rho, |x, y| x.min(y));
    combine(&capped, &lower, |x, y| x.max(y))
}

/// A named fixture. Names contain no commas so they can sit in CSV cells.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub source: MatroidSource,
}

fn fixture(name: &'static str, source: &str) -> Fixture {
    Fixture {
        name,
        source: source.parse().expect("fixture sources parse"),
    }
}

/// Uniform, partition, random graphic, the example graph and a parallel
/// basis fixture.
pub fn default_fixtures() -> Vec<Fixture> {
    vec![
        fixture("uniform-100-25", "uniform:100,25"),
        fixture("partition-3-classes", "partition:20x2,30x5,50x10"),
        fixture("random-graphic-50-150", "random-graphic:50,150,1"),
        fixture("fig1", "fig1"),
        fixture("parallel-basis-96-3", "parallel-basis:96,3"),
    ]
}

pub fn good_event_fixtures() -> Vec<Fixture> {
    vec![
        fixture("uniform-200-10", "uniform:200,10"),
        fixture("random-graphic-50-150", "random-graphic:50,150,1"),
        fixture("fig1", "fig1"),
    ]
}
