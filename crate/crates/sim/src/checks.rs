//! Monte Carlo checks of the probabilistic statements the algorithms rest
//! on. Every check is seeded and fans trials out with [`par_trials`].

use anyhow::{bail, Result};
use rand::Rng;
use ramsp_core::curve::{int, is_approximation, Rational};
use ramsp_core::matroid::{span, union_rank, MatroidKind};
use ramsp_core::online::{
    adversarial_sample_run, assign_weights, chain_decompose, main_run, osp, random_order, ArrivalStream, Branch,
    Config,
};
use ramsp_core::principal::{densest_set, rank_density_curve};
use ramsp_core::{fixtures, ElementSet, MatroidExt, RankOracle, WeightProfile};

use crate::harness::{offline_opt, par_trials, trial_rng};
use crate::instances::random_subset;
use crate::stats;

/// Empirical frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    pub hits: usize,
    pub trials: usize,
}

impl Frequency {
    pub fn from_hits(hits: &[bool]) -> Self {
        Frequency {
            hits: hits.iter().filter(|h| **h).count(),
            trials: hits.len(),
        }
    }

    pub fn value(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    pub fn se(&self) -> f64 {
        let p = self.value();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Bootstrap interval of the frequency.
    pub fn ci(&self, seed: u64) -> (f64, f64) {
        let xs: Vec<f64> = (0..self.trials).map(|i| if i < self.hits { 1.0 } else { 0.0 }).collect();
        stats::bootstrap_mean(&xs, seed)
    }
}

/// Both halves of a random half-sample have `(288, 9)`-approximate curves.
pub fn check_good_event<O: RankOracle + Sync>(oracle: &O, trials: usize, seed: u64) -> Result<Frequency> {
    let n = oracle.ground_size();
    let full = rank_density_curve(oracle, &oracle.ground())?;
    let (a, b) = (int(288), int(9));
    let hits = par_trials(trials, |i| -> Result<bool> {
        let mut rng = trial_rng(seed, i as u64);
        let s = random_subset(&mut rng, n, 0.5);
        let rest = s.complement();
        let left = rank_density_curve(oracle, &s)?;
        let right = rank_density_curve(oracle, &rest)?;
        Ok(is_approximation(&left, &full, a, b)? && is_approximation(&right, &full, a, b)?)
    })?
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    Ok(Frequency::from_hits(&hits))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Concentration {
    /// `|span(D(S, h)) ∖ S| ≤ |N|/12`.
    pub card: Frequency,
    pub card_bound: f64,
    /// `r(D(S, h)) ≤ r(N)/8`.
    pub rank: Frequency,
    pub rank_bound: f64,
}

impl Concentration {
    pub fn holds(&self) -> bool {
        self.card.value() <= self.card_bound + 3.0 * self.card.se()
            && self.rank.value() <= self.rank_bound + 3.0 * self.rank.se()
    }
}

/// Frequencies of the two small-core events for a matroid with `3h`
/// disjoint bases.
pub fn check_concentration<O: RankOracle + Sync>(oracle: &O, h: usize, trials: usize, seed: u64) -> Result<Concentration> {
    let n = oracle.ground_size();
    let ground = oracle.ground();
    let r = oracle.rank(&ground);
    if h == 0 || union_rank(oracle, &ground, 3 * h)? != 3 * h * r {
        bail!("the matroid does not contain {} disjoint bases", 3 * h);
    }
    let lambda = int(h as i128);
    let pairs = par_trials(trials, |i| -> Result<(bool, bool)> {
        let mut rng = trial_rng(seed, i as u64);
        let s = random_subset(&mut rng, n, 0.5);
        let core = densest_set(oracle, &s, lambda)?;
        let outside = span(oracle, &core)?.difference(&s).len();
        Ok((12 * outside <= n, 8 * oracle.rank(&core) <= r))
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let card: Vec<bool> = pairs.iter().map(|p| p.0).collect();
    let rank: Vec<bool> = pairs.iter().map(|p| p.1).collect();
    Ok(Concentration {
        card: Frequency::from_hits(&card),
        card_bound: (-(n as f64) / 144.0).exp(),
        rank: Frequency::from_hits(&rank),
        rank_bound: (-(r as f64) / 48.0).exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptVsF {
    pub mean_opt: f64,
    pub se: f64,
    pub ci: (f64, f64),
    pub f: f64,
    pub bound: f64,
    pub trials: usize,
}

impl OptVsF {
    pub fn holds(&self) -> bool {
        self.mean_opt <= self.bound + 3.0 * self.se
    }
}

/// Expected optimum under random assignment of `profile` against
/// `3e/(e−1)·F(ρ_M)`.
pub fn check_opt_vs_f<O: RankOracle + Sync>(oracle: &O, profile: &WeightProfile, trials: usize, seed: u64) -> Result<OptVsF> {
    let n = oracle.ground_size();
    let curve = rank_density_curve(oracle, &oracle.ground())?;
    let f = profile.curve_value(&curve)?;
    let e = std::f64::consts::E;
    let opts = par_trials(trials, |i| -> Result<f64> {
        let mut rng = trial_rng(seed, i as u64);
        offline_opt(oracle, &assign_weights(profile, n, &mut rng)?)
    })?
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(OptVsF {
        mean_opt: stats::mean(&opts),
        se: stats::std_error(&opts),
        ci: stats::bootstrap_mean(&opts, seed),
        f,
        bound: 3.0 * e / (e - 1.0) * f,
        trials,
    })
}

/// Trials run under the online guard, with what went wrong in them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Safety {
    pub trials: usize,
    pub dependent: usize,
    pub violations: usize,
}

impl Safety {
    pub fn add(&mut self, other: Safety) {
        self.trials += other.trials;
        self.dependent += other.dependent;
        self.violations += other.violations;
    }

    pub fn clean(&self) -> bool {
        self.dependent == 0 && self.violations == 0
    }

    fn record(&mut self, independent: bool, violation: bool) {
        self.trials += 1;
        self.dependent += usize::from(!independent);
        self.violations += usize::from(violation);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OspCheck {
    pub h: usize,
    pub s: usize,
    pub mean: f64,
    pub se: f64,
    pub ci: (f64, f64),
    pub bound: f64,
    pub min_rounds: usize,
    pub safety: Safety,
}

impl OspCheck {
    pub fn value_holds(&self) -> bool {
        self.mean >= self.bound - 3.0 * self.se
    }

    pub fn rounds_hold(&self) -> bool {
        2 * self.min_rounds >= self.s.max(2)
    }
}

/// OSP with parameter `h` on `h` disjoint copies of a size-`s` basis, with
/// `profile` assigned at random and a random order.
pub fn check_osp(h: usize, s: usize, profile: &WeightProfile, trials: usize, seed: u64) -> Result<OspCheck> {
    let m = fixtures::osp_fixture(h, s);
    let n = m.ground_size();
    let runs = par_trials(trials, |i| -> Result<(f64, usize, bool, bool)> {
        let mut rng = trial_rng(seed, i as u64);
        let stream = ArrivalStream::random(&m, profile, &mut rng)?;
        let out = osp(&stream, h)?;
        Ok((stream.selected_weight(), out.rounds, m.is_independent(&out.selected), stream.violation().is_some()))
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let mut safety = Safety::default();
    for r in &runs {
        safety.record(r.2, r.3);
    }
    debug_assert_eq!(n, h * s);
    Ok(OspCheck {
        h,
        s,
        mean: stats::mean(&values),
        se: stats::std_error(&values),
        ci: stats::bootstrap_mean(&values, seed),
        bound: s as f64 / (2.0 * std::f64::consts::E) * profile.eta(h as f64)?,
        min_rounds: runs.iter().map(|r| r.1).min().unwrap_or(0),
        safety,
    })
}

/// Frequency of samples after which every chain part with a large dense
/// core holds `λ̄_i` disjoint independent sets of total size at least
/// `λ̄_i·r(D(N, λ̄_i))/24`.
pub fn check_good_sample<O: RankOracle + Sync>(
    oracle: &O,
    grid: &[Rational],
    beta: u64,
    trials: usize,
    seed: u64,
) -> Result<Frequency> {
    let n = oracle.ground_size();
    let ground = oracle.ground();
    let mut tracked = Vec::new();
    for (i, l) in grid.iter().enumerate() {
        let r = oracle.rank(&densest_set(oracle, &ground, *l)?);
        if r >= 24 && *l >= int(beta as i128) {
            let h = usize::try_from(l.to_integer()).map_err(|_| anyhow::anyhow!("grid density too large"))?;
            tracked.push((i, h, r));
        }
    }
    let hits = par_trials(trials, |t| -> Result<bool> {
        let mut rng = trial_rng(seed, t as u64);
        let s = random_subset(&mut rng, n, 0.5);
        let chain = chain_decompose(oracle, &s, grid, beta)?;
        for &(i, h, r) in &tracked {
            if 24 * union_rank(oracle, &chain.parts[i], h)? < h * r {
                return Ok(false);
            }
        }
        Ok(true)
    })?
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    Ok(Frequency::from_hits(&hits))
}

/// Small constants so that every branch does real work on desk-sized
/// fixtures.
pub fn desk_config(force: Option<Branch>) -> Config {
    Config {
        alpha: int(24),
        beta: 3,
        downshift: (int(2), int(1)),
        force,
        ..Config::default()
    }
}

/// Runs the main algorithm and the adversarial-order variant under every
/// forced branch and the unforced mixture, with both the default and the
/// desk constants, on each matroid.
pub fn safety_sweep(matroids: &[MatroidKind], trials_per_case: usize, seed: u64) -> Result<Safety> {
    let mut cfgs = vec![Config::default(), desk_config(None)];
    for b in Branch::ALL {
        cfgs.push(Config::forced(b));
        cfgs.push(desk_config(Some(b)));
    }
    let cases: Vec<(usize, usize, bool)> = (0..matroids.len())
        .flat_map(|m| (0..cfgs.len()).flat_map(move |c| [(m, c, false), (m, c, true)]))
        .collect();
    let total = cases.len() * trials_per_case;
    let runs = par_trials(total, |t| -> Result<(bool, bool)> {
        let (mi, ci, adversarial) = cases[t / trials_per_case];
        let m = &matroids[mi];
        let n = m.ground_size();
        let mut rng = trial_rng(seed, t as u64);
        let weights: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let order = if adversarial {
            let mut o: Vec<usize> = (0..n).collect();
            o.sort_by(|a, b| weights[*b].total_cmp(&weights[*a]));
            o
        } else {
            random_order(n, &mut rng)
        };
        let stream = ArrivalStream::new(m, weights, order)?;
        let out = if adversarial {
            adversarial_sample_run(&stream, &cfgs[ci], &mut rng)
        } else {
            main_run(&stream, &cfgs[ci], &mut rng)
        };
        let violation = match out {
            Ok(_) => stream.violation().is_some(),
            Err(ramsp_core::Error::ProtocolViolation(_)) => true,
            Err(e) => return Err(e.into()),
        };
        Ok((m.is_independent(&stream.selected()), violation))
    })?;
    let mut safety = Safety::default();
    for r in runs {
        let (independent, violation) = r?;
        safety.record(independent, violation);
    }
    Ok(safety)
}

/// `densest_set` against exhaustive search on random instances; returns
/// the number of mismatches.
pub fn oracle_diff(triples: usize, max_n: usize, seed: u64) -> Result<usize> {
    let mismatches = par_trials(triples, |i| -> Result<bool> {
        let mut rng = trial_rng(seed, i as u64);
        let m = crate::instances::random_matroid(&mut rng, max_n);
        let s = random_subset(&mut rng, m.ground_size(), 0.8);
        let lambda = crate::instances::random_lambda(&mut rng);
        Ok(densest_set(&m, &s, lambda)? != ramsp_core::principal::brute_force_densest(&m, &s, lambda)?)
    })?
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    Ok(mismatches.into_iter().filter(|m| *m).count())
}

/// `min_{T ⊆ U} h·r(T) + |U ∖ T|` by enumerating `T`.
pub fn nash_williams_brute<O: RankOracle + ?Sized>(oracle: &O, u: &ElementSet, h: usize) -> usize {
    let elems = u.to_vec();
    let n = oracle.ground_size();
    let mut best = usize::MAX;
    for mask in 0u64..1 << elems.len() {
        let t = ElementSet::from_ids(n, elems.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e))
            .expect("ids in range");
        best = best.min(h * oracle.rank(&t) + elems.len() - t.len());
    }
    best
}

/// `union_rank` against [`nash_williams_brute`] on every subset of random
/// matroids; returns (comparisons, mismatches).
pub fn nash_williams_diff(matroids: usize, max_n: usize, max_h: usize, seed: u64) -> Result<(usize, usize)> {
    let per = par_trials(matroids, |i| -> Result<(usize, usize)> {
        let mut rng = trial_rng(seed, i as u64);
        let m = crate::instances::random_matroid(&mut rng, max_n);
        let n = m.ground_size();
        let (mut checked, mut bad) = (0, 0);
        for mask in 0u64..1 << n {
            let u = ElementSet::from_ids(n, (0..n).filter(|e| mask >> e & 1 == 1)).expect("ids in range");
            for h in 1..=max_h {
                checked += 1;
                if union_rank(&m, &u, h)? != nash_williams_brute(&m, &u, h) {
                    bad += 1;
                }
            }
        }
        Ok((checked, bad))
    })?;
    per.into_iter().try_fold((0, 0), |(c, b), r| {
        let (c2, b2) = r?;
        Ok((c + c2, b + b2))
    })
}
