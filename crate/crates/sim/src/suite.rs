//! The `verify` suites: each runs its checks and reports summary rows plus
//! the list of checks that failed.

use anyhow::{bail, Result};
use rand_distr::{Distribution, Exp};
use ramsp_core::curve::int;
use ramsp_core::matroid::{DirectSum, MatroidKind};
use ramsp_core::{fixtures, RankOracle, WeightProfile};

use crate::checks::{self, Frequency, Safety};
use crate::harness::{trial_rng, SummaryRow};
use crate::instances::{default_fixtures, good_event_fixtures};
use crate::spec::WeightModel;

pub const SUITES: [&str; 6] = ["good-event", "concentration", "opt-vs-f", "osp", "good-sample", "safety"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Replaces every suite's trial count.
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteOutcome {
    pub rows: Vec<SummaryRow>,
    pub failures: Vec<String>,
    /// Online trials that ran under the protocol guard.
    pub safety: Safety,
}

impl SuiteOutcome {
    fn row(&mut self, suite: &str, metric: String, value: f64, ci: (f64, f64), n: usize, seed: u64) {
        self.rows.push(SummaryRow {
            suite: suite.into(),
            metric,
            value,
            ci_lo: ci.0,
            ci_hi: ci.1,
            n_trials: n,
            seed,
        });
    }

    fn exact(&mut self, suite: &str, metric: String, value: f64, n: usize, seed: u64) {
        self.row(suite, metric, value, (value, value), n, seed);
    }

    fn verdict(&mut self, suite: &str, name: &str, ok: bool, n: usize, seed: u64, why: impl FnOnce() -> String) {
        self.exact(suite, format!("{name}/pass"), if ok { 1.0 } else { 0.0 }, n, seed);
        if !ok {
            self.failures.push(format!("{suite} {name}: {}", why()));
        }
    }

    fn frequency(&mut self, suite: &str, name: &str, f: &Frequency, seed: u64) {
        self.row(suite, format!("{name}/frequency"), f.value(), f.ci(seed), f.trials, seed);
    }

    pub fn merge(&mut self, other: SuiteOutcome) {
        self.rows.extend(other.rows);
        self.failures.extend(other.failures);
        self.safety.add(other.safety);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn trials(opts: &VerifyOptions, default: usize) -> usize {
    opts.trials.unwrap_or(default)
}

pub fn good_event(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let n = trials(opts, 2000);
    for f in good_event_fixtures() {
        let m = f.source.build()?;
        let freq = checks::check_good_event(&m, n, opts.seed)?;
        out.frequency("good-event", f.name, &freq, opts.seed);
        let floor = 0.01 - 3.0 * freq.se();
        out.verdict("good-event", f.name, freq.value() >= floor, n, opts.seed, || {
            format!("frequency {} below 1/100 - 3 SE", freq.value())
        });
    }
    Ok(out)
}

pub fn concentration(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let n = trials(opts, 5000);
    for (name, rank) in [("parallel-basis-96-3", 96), ("parallel-basis-48-3", 48)] {
        let m = fixtures::parallel_basis(rank, 3);
        let c = checks::check_concentration(&m, 1, n, opts.seed)?;
        let s = "concentration";
        out.frequency(s, &format!("{name}/card"), &c.card, opts.seed);
        out.exact(s, format!("{name}/card/bound"), c.card_bound, n, opts.seed);
        out.frequency(s, &format!("{name}/rank"), &c.rank, opts.seed);
        out.exact(s, format!("{name}/rank/bound"), c.rank_bound, n, opts.seed);
        out.verdict(s, name, c.holds(), n, opts.seed, || format!("{c:?}"));
    }
    Ok(out)
}

/// The adversary's profile for a fixture: drawn once from the seed.
pub fn fixture_profile(model: &WeightModel, n: usize, seed: u64, k: u64) -> Result<WeightProfile> {
    model.profile(n, &mut trial_rng(seed, u64::MAX - k))
}

pub fn opt_vs_f(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let n = trials(opts, 5000);
    let models = [("exp", WeightModel::Exponential(1.0)), ("single-heavy", WeightModel::SingleHeavy(None))];
    for (k, f) in default_fixtures().into_iter().enumerate() {
        let m = f.source.build()?;
        for (j, (wname, model)) in models.iter().enumerate() {
            let profile = fixture_profile(model, m.ground_size(), opts.seed, (2 * k + j) as u64)?;
            let c = checks::check_opt_vs_f(&m, &profile, n, opts.seed)?;
            let name = format!("{}/{wname}", f.name);
            let s = "opt-vs-f";
            out.row(s, format!("{name}/mean_opt"), c.mean_opt, c.ci, n, opts.seed);
            out.exact(s, format!("{name}/bound"), c.bound, n, opts.seed);
            out.verdict(s, &name, c.holds(), n, opts.seed, || format!("{c:?}"));
        }
    }
    Ok(out)
}

pub fn osp(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let n = trials(opts, 20_000);
    for (k, (h, s)) in [(1usize, 4usize), (3, 2), (9, 2)].into_iter().enumerate() {
        let mut rng = trial_rng(opts.seed, u64::MAX - 100 - k as u64);
        let exp = Exp::new(1.0)?;
        let profile = WeightProfile::new((0..h * s).map(|_| exp.sample(&mut rng)).collect())?;
        let c = checks::check_osp(h, s, &profile, n, opts.seed)?;
        let name = format!("h{h}-s{s}");
        out.row("osp", format!("{name}/mean"), c.mean, c.ci, n, opts.seed);
        out.exact("osp", format!("{name}/bound"), c.bound, n, opts.seed);
        out.exact("osp", format!("{name}/min_rounds"), c.min_rounds as f64, n, opts.seed);
        let ok = c.value_holds() && c.rounds_hold() && c.safety.clean();
        out.verdict("osp", &name, ok, n, opts.seed, || format!("{c:?}"));
        out.safety.add(c.safety);
    }
    Ok(out)
}

/// Two density levels, 81 over rank 2 and 9 over rank 48, so that the
/// grid `[81, 9]` meets the rank-gap condition with `β = 3`.
pub fn two_level_fixture() -> MatroidKind {
    DirectSum::new(vec![fixtures::parallel_basis(2, 81), fixtures::parallel_basis(48, 9)]).into()
}

pub fn good_sample(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let cases: [(&str, MatroidKind, Vec<_>, usize); 2] = [
        ("parallel-basis-30-9", fixtures::parallel_basis(30, 9), vec![int(9)], 2000),
        ("two-level", two_level_fixture(), vec![int(81), int(9)], 500),
    ];
    for (name, m, grid, default) in cases {
        let n = trials(opts, default);
        let f = checks::check_good_sample(&m, &grid, 3, n, opts.seed)?;
        out.frequency("good-sample", name, &f, opts.seed);
        let ok = f.value() >= 1.0 / 3.0 - 3.0 * f.se();
        out.verdict("good-sample", name, ok, n, opts.seed, || format!("frequency {}", f.value()));
    }
    Ok(out)
}

pub fn safety(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut ms = Vec::new();
    for f in default_fixtures() {
        ms.push(f.source.build()?);
    }
    ms.push(fixtures::triangle_pendant().into());
    let per = trials(opts, 300);
    let s = checks::safety_sweep(&ms, per, opts.seed)?;
    let n = s.trials;
    out.exact("safety", "dependent".into(), s.dependent as f64, n, opts.seed);
    out.exact("safety", "violations".into(), s.violations as f64, n, opts.seed);
    out.verdict("safety", "sweep", s.clean(), n, opts.seed, || format!("{s:?}"));
    out.safety.add(s);
    Ok(out)
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteOutcome> {
    match name {
        "good-event" => good_event(opts),
        "concentration" => concentration(opts),
        "opt-vs-f" => opt_vs_f(opts),
        "osp" => osp(opts),
        "good-sample" => good_sample(opts),
        "safety" => safety(opts),
        "all" => {
            let mut out = SuiteOutcome::default();
            for s in SUITES {
                out.merge(run_suite(s, opts)?);
            }
            Ok(out)
        }
        _ => bail!("unknown suite {name:?}; expected all or one of {}", SUITES.join(", ")),
    }
}
