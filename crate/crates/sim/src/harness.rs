//! Trial execution: one seeded stream per trial, fanned out over a worker
//! pool and gathered back in trial order.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use ramsp_core::matroid::{greedy_max_weight, weight_of};
use ramsp_core::online::{adversarial_sample_run, assign_weights, main_run, random_order, ArrivalStream, Config, Trace};
use ramsp_core::{Error, MatroidExt, RankOracle, WeightProfile};
use serde::{Deserialize, Serialize};

use crate::spec::{Arrival, InstanceSpec};
use crate::stats;

/// Environment variable holding the worker count; unset or 0 uses every
/// core.
pub const WORKERS_ENV: &str = "RAMSP_WORKERS";

/// The generator for trial `index` of a run seeded with `seed`: the seed
/// picks the key, the index picks the stream.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `f(0..n)` on the worker pool and returns the results in index
/// order.
pub fn par_trials<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
    let workers = match std::env::var(WORKERS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| anyhow::anyhow!("{WORKERS_ENV} must be a number, got {v:?}"))?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    Ok(pool.install(|| (0..n).into_par_iter().map(f).collect()))
}

/// Weight of a maximum-weight basis for the realized assignment.
pub fn offline_opt<O: RankOracle + ?Sized>(oracle: &O, weights: &[f64]) -> Result<f64> {
    Ok(weight_of(&greedy_max_weight(oracle, weights)?, weights))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub branch: Option<String>,
    pub split: Option<usize>,
    pub sample_size: usize,
    pub grid: Vec<String>,
    pub chain_routed: Vec<usize>,
    pub osp_rounds: Vec<usize>,
}

impl From<&Trace> for TraceReport {
    fn from(t: &Trace) -> Self {
        TraceReport {
            branch: t.branch.map(|b| b.name().to_string()),
            split: t.split,
            sample_size: t.sample_size,
            grid: t.grid.iter().map(|g| g.to_string()).collect(),
            chain_routed: t.chain_routed.clone(),
            osp_rounds: t.osp_rounds.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub alg_weight: f64,
    pub opt_weight: f64,
    pub selected: usize,
    pub independent: bool,
    pub violation: bool,
    pub trace: TraceReport,
}

/// One trial of the main algorithm (random order) or the adversarial-order
/// variant (sampling phase, then increasing weight).
pub fn run_trial<O: RankOracle>(
    matroid: &O,
    profile: Option<&WeightProfile>,
    spec: &InstanceSpec,
    cfg: &Config,
    index: usize,
) -> Result<TrialReport> {
    let mut rng = trial_rng(spec.seed, index as u64);
    let n = matroid.ground_size();
    let drawn;
    let profile = match profile {
        Some(p) => p,
        None => {
            drawn = spec.weights.profile(n, &mut rng)?;
            &drawn
        }
    };
    let weights = assign_weights(profile, n, &mut rng)?;
    let order = match spec.arrival {
        Arrival::Random => random_order(n, &mut rng),
        Arrival::Adversarial => {
            let mut o: Vec<usize> = (0..n).collect();
            o.sort_by(|a, b| weights[*a].total_cmp(&weights[*b]));
            o
        }
    };
    let stream = ArrivalStream::new(matroid, weights.clone(), order)?;
    let outcome = match spec.arrival {
        Arrival::Random => main_run(&stream, cfg, &mut rng),
        Arrival::Adversarial => adversarial_sample_run(&stream, cfg, &mut rng),
    };
    let trace = match outcome {
        Ok(out) => TraceReport::from(&out.trace),
        Err(Error::ProtocolViolation(_)) => TraceReport::from(&Trace::default()),
        Err(e) => return Err(e.into()),
    };
    let selected = stream.selected();
    Ok(TrialReport {
        trial: index,
        alg_weight: stream.selected_weight(),
        opt_weight: offline_opt(matroid, &weights)?,
        selected: selected.len(),
        independent: matroid.is_independent(&selected),
        violation: stream.violation().is_some(),
        trace,
    })
}

pub fn run_trials(spec: &InstanceSpec) -> Result<Vec<TrialReport>> {
    spec.validate()?;
    let m = spec.matroid.build()?;
    let cfg = spec.constants.config()?;
    let fixed = if spec.weights.is_deterministic() {
        Some(spec.weights.profile(m.ground_size(), &mut trial_rng(spec.seed, u64::MAX))?)
    } else {
        None
    };
    par_trials(spec.trials, |i| run_trial(&m, fixed.as_ref(), spec, &cfg, i))?.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub suite: String,
    pub metric: String,
    pub value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub n_trials: usize,
    pub seed: u64,
}

pub const SUMMARY_HEADER: &str = "suite,metric,value,ci_lo,ci_hi,n_trials,seed";

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{},{}", r.suite, r.metric, r.value, r.ci_lo, r.ci_hi, r.n_trials, r.seed);
    }
    out
}

pub fn parse_summary_csv(text: &str) -> Result<Vec<SummaryRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(SUMMARY_HEADER) {
        bail!("missing summary header");
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 7 {
                bail!("summary row needs 7 fields: {l:?}");
            }
            Ok(SummaryRow {
                suite: f[0].into(),
                metric: f[1].into(),
                value: f[2].parse()?,
                ci_lo: f[3].parse()?,
                ci_hi: f[4].parse()?,
                n_trials: f[5].parse()?,
                seed: f[6].parse()?,
            })
        })
        .collect()
}

/// Summary of a run, computed from the reports alone so it can be rebuilt
/// from the emitted JSON lines.
pub fn summarize(suite: &str, reports: &[TrialReport], seed: u64) -> Vec<SummaryRow> {
    let n = reports.len();
    let alg: Vec<f64> = reports.iter().map(|r| r.alg_weight).collect();
    let opt: Vec<f64> = reports.iter().map(|r| r.opt_weight).collect();
    let sum_opt: f64 = opt.iter().sum();
    let ratio = if sum_opt > 0.0 { alg.iter().sum::<f64>() / sum_opt } else { 0.0 };
    let row = |metric: &str, value: f64, (ci_lo, ci_hi): (f64, f64)| SummaryRow {
        suite: suite.into(),
        metric: metric.into(),
        value,
        ci_lo,
        ci_hi,
        n_trials: n,
        seed,
    };
    let count = |f: &dyn Fn(&TrialReport) -> bool| reports.iter().filter(|r| f(r)).count() as f64;
    let violations = count(&|r| r.violation);
    let dependent = count(&|r| !r.independent);
    vec![
        row("alg_mean", stats::mean(&alg), stats::bootstrap_mean(&alg, seed)),
        row("opt_mean", stats::mean(&opt), stats::bootstrap_mean(&opt, seed)),
        row("ratio", ratio, stats::bootstrap_ratio(&alg, &opt, seed)),
        row("violations", violations, (violations, violations)),
        row("dependent", dependent, (dependent, dependent)),
    ]
}

pub struct RatioEstimate {
    pub reports: Vec<TrialReport>,
    pub summary: Vec<SummaryRow>,
}

impl RatioEstimate {
    pub fn metric(&self, name: &str) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.metric == name)
    }
}

pub fn estimate_ratio(spec: &InstanceSpec) -> Result<RatioEstimate> {
    let reports = run_trials(spec)?;
    let summary = summarize("run", &reports, spec.seed);
    Ok(RatioEstimate { reports, summary })
}

pub fn reports_ndjson(reports: &[TrialReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out
}
