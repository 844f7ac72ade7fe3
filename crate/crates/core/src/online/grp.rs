use alloc::vec::Vec;

use rand::Rng;

use crate::curve::{RankDensityCurve, Rational};
use crate::error::Result;
use crate::good_curves::find_good_curves;
use crate::online::chain::{check_grid, run_chain};
use crate::online::osp::osp;
use crate::online::secretary::classical_secretary;
use crate::online::{ArrivalStream, Branch, Config, SelectionResult, Trace};

pub(crate) fn grp_into<R: Rng + ?Sized>(
    stream: &ArrivalStream<'_>,
    curve: &RankDensityCurve,
    beta: u64,
    cfg: &Config,
    rng: &mut R,
    trace: &mut Trace,
) -> Result<()> {
    let grid: Vec<Rational> = curve.densities().collect();
    check_grid(&grid, beta)?;
    let branch = cfg.draw(&cfg.grp, rng);
    trace.branch = Some(branch);
    match branch {
        Branch::Chain => {
            let sample = stream.sample(cfg.sample_prob, rng)?;
            trace.sample_size += sample.len();
            chain_into(stream, &sample, grid, beta, trace)?;
        }
        Branch::Greedy => {
            let out = osp(stream, 1)?;
            trace.record_osp(&out);
        }
        Branch::GrpSecretary | Branch::Secretary => {
            classical_secretary(stream, stream.remaining())?;
        }
    }
    Ok(())
}

pub(crate) fn chain_into(
    stream: &ArrivalStream<'_>,
    sample: &crate::set::ElementSet,
    grid: Vec<Rational>,
    beta: u64,
    trace: &mut Trace,
) -> Result<()> {
    let out = run_chain(stream, sample, &grid, beta)?;
    trace.grid = grid;
    trace.chain_routed = out.routed;
    for o in &out.outcomes {
        trace.record_osp(o);
    }
    Ok(())
}

/// The procedure for a well-structured curve `ρ̄` on the remaining
/// arrivals: a chain of OSP runs, a classical secretary, or greedy.
pub fn grp_run<R: Rng + ?Sized>(
    stream: &ArrivalStream<'_>,
    curve: &RankDensityCurve,
    beta: u64,
    cfg: &Config,
    rng: &mut R,
) -> Result<SelectionResult> {
    let mut trace = Trace::default();
    grp_into(stream, curve, beta, cfg, rng, &mut trace)?;
    Ok(SelectionResult {
        selected: stream.selected(),
        trace,
    })
}

pub(crate) fn aided_into<R: Rng + ?Sized>(
    stream: &ArrivalStream<'_>,
    approx: &RankDensityCurve,
    alpha: Rational,
    beta: u64,
    cfg: &Config,
    rng: &mut R,
    trace: &mut Trace,
) -> Result<()> {
    let bundle = find_good_curves(approx, alpha, beta)?;
    let split = rng.random_range(0..4);
    trace.split = Some(split);
    grp_into(stream, &bundle.splits[split], beta, cfg, rng, trace)
}

/// Runs [`grp_run`] on one of the four conditioned curves built from the
/// approximation `approx`, chosen uniformly.
pub fn aided_run<R: Rng + ?Sized>(
    stream: &ArrivalStream<'_>,
    approx: &RankDensityCurve,
    alpha: Rational,
    beta: u64,
    cfg: &Config,
    rng: &mut R,
) -> Result<SelectionResult> {
    let mut trace = Trace::default();
    aided_into(stream, approx, alpha, beta, cfg, rng, &mut trace)?;
    Ok(SelectionResult {
        selected: stream.selected(),
        trace,
    })
}
