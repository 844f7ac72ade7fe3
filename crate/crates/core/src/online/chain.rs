use alloc::format;
use alloc::vec::Vec;

use num_traits::One;

use crate::curve::Rational;
use crate::error::{invalid, Result};
use crate::good_curves::is_power_of;
use crate::matroid::{span, MinorView, RankOracle};
use crate::online::osp::{Osp, OspOutcome};
use crate::online::ArrivalStream;
use crate::principal::densest_set;
use crate::set::ElementSet;

/// Grid densities must be powers of `beta ≥ 3` (including `β⁰ = 1`) in
/// strictly decreasing order.
pub fn check_grid(grid: &[Rational], beta: u64) -> Result<()> {
    if beta < 3 {
        return Err(invalid(format!("beta must be an integer >= 3, got {beta}")));
    }
    for d in grid {
        if !is_power_of(*d, beta) {
            return Err(invalid(format!("grid density {d} is not a power of {beta}")));
        }
    }
    if grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(invalid("grid densities must strictly decrease"));
    }
    Ok(())
}

/// Dense cores `D(S, λ̄_i/β)`, nested increasingly.
pub fn chain_cores<O: RankOracle + ?Sized>(
    oracle: &O,
    sample: &ElementSet,
    grid: &[Rational],
    beta: u64,
) -> Result<Vec<ElementSet>> {
    check_grid(grid, beta)?;
    let b = Rational::from_integer(beta as i128);
    grid.iter().map(|l| densest_set(oracle, sample, *l / b)).collect()
}

/// The minors carved out of `N ∖ S` by the spans of the sample's dense
/// cores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub sample: ElementSet,
    pub grid: Vec<Rational>,
    /// `D(S, λ̄_i/β)`.
    pub cores: Vec<ElementSet>,
    /// `span(D(S, λ̄_{i−1}/β))`, empty for the first part.
    pub contractions: Vec<ElementSet>,
    /// `N_i`.
    pub parts: Vec<ElementSet>,
}

impl ChainDecomposition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `M_i = (M / span(D_{i−1})) | N_i`.
    pub fn minor<'a>(&self, oracle: &'a dyn RankOracle, i: usize) -> Result<MinorView<'a>> {
        MinorView::new(oracle, &self.contractions[i], &self.parts[i])
    }
}

/// Offline construction with full access to the matroid.
pub fn chain_decompose<O: RankOracle + ?Sized>(
    oracle: &O,
    sample: &ElementSet,
    grid: &[Rational],
    beta: u64,
) -> Result<ChainDecomposition> {
    let cores = chain_cores(oracle, sample, grid, beta)?;
    let mut contractions = Vec::with_capacity(cores.len());
    let mut parts = Vec::with_capacity(cores.len());
    let mut prev = ElementSet::new(sample.universe());
    for core in &cores {
        let sp = span(oracle, core)?;
        parts.push(sp.difference(sample).difference(&prev));
        contractions.push(prev);
        prev = sp;
    }
    Ok(ChainDecomposition {
        sample: sample.clone(),
        grid: grid.to_vec(),
        cores,
        contractions,
        parts,
    })
}

/// Parallel OSP runs over the chain sharing one pass of the stream. Each
/// arrival goes to the first part whose core spans it.
#[derive(Debug)]
pub struct ChainRouter {
    cores: Vec<ElementSet>,
    core_ranks: Vec<usize>,
    osps: Vec<Osp>,
    routed: Vec<usize>,
}

impl ChainRouter {
    /// The sample must be revealed already.
    pub fn new(stream: &ArrivalStream<'_>, sample: &ElementSet, grid: &[Rational], beta: u64) -> Result<Self> {
        let cores = chain_cores(stream, sample, grid, beta)?;
        let core_ranks = cores.iter().map(|c| stream.rank(c)).collect();
        let mut osps = Vec::with_capacity(cores.len());
        let mut prev = ElementSet::new(sample.universe());
        for (core, lambda) in cores.iter().zip(grid) {
            let h = usize::try_from(lambda.to_integer()).map_err(|_| invalid("grid density too large"))?;
            debug_assert!(lambda.is_integer() && *lambda >= Rational::one());
            osps.push(Osp::new(stream, h, prev)?);
            prev = core.clone();
        }
        Ok(ChainRouter {
            routed: alloc::vec![0; cores.len()],
            cores,
            core_ranks,
            osps,
        })
    }

    /// Part index for the current arrival, if any.
    pub fn route(&self, stream: &ArrivalStream<'_>, e: usize) -> Option<usize> {
        (0..self.cores.len()).find(|&i| stream.rank(&self.cores[i].with(e)) == self.core_ranks[i])
    }

    pub fn offer(&mut self, stream: &ArrivalStream<'_>, e: usize, w: f64) -> Result<()> {
        if let Some(i) = self.route(stream, e) {
            self.routed[i] += 1;
            self.osps[i].offer(stream, e, w)?;
        }
        Ok(())
    }

    pub fn finish(self) -> ChainOutcome {
        let outcomes: Vec<OspOutcome> = self.osps.into_iter().map(Osp::finish).collect();
        let mut selected = ElementSet::new(self.cores.first().map_or(0, ElementSet::universe));
        for o in &outcomes {
            selected.union_with(&o.selected);
        }
        ChainOutcome {
            selected,
            routed: self.routed,
            outcomes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainOutcome {
    pub selected: ElementSet,
    /// Arrivals routed to each part.
    pub routed: Vec<usize>,
    pub outcomes: Vec<OspOutcome>,
}

/// Runs the chain over every remaining arrival.
pub fn run_chain(stream: &ArrivalStream<'_>, sample: &ElementSet, grid: &[Rational], beta: u64) -> Result<ChainOutcome> {
    let mut router = ChainRouter::new(stream, sample, grid, beta)?;
    if grid.is_empty() {
        return Ok(ChainOutcome {
            selected: ElementSet::new(stream.ground_size()),
            routed: Vec::new(),
            outcomes: Vec::new(),
        });
    }
    while let Some((e, w)) = stream.next_arrival() {
        router.offer(stream, e, w)?;
    }
    Ok(router.finish())
}
