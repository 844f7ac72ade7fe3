//! Online selection procedures.
//!
//! Every procedure reads the instance only through an [`ArrivalStream`],
//! which enforces the online model: rank queries over revealed elements
//! only, selection only of the current arrival, and independence of the
//! selected set.

mod adversarial;
mod chain;
mod grp;
mod main_alg;
mod osp;
mod secretary;
mod stream;

use alloc::vec::Vec;

use rand::Rng;

use crate::curve::{int, Rational};
use crate::error::{invalid, Result};
use crate::set::ElementSet;

pub use adversarial::adversarial_sample_run;
pub use chain::{chain_cores, chain_decompose, check_grid, run_chain, ChainDecomposition, ChainOutcome, ChainRouter};
pub use grp::{aided_run, grp_run};
pub use main_alg::main_run;
pub use osp::{osp, Osp, OspOutcome};
pub use secretary::{classical_secretary, observation_len, threshold_pick, Secretary};
pub use stream::{assign_weights, random_order, ArrivalStream};

/// Branches of the randomized procedures.
///
/// In the aided procedure these are its three options; [`Branch::Secretary`]
/// is the outer classical-secretary option of the main algorithm. In the
/// adversarial-order variant they name the four options in the same way:
/// threshold secretary over `N`, threshold secretary inside the aided
/// branch, greedy OSP and the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Secretary,
    Chain,
    GrpSecretary,
    Greedy,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::Secretary, Branch::Chain, Branch::GrpSecretary, Branch::Greedy];

    pub fn name(self) -> &'static str {
        match self {
            Branch::Secretary => "secretary",
            Branch::Chain => "chain",
            Branch::GrpSecretary => "grp-secretary",
            Branch::Greedy => "greedy",
        }
    }

    pub fn parse(s: &str) -> Option<Branch> {
        Branch::ALL.into_iter().find(|b| b.name() == s)
    }
}

/// Constants and branch probabilities. Defaults are the published values.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Outer secretary option of the main algorithm.
    pub main_secretary: f64,
    /// Chain, secretary and greedy options of the aided procedure.
    pub grp: [(Branch, f64); 3],
    /// The four options of the adversarial-order variant.
    pub adversarial: [(Branch, f64); 4],
    pub sample_prob: f64,
    /// Downshift applied to the sample's curve.
    pub downshift: (Rational, Rational),
    pub alpha: Rational,
    pub beta: u64,
    /// Forces a branch everywhere a branch is drawn.
    pub force: Option<Branch>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            main_secretary: 0.5,
            grp: [
                (Branch::Chain, 12.0 / 15.0),
                (Branch::GrpSecretary, 2.0 / 15.0),
                (Branch::Greedy, 1.0 / 15.0),
            ],
            adversarial: [
                (Branch::Secretary, 1.0 / 2.0),
                (Branch::GrpSecretary, 1.0 / 15.0),
                (Branch::Greedy, 1.0 / 30.0),
                (Branch::Chain, 2.0 / 5.0),
            ],
            sample_prob: 0.5,
            downshift: (int(288), int(9)),
            alpha: int(288 * 288),
            beta: 81,
            force: None,
        }
    }
}

impl Config {
    pub fn forced(branch: Branch) -> Self {
        Config {
            force: Some(branch),
            ..Config::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let probs = |t: &[(Branch, f64)]| {
            let total: f64 = t.iter().map(|(_, p)| p).sum();
            t.iter().all(|(_, p)| (0.0..=1.0).contains(p)) && (total - 1.0).abs() < 1e-9
        };
        if !probs(&self.grp) || !probs(&self.adversarial) {
            return Err(invalid("branch probabilities must be in [0,1] and sum to 1"));
        }
        if !(0.0..=1.0).contains(&self.main_secretary) || !(0.0..=1.0).contains(&self.sample_prob) {
            return Err(invalid("probabilities must be in [0,1]"));
        }
        if self.downshift.0 < int(1) || self.downshift.1 < int(1) {
            return Err(invalid("downshift parameters must be at least 1"));
        }
        if self.alpha < int(24) || self.beta < 3 {
            return Err(invalid("need alpha >= 24 and beta >= 3"));
        }
        Ok(())
    }

    pub(crate) fn draw<R: Rng + ?Sized>(&self, table: &[(Branch, f64)], rng: &mut R) -> Branch {
        if let Some(b) = self.force {
            if table.iter().any(|(t, _)| *t == b) {
                return b;
            }
        }
        let x: f64 = rng.random();
        let mut acc = 0.0;
        for (b, p) in table {
            acc += p;
            if x < acc {
                return *b;
            }
        }
        table[table.len() - 1].0
    }
}

/// What a run did, for reports.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub branch: Option<Branch>,
    /// Split curve index (0-based) used by the aided procedure.
    pub split: Option<usize>,
    /// Elements revealed by sampling phases.
    pub sample_size: usize,
    /// Grid densities of the chain.
    pub grid: Vec<Rational>,
    /// Arrivals routed to each chain part.
    pub chain_routed: Vec<usize>,
    /// Picks of each OSP run, in selection order.
    pub osp_picks: Vec<Vec<usize>>,
    /// Completed secretary rounds of each OSP run.
    pub osp_rounds: Vec<usize>,
}

impl Trace {
    fn record_osp(&mut self, out: &OspOutcome) {
        self.osp_picks.push(out.picks.clone());
        self.osp_rounds.push(out.rounds);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub selected: ElementSet,
    pub trace: Trace,
}

/// Each element of `set` independently with probability `p`.
pub(crate) fn subsample<R: Rng + ?Sized>(set: &ElementSet, p: f64, rng: &mut R) -> ElementSet {
    let mut out = ElementSet::new(set.universe());
    for e in set.iter() {
        if rng.random_bool(p) {
            out.insert(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        Config::default().validate().unwrap();
        let mut c = Config::default();
        c.grp[0].1 = 0.9;
        assert!(c.validate().is_err());
    }

    #[test]
    fn branch_names_round_trip() {
        for b in Branch::ALL {
            assert_eq!(Branch::parse(b.name()), Some(b));
        }
        assert_eq!(Branch::parse("nope"), None);
    }
}
