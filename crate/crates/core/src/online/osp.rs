use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::matroid::RankOracle;
use crate::online::secretary::Secretary;
use crate::online::ArrivalStream;
use crate::set::ElementSet;

/// The online selection procedure on `M / contract`, fed one arrival at a
/// time.
///
/// Each round runs a fresh secretary over the next `h` arrivals that are
/// individually addable to the picked set; a secretary pick is selected
/// immediately and joins the picked set when the round ends.
#[derive(Debug, Clone)]
pub struct Osp {
    h: usize,
    contract: ElementSet,
    contract_rank: usize,
    picked: ElementSet,
    pending: Option<usize>,
    secretary: Secretary,
    rounds: usize,
    picks: Vec<usize>,
}

impl Osp {
    /// `contract` must already be revealed.
    pub fn new(stream: &ArrivalStream<'_>, h: usize, contract: ElementSet) -> Result<Self> {
        if h == 0 {
            return Err(invalid("osp needs h >= 1"));
        }
        let contract_rank = stream.rank(&contract);
        Ok(Osp {
            h,
            picked: ElementSet::new(contract.universe()),
            contract,
            contract_rank,
            pending: None,
            secretary: Secretary::new(h),
            rounds: 0,
            picks: Vec::new(),
        })
    }

    fn addable(&self, stream: &ArrivalStream<'_>, e: usize) -> bool {
        let mut probe = self.picked.union(&self.contract);
        probe.insert(e);
        stream.rank(&probe) - self.contract_rank == self.picked.len() + 1
    }

    /// Handles the current arrival `e` of weight `w`.
    pub fn offer(&mut self, stream: &ArrivalStream<'_>, e: usize, w: f64) -> Result<()> {
        if !self.addable(stream, e) {
            return Ok(());
        }
        if self.secretary.feed(w) {
            stream.select(e)?;
            self.pending = Some(e);
            self.picks.push(e);
        }
        if self.secretary.is_full() {
            self.rounds += 1;
            self.close_round();
        }
        Ok(())
    }

    fn close_round(&mut self) {
        if let Some(e) = self.pending.take() {
            self.picked.insert(e);
        }
        self.secretary = Secretary::new(self.h);
    }

    /// Ends the stream; a pick from an unfinished round is kept.
    pub fn finish(mut self) -> OspOutcome {
        self.close_round();
        OspOutcome {
            selected: self.picked,
            rounds: self.rounds,
            picks: self.picks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OspOutcome {
    pub selected: ElementSet,
    /// Rounds in which the secretary was fed all `h` elements.
    pub rounds: usize,
    /// Picks in selection order.
    pub picks: Vec<usize>,
}

/// Runs the procedure over every remaining arrival of the stream.
pub fn osp(stream: &ArrivalStream<'_>, h: usize) -> Result<OspOutcome> {
    let mut proc = Osp::new(stream, h, ElementSet::new(stream.ground_size()))?;
    while let Some((e, w)) = stream.next_arrival() {
        proc.offer(stream, e, w)?;
    }
    Ok(proc.finish())
}
