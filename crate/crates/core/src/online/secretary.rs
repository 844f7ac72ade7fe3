use crate::error::Result;
use crate::online::ArrivalStream;

/// Length of the observation phase for `horizon` elements: `⌊horizon/e⌋`.
pub fn observation_len(horizon: usize) -> usize {
    libm::floor(horizon as f64 / core::f64::consts::E) as usize
}

/// Dynkin's rule as a state machine fed one weight at a time.
///
/// The first `⌊h/e⌋` weights are only observed; afterwards the first weight
/// strictly above every observed one is picked. Ties therefore favour the
/// earlier element.
#[derive(Debug, Clone)]
pub struct Secretary {
    horizon: usize,
    observe: usize,
    seen: usize,
    threshold: f64,
    picked: bool,
}

impl Secretary {
    pub fn new(horizon: usize) -> Self {
        Secretary {
            horizon,
            observe: observation_len(horizon),
            seen: 0,
            threshold: f64::NEG_INFINITY,
            picked: false,
        }
    }

    /// Feeds the next weight; returns whether it is picked.
    pub fn feed(&mut self, w: f64) -> bool {
        if self.seen >= self.horizon {
            return false;
        }
        self.seen += 1;
        if self.picked {
            return false;
        }
        if self.seen <= self.observe {
            self.threshold = self.threshold.max(w);
            return false;
        }
        if w > self.threshold {
            self.picked = true;
            return true;
        }
        false
    }

    pub fn fed(&self) -> usize {
        self.seen
    }

    pub fn is_full(&self) -> bool {
        self.seen >= self.horizon
    }

    pub fn has_picked(&self) -> bool {
        self.picked
    }
}

/// Runs Dynkin's rule over the next `horizon` arrivals of the stream and
/// selects its pick.
pub fn classical_secretary(stream: &ArrivalStream<'_>, horizon: usize) -> Result<Option<usize>> {
    let mut sec = Secretary::new(horizon);
    while !sec.is_full() {
        let Some((e, w)) = stream.next_arrival() else { break };
        if sec.feed(w) {
            stream.select(e)?;
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Threshold rule: selects the first arrival whose weight strictly exceeds
/// `threshold` (every arrival when it is `None`).
pub fn threshold_pick(stream: &ArrivalStream<'_>, threshold: Option<f64>) -> Result<Option<usize>> {
    while let Some((e, w)) = stream.next_arrival() {
        if threshold.is_none_or(|t| w > t) {
            stream.select(e)?;
            return Ok(Some(e));
        }
    }
    Ok(None)
}
