use rand::Rng;

use crate::error::Result;
use crate::online::grp::aided_into;
use crate::online::secretary::classical_secretary;
use crate::online::{ArrivalStream, Branch, Config, SelectionResult, Trace};
use crate::principal::rank_density_curve;

/// The full algorithm under random arrival order.
///
/// With probability `cfg.main_secretary` it runs the classical secretary on
/// every element. Otherwise it samples, downshifts the sample's
/// rank-density curve and runs the aided procedure on the rest.
pub fn main_run<R: Rng + ?Sized>(stream: &ArrivalStream<'_>, cfg: &Config, rng: &mut R) -> Result<SelectionResult> {
    cfg.validate()?;
    let mut trace = Trace::default();
    let secretary = match cfg.force {
        Some(b) => b == Branch::Secretary,
        None => rng.random_bool(cfg.main_secretary),
    };
    if secretary {
        trace.branch = Some(Branch::Secretary);
        classical_secretary(stream, stream.remaining())?;
    } else {
        let sample = stream.sample(cfg.sample_prob, rng)?;
        trace.sample_size += sample.len();
        let approx = rank_density_curve(stream, &sample)?.downshift(cfg.downshift.0, cfg.downshift.1)?;
        aided_into(stream, &approx, cfg.alpha, cfg.beta, cfg, rng, &mut trace)?;
    }
    Ok(SelectionResult {
        selected: stream.selected(),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matroid::{MatroidExt, RankOracle};
    use crate::WeightProfile;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_element_picked_by_secretary() {
        let m = fixtures::uniform(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits = 0;
        for _ in 0..400 {
            let s = ArrivalStream::new(&m, vec![2.0], vec![0]).unwrap();
            if !main_run(&s, &Config::default(), &mut rng).unwrap().selected.is_empty() {
                hits += 1;
            }
        }
        assert!(hits >= 170, "{hits}");
        let s = ArrivalStream::new(&m, vec![2.0], vec![0]).unwrap();
        let out = main_run(&s, &Config::forced(Branch::Secretary), &mut rng).unwrap();
        assert_eq!(out.selected.to_vec(), vec![0]);
    }

    #[test]
    fn every_forced_branch_is_safe() {
        let g = fixtures::fig1();
        let n = g.ground_size();
        let profile = WeightProfile::new((1..=n).map(|i| i as f64).collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for b in Branch::ALL {
            let mut cfg = Config::forced(b);
            cfg.alpha = crate::curve::int(24);
            cfg.beta = 3;
            cfg.downshift = (crate::curve::int(1), crate::curve::int(1));
            for _ in 0..30 {
                let s = ArrivalStream::random(&g, &profile, &mut rng).unwrap();
                let out = main_run(&s, &cfg, &mut rng).unwrap();
                assert!(g.is_independent(&out.selected));
                assert!(s.violation().is_none(), "{:?}", s.violation());
            }
        }
    }
}
