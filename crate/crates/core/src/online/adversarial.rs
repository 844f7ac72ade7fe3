use alloc::vec::Vec;

use rand::Rng;

use crate::error::Result;
use crate::good_curves::find_good_curves;
use crate::online::grp::chain_into;
use crate::online::osp::osp;
use crate::online::secretary::threshold_pick;
use crate::online::{subsample, ArrivalStream, Branch, Config, SelectionResult, Trace};
use crate::principal::rank_density_curve;
use crate::set::ElementSet;

fn max_weight(stream: &ArrivalStream<'_>, set: &ElementSet) -> Option<f64> {
    set.iter().map(|e| stream.weight(e)).reduce(f64::max)
}

/// The full algorithm when the non-sampled elements arrive in adversarial
/// order: one sampling phase at a probability chosen per branch, then the
/// stream's own order.
pub fn adversarial_sample_run<R: Rng + ?Sized>(
    stream: &ArrivalStream<'_>,
    cfg: &Config,
    rng: &mut R,
) -> Result<SelectionResult> {
    cfg.validate()?;
    let e = core::f64::consts::E;
    let mut trace = Trace::default();
    let branch = cfg.draw(&cfg.adversarial, rng);
    trace.branch = Some(branch);
    match branch {
        Branch::Secretary => {
            let sample = stream.sample(1.0 / e, rng)?;
            trace.sample_size = sample.len();
            threshold_pick(stream, max_weight(stream, &sample))?;
        }
        Branch::GrpSecretary => {
            let sample = stream.sample((e + 1.0) / (2.0 * e), rng)?;
            trace.sample_size = sample.len();
            let inner = subsample(&sample, 1.0 / (e + 1.0), rng);
            threshold_pick(stream, max_weight(stream, &inner))?;
        }
        Branch::Greedy => {
            let sample = stream.sample(0.5, rng)?;
            trace.sample_size = sample.len();
            let out = osp(stream, 1)?;
            trace.record_osp(&out);
        }
        Branch::Chain => {
            let sample = stream.sample(0.75, rng)?;
            trace.sample_size = sample.len();
            let curve_part = subsample(&sample, 2.0 / 3.0, rng);
            let chain_part = sample.difference(&curve_part);
            let approx = rank_density_curve(stream, &curve_part)?.downshift(cfg.downshift.0, cfg.downshift.1)?;
            let bundle = find_good_curves(&approx, cfg.alpha, cfg.beta)?;
            let split = rng.random_range(0..4);
            trace.split = Some(split);
            let grid: Vec<_> = bundle.splits[split].densities().collect();
            chain_into(stream, &chain_part, grid, cfg.beta, &mut trace)?;
        }
    }
    Ok(SelectionResult {
        selected: stream.selected(),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::int;
    use crate::fixtures;
    use crate::matroid::{MatroidExt, RankOracle};
    use crate::WeightProfile;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn threshold_branch_beats_sample_maximum() {
        let m = fixtures::uniform(30, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let weights: Vec<f64> = (0..30).map(f64::from).collect();
        for _ in 0..200 {
            let s = ArrivalStream::new(&m, weights.clone(), (0..30).collect()).unwrap();
            let out = adversarial_sample_run(&s, &Config::forced(Branch::Secretary), &mut rng).unwrap();
            let threshold = s.sampled().iter().map(|e| weights[e]).reduce(f64::max);
            let expected = (0..30).find(|&e| !s.sampled().contains(e) && threshold.is_none_or(|t| weights[e] > t));
            assert_eq!(out.selected.first(), expected);
        }
    }

    #[test]
    fn all_branches_safe_on_fig1() {
        let g = fixtures::fig1();
        let n = g.ground_size();
        let profile = WeightProfile::new((1..=n).map(|i| (i * i) as f64).collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for b in Branch::ALL {
            let mut cfg = Config::forced(b);
            cfg.alpha = int(24);
            cfg.beta = 3;
            cfg.downshift = (int(1), int(1));
            for _ in 0..30 {
                let s = ArrivalStream::random(&g, &profile, &mut rng).unwrap();
                let out = adversarial_sample_run(&s, &cfg, &mut rng).unwrap();
                assert!(g.is_independent(&out.selected));
                assert!(s.violation().is_none(), "{:?}", s.violation());
                assert_eq!(out.trace.branch, Some(b));
            }
        }
    }
}
