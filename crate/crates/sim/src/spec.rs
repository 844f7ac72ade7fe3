//! Instance descriptions: where the matroid comes from, how weights are
//! drawn, how elements arrive and which constants the algorithm uses.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Pareto};
use ramsp_core::curve::int;
use ramsp_core::matroid::{Graphic, MatroidKind, Partition, Uniform};
use ramsp_core::online::{Branch, Config};
use ramsp_core::{fixtures, WeightProfile};
use serde::{Deserialize, Serialize};

use crate::io;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MatroidSource {
    /// `uniform:n,k`
    Uniform { n: usize, k: usize },
    /// `partition:10x2,20x5`: class sizes with capacities.
    Partition(Vec<(usize, usize)>),
    /// `graphic:path/to.edges`
    Graphic(PathBuf),
    /// `explicit:path/to.json`
    Explicit(PathBuf),
    /// `random-graphic:V,E[,seed]`: `E` distinct edges on `V` vertices.
    RandomGraphic { vertices: usize, edges: usize, seed: u64 },
    /// `fig1`
    Fig1,
    /// `parallel-basis:rank,copies`
    ParallelBasis { rank: usize, copies: usize },
}

fn nums<T: FromStr>(s: &str, want: usize) -> Result<Vec<T>> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| anyhow!("bad number {x:?}")))
        .collect::<Result<Vec<T>>>()?;
    if v.len() != want {
        bail!("expected {want} comma-separated values, got {}", v.len());
    }
    Ok(v)
}

impl FromStr for MatroidSource {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let src = match kind {
            "uniform" => {
                let v = nums(args, 2)?;
                MatroidSource::Uniform { n: v[0], k: v[1] }
            }
            "partition" => MatroidSource::Partition(
                args.split(',')
                    .map(|c| {
                        let (size, cap) = c.split_once('x').context("partition classes look like 10x2")?;
                        Ok((size.trim().parse()?, cap.trim().parse()?))
                    })
                    .collect::<Result<_>>()?,
            ),
            "graphic" if !args.is_empty() => MatroidSource::Graphic(args.into()),
            "explicit" if !args.is_empty() => MatroidSource::Explicit(args.into()),
            "random-graphic" => {
                let v: Vec<u64> = if args.matches(',').count() == 1 { nums(args, 2)? } else { nums(args, 3)? };
                MatroidSource::RandomGraphic {
                    vertices: v[0] as usize,
                    edges: v[1] as usize,
                    seed: v.get(2).copied().unwrap_or(0),
                }
            }
            "fig1" if args.is_empty() => MatroidSource::Fig1,
            "parallel-basis" => {
                let v = nums(args, 2)?;
                MatroidSource::ParallelBasis { rank: v[0], copies: v[1] }
            }
            _ => bail!("unknown matroid source {s:?}"),
        };
        Ok(src)
    }
}

impl TryFrom<String> for MatroidSource {
    type Error = anyhow::Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MatroidSource> for String {
    fn from(m: MatroidSource) -> String {
        m.to_string()
    }
}

impl fmt::Display for MatroidSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatroidSource::Uniform { n, k } => write!(f, "uniform:{n},{k}"),
            MatroidSource::Partition(classes) => {
                let parts: Vec<String> = classes.iter().map(|(s, c)| format!("{s}x{c}")).collect();
                write!(f, "partition:{}", parts.join(","))
            }
            MatroidSource::Graphic(p) => write!(f, "graphic:{}", p.display()),
            MatroidSource::Explicit(p) => write!(f, "explicit:{}", p.display()),
            MatroidSource::RandomGraphic { vertices, edges, seed } => {
                write!(f, "random-graphic:{vertices},{edges},{seed}")
            }
            MatroidSource::Fig1 => write!(f, "fig1"),
            MatroidSource::ParallelBasis { rank, copies } => write!(f, "parallel-basis:{rank},{copies}"),
        }
    }
}

/// `edges` distinct non-loop edges on `vertices` vertices, uniformly.
pub fn random_simple_graph<R: Rng + ?Sized>(vertices: usize, edges: usize, rng: &mut R) -> Result<Graphic> {
    let pairs = vertices * vertices.saturating_sub(1) / 2;
    if edges > pairs {
        bail!("{vertices} vertices have only {pairs} distinct edges, asked for {edges}");
    }
    let mut chosen = sample_indices(rng, pairs, edges).into_vec();
    chosen.sort_unstable();
    let mut all = Vec::with_capacity(edges);
    let mut idx = 0;
    let mut next = chosen.into_iter().peekable();
    'outer: for u in 0..vertices {
        for v in u + 1..vertices {
            if next.peek() == Some(&idx) {
                all.push((u, v));
                next.next();
                if next.peek().is_none() {
                    break 'outer;
                }
            }
            idx += 1;
        }
    }
    Ok(Graphic::new(vertices, all)?)
}

impl MatroidSource {
    pub fn build(&self) -> Result<MatroidKind> {
        Ok(match self {
            MatroidSource::Uniform { n, k } => Uniform::new(*n, *k)?.into(),
            MatroidSource::Partition(classes) => {
                let sizes: Vec<usize> = classes.iter().map(|c| c.0).collect();
                let caps: Vec<usize> = classes.iter().map(|c| c.1).collect();
                Partition::new(&sizes, &caps)?.into()
            }
            MatroidSource::Graphic(p) => io::read_edge_list(p)?.into(),
            MatroidSource::Explicit(p) => io::read_explicit(p)?.into(),
            MatroidSource::RandomGraphic { vertices, edges, seed } => {
                random_simple_graph(*vertices, *edges, &mut ChaCha8Rng::seed_from_u64(*seed))?.into()
            }
            MatroidSource::Fig1 => fixtures::fig1().into(),
            MatroidSource::ParallelBasis { rank, copies } => {
                if *rank == 0 || *copies == 0 {
                    bail!("parallel-basis needs positive rank and copies");
                }
                fixtures::parallel_basis(*rank, *copies)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum WeightModel {
    /// `constant[:c]`
    Constant(f64),
    /// `uniform[:lo,hi]`
    Uniform(f64, f64),
    /// `exp[:rate]`
    Exponential(f64),
    /// `single-heavy[:h]`: one weight `h` (default `n`), the rest 1.
    SingleHeavy(Option<f64>),
    /// `pareto[:shape]` with scale 1.
    Pareto(f64),
    /// `explicit:w1,w2,...`: the adversary's multiset; it may be longer than
    /// the ground set, in which case a uniform subset is used.
    Explicit(Vec<f64>),
}

impl FromStr for WeightModel {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let one = |default: f64| -> Result<f64> { args.map_or(Ok(default), |a| Ok(nums::<f64>(a, 1)?[0])) };
        let model = match kind {
            "constant" => WeightModel::Constant(one(1.0)?),
            "uniform" => match args {
                Some(a) => {
                    let v = nums::<f64>(a, 2)?;
                    WeightModel::Uniform(v[0], v[1])
                }
                None => WeightModel::Uniform(0.0, 1.0),
            },
            "exp" => WeightModel::Exponential(one(1.0)?),
            "single-heavy" => WeightModel::SingleHeavy(args.map(|a| nums::<f64>(a, 1).map(|v| v[0])).transpose()?),
            "pareto" => WeightModel::Pareto(one(2.0)?),
            "explicit" => {
                let a = args.context("explicit weights need a list")?;
                WeightModel::Explicit(a.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>()?)
            }
            _ => bail!("unknown weight model {s:?}"),
        };
        model.check()?;
        Ok(model)
    }
}

impl TryFrom<String> for WeightModel {
    type Error = anyhow::Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<WeightModel> for String {
    fn from(m: WeightModel) -> String {
        m.to_string()
    }
}

impl fmt::Display for WeightModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightModel::Constant(c) => write!(f, "constant:{c}"),
            WeightModel::Uniform(lo, hi) => write!(f, "uniform:{lo},{hi}"),
            WeightModel::Exponential(r) => write!(f, "exp:{r}"),
            WeightModel::SingleHeavy(None) => write!(f, "single-heavy"),
            WeightModel::SingleHeavy(Some(h)) => write!(f, "single-heavy:{h}"),
            WeightModel::Pareto(a) => write!(f, "pareto:{a}"),
            WeightModel::Explicit(w) => {
                let parts: Vec<String> = w.iter().map(f64::to_string).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

impl WeightModel {
    fn check(&self) -> Result<()> {
        let ok = match self {
            WeightModel::Constant(c) => *c >= 0.0,
            WeightModel::Uniform(lo, hi) => *lo >= 0.0 && lo <= hi,
            WeightModel::Exponential(r) => *r > 0.0,
            WeightModel::SingleHeavy(h) => h.is_none_or(|h| h >= 0.0),
            WeightModel::Pareto(a) => *a > 0.0,
            WeightModel::Explicit(w) => !w.is_empty() && w.iter().all(|x| *x >= 0.0),
        };
        if !ok {
            bail!("invalid weight model parameters: {self}");
        }
        Ok(())
    }

    /// The adversary's multiset for a ground set of size `n`.
    pub fn profile<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<WeightProfile> {
        self.check()?;
        let n = n.max(1);
        let w: Vec<f64> = match self {
            WeightModel::Constant(c) => vec![*c; n],
            WeightModel::Uniform(lo, hi) => (0..n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect(),
            WeightModel::Exponential(r) => {
                let d = Exp::new(*r)?;
                (0..n).map(|_| d.sample(rng)).collect()
            }
            WeightModel::SingleHeavy(h) => {
                let mut w = vec![1.0; n];
                w[0] = h.unwrap_or(n as f64);
                w
            }
            WeightModel::Pareto(a) => {
                let d = Pareto::new(1.0, *a)?;
                (0..n).map(|_| d.sample(rng)).collect()
            }
            WeightModel::Explicit(w) => {
                if w.len() < n {
                    bail!("explicit weight list has {} entries for {n} elements", w.len());
                }
                w.clone()
            }
        };
        Ok(WeightProfile::new(w)?)
    }

    /// Models whose profile does not depend on the random source.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, WeightModel::Constant(_) | WeightModel::SingleHeavy(_) | WeightModel::Explicit(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Arrival {
    /// Uniformly random order; runs the main algorithm.
    Random,
    /// A sampling phase, then the rest by increasing weight; runs the
    /// adversarial-order variant.
    Adversarial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Constants {
    pub alpha: u64,
    pub beta: u64,
    pub downshift: (u64, u64),
    /// Branch name: `secretary`, `chain`, `grp-secretary` or `greedy`.
    pub force: Option<String>,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            alpha: 288 * 288,
            beta: 81,
            downshift: (288, 9),
            force: None,
        }
    }
}

impl Constants {
    pub fn config(&self) -> Result<Config> {
        let mut cfg = Config {
            alpha: int(self.alpha.into()),
            beta: self.beta,
            downshift: (int(self.downshift.0.into()), int(self.downshift.1.into())),
            ..Config::default()
        };
        if let Some(name) = &self.force {
            cfg.force = Some(Branch::parse(name).with_context(|| format!("unknown branch {name:?}"))?);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn default_trials() -> usize {
    1000
}

fn default_arrival() -> Arrival {
    Arrival::Random
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub matroid: MatroidSource,
    pub weights: WeightModel,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_arrival")]
    pub arrival: Arrival,
    #[serde(default)]
    pub constants: Constants,
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        self.weights.check()?;
        self.constants.config()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: InstanceSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }
}
