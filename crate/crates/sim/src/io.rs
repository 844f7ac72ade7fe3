//! File formats: edge lists, explicit matroids as JSON, curves as JSON and
//! CSV.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ramsp_core::matroid::{Explicit, Graphic};
use ramsp_core::{RankDensityCurve, Rational, Step};
use serde::{Deserialize, Serialize};

/// Parses an edge list: a header line `V E` followed by `E` lines `u v`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graphic> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().context("edge list is empty")?;
    let (v, e) = pair(header).context("header must be `V E`")?;
    let mut edges = Vec::with_capacity(e);
    for (no, line) in lines {
        edges.push(pair(line).with_context(|| format!("line {no}: expected `u v`"))?);
    }
    if edges.len() != e {
        bail!("header announces {e} edges, found {}", edges.len());
    }
    Ok(Graphic::new(v, edges)?)
}

fn pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next().context("missing field")?.parse()?;
    let b = it.next().context("missing field")?.parse()?;
    if it.next().is_some() {
        bail!("trailing fields");
    }
    Ok((a, b))
}

pub fn format_edge_list(g: &Graphic) -> String {
    let mut out = format!("{} {}\n", g.vertices(), g.edges().len());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<Graphic> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitFile {
    pub ground_size: usize,
    pub bases: Vec<Vec<usize>>,
}

impl ExplicitFile {
    pub fn build(&self) -> Result<Explicit> {
        Ok(Explicit::new(self.ground_size, &self.bases)?)
    }
}

pub fn read_explicit(path: &Path) -> Result<Explicit> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ExplicitFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.build()
}

/// One step of a curve with exact rationals written as `"p"` or `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub rank_end: String,
    pub density: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub steps: Vec<StepJson>,
}

impl CurveJson {
    pub fn from_curve(c: &RankDensityCurve) -> Self {
        CurveJson {
            steps: c
                .steps()
                .iter()
                .map(|s| StepJson {
                    rank_end: s.rank_end.to_string(),
                    density: s.density.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_curve(&self) -> Result<RankDensityCurve> {
        let steps = self
            .steps
            .iter()
            .map(|s| Ok(Step::new(parse_rational(&s.rank_end)?, parse_rational(&s.density)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(RankDensityCurve::new(steps)?)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let r: Rational = s.trim().parse().map_err(|_| anyhow::anyhow!("not a rational: {s:?}"))?;
    if *r.denom() == 0 {
        bail!("zero denominator in {s:?}");
    }
    Ok(r)
}

pub fn curve_to_json(c: &RankDensityCurve) -> String {
    serde_json::to_string(&CurveJson::from_curve(c)).expect("curve serializes")
}

pub fn curve_from_json(text: &str) -> Result<RankDensityCurve> {
    let file: CurveJson = serde_json::from_str(text)?;
    file.to_curve()
}

/// `(t, ρ(t))` at each breakpoint: the left end of every step and its right
/// end, so a plotting tool draws the staircase.
pub fn curve_to_csv(c: &RankDensityCurve) -> String {
    let mut out = String::from("t,rho\n");
    let mut start = Rational::from_integer(0);
    for s in c.steps() {
        let d = ramsp_core::curve::to_f64(s.density);
        let _ = writeln!(out, "{},{d}", ramsp_core::curve::to_f64(start));
        let _ = writeln!(out, "{},{d}", ramsp_core::curve::to_f64(s.rank_end));
        start = s.rank_end;
    }
    let _ = writeln!(out, "{},0", ramsp_core::curve::to_f64(start));
    out
}
