//! The `ramsp` command line. Exit codes: 0 success, 1 a check or trial
//! failed, 2 bad usage or unreadable input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ramsp_core::matroid::MatroidKind;
use ramsp_core::principal::rank_density_curve;
use ramsp_core::{MatroidExt, RankDensityCurve};

use crate::harness::{self, summary_csv, SummaryRow};
use crate::io;
use crate::spec::{Arrival, Constants, InstanceSpec, MatroidSource, WeightModel};
use crate::suite::{self, VerifyOptions};
use crate::checks;

#[derive(Debug, Parser)]
#[command(name = "ramsp", version, about = "Random-assignment matroid secretary experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the rank-density curve of a matroid as JSON.
    Curve(CurveArgs),
    /// Print the (alpha, beta)-downshift of a curve as JSON.
    Downshift(DownshiftArgs),
    /// Run the online algorithm on random trials of one instance.
    Run(RunArgs),
    /// Run the verification suites and print a summary CSV.
    Verify(VerifyArgs),
    /// Compare densest sets and union ranks with exhaustive search.
    OracleDiff(OracleDiffArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct MatroidInput {
    /// Edge list file (`V E` header, then `u v` lines).
    #[arg(long, value_name = "FILE")]
    graphic: Option<PathBuf>,
    /// Matroid source, e.g. `uniform:200,50`, `fig1`, `explicit:m.json`.
    #[arg(long, value_name = "SOURCE")]
    matroid: Option<MatroidSource>,
}

impl MatroidInput {
    fn build(&self) -> Result<MatroidKind> {
        match (&self.graphic, &self.matroid) {
            (Some(p), _) => Ok(io::read_edge_list(p)?.into()),
            (_, Some(src)) => src.build(),
            _ => bail!("give --graphic or --matroid"),
        }
    }
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[command(flatten)]
    input: MatroidInput,
    /// Also write `(t, rho(t))` breakpoints as CSV.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DownshiftArgs {
    /// Curve JSON file; otherwise the curve of the given matroid.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["graphic", "matroid"])]
    curve: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    graphic: Option<PathBuf>,
    #[arg(long, value_name = "SOURCE")]
    matroid: Option<MatroidSource>,
    #[arg(long, default_value = "288")]
    alpha: String,
    #[arg(long, default_value = "9")]
    beta: String,
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON instance spec; replaces the instance flags.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["matroid", "graphic", "weights"])]
    config: Option<PathBuf>,
    #[arg(long, value_name = "SOURCE")]
    matroid: Option<MatroidSource>,
    #[arg(long, value_name = "FILE")]
    graphic: Option<PathBuf>,
    /// constant[:c], uniform[:lo,hi], exp[:rate], single-heavy[:h], pareto[:a], explicit:w1,w2,...
    #[arg(long, value_name = "MODEL")]
    weights: Option<WeightModel>,
    #[arg(long, value_enum, default_value = "random")]
    arrival: Arrival,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Force a branch: secretary, chain, grp-secretary or greedy.
    #[arg(long)]
    force: Option<String>,
    #[arg(long)]
    alpha: Option<u64>,
    #[arg(long)]
    beta: Option<u64>,
    /// Downshift pair `a,b` applied to the sample's curve.
    #[arg(long, value_name = "A,B")]
    downshift: Option<String>,
    /// Write per-trial JSON lines here instead of stdout.
    #[arg(long, value_name = "FILE")]
    reports: Option<PathBuf>,
    /// Write the summary CSV here instead of stderr.
    #[arg(long, value_name = "FILE")]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// all, good-event, concentration, opt-vs-f, osp, good-sample or safety.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override every suite's trial count.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleDiffArgs {
    /// Random (matroid, S, lambda) triples for the densest-set comparison.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Random matroids whose every subset is checked for union rank.
    #[arg(long, default_value_t = 50)]
    matroids: usize,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    #[arg(long, default_value_t = 4)]
    max_h: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Ok,
    Failed,
}

fn write_to(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn curve_cmd(args: &CurveArgs, out: &mut dyn Write) -> Result<Status> {
    let m = args.input.build()?;
    let curve = rank_density_curve(&m, &m.ground())?;
    emit_curve(&curve, args.csv.as_deref(), out)
}

fn emit_curve(curve: &RankDensityCurve, csv: Option<&Path>, out: &mut dyn Write) -> Result<Status> {
    writeln!(out, "{}", io::curve_to_json(curve))?;
    if let Some(p) = csv {
        write_to(p, &io::curve_to_csv(curve))?;
    }
    Ok(Status::Ok)
}

fn downshift_cmd(args: &DownshiftArgs, out: &mut dyn Write) -> Result<Status> {
    let curve = if let Some(p) = &args.curve {
        io::curve_from_json(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?
    } else {
        let input = MatroidInput {
            graphic: args.graphic.clone(),
            matroid: args.matroid.clone(),
        };
        let m = input.build()?;
        rank_density_curve(&m, &m.ground())?
    };
    let shifted = curve.downshift(io::parse_rational(&args.alpha)?, io::parse_rational(&args.beta)?)?;
    emit_curve(&shifted, args.csv.as_deref(), out)
}

fn run_spec(args: &RunArgs) -> Result<InstanceSpec> {
    if let Some(p) = &args.config {
        return InstanceSpec::from_json(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?);
    }
    let matroid = match (&args.matroid, &args.graphic) {
        (Some(m), None) => m.clone(),
        (None, Some(p)) => MatroidSource::Graphic(p.clone()),
        _ => bail!("give exactly one of --matroid, --graphic or --config"),
    };
    let mut constants = Constants::default();
    if let Some(a) = args.alpha {
        constants.alpha = a;
    }
    if let Some(b) = args.beta {
        constants.beta = b;
    }
    if let Some(d) = &args.downshift {
        let (a, b) = d.split_once(',').context("--downshift takes A,B")?;
        constants.downshift = (a.trim().parse()?, b.trim().parse()?);
    }
    constants.force = args.force.clone();
    let spec = InstanceSpec {
        matroid,
        weights: args.weights.clone().context("--weights is required without --config")?,
        trials: args.trials,
        seed: args.seed,
        arrival: args.arrival,
        constants,
    };
    spec.validate()?;
    Ok(spec)
}

fn run_cmd(args: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Result<Status>> {
    let spec = run_spec(args)?;
    spec.matroid.build()?;
    // failures after this point are runtime failures, not usage errors
    Ok((|| {
        let est = harness::estimate_ratio(&spec)?;
        let lines = harness::reports_ndjson(&est.reports);
        match &args.reports {
            Some(p) => write_to(p, &lines)?,
            None => out.write_all(lines.as_bytes())?,
        }
        let csv = summary_csv(&est.summary);
        match &args.summary {
            Some(p) => write_to(p, &csv)?,
            None => err.write_all(csv.as_bytes())?,
        }
        let bad = est.reports.iter().filter(|r| r.violation || !r.independent).count();
        if bad > 0 {
            writeln!(err, "{bad} trials returned a dependent set or broke the online protocol")?;
            return Ok(Status::Failed);
        }
        Ok(Status::Ok)
    })())
}

fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Result<Status>> {
    if args.suite != "all" && !suite::SUITES.contains(&args.suite.as_str()) {
        bail!("unknown suite {:?}; expected all or one of {}", args.suite, suite::SUITES.join(", "));
    }
    if args.trials == Some(0) {
        bail!("--trials must be at least 1");
    }
    let opts = VerifyOptions {
        seed: args.seed,
        trials: args.trials,
    };
    Ok((|| {
        let outcome = suite::run_suite(&args.suite, &opts)?;
        let csv = summary_csv(&outcome.rows);
        match &args.out {
            Some(p) => write_to(p, &csv)?,
            None => out.write_all(csv.as_bytes())?,
        }
        for f in &outcome.failures {
            writeln!(err, "FAIL {f}")?;
        }
        Ok(if outcome.passed() { Status::Ok } else { Status::Failed })
    })())
}

fn oracle_diff_cmd(args: &OracleDiffArgs, out: &mut dyn Write) -> Result<Status> {
    if args.max_n == 0 || args.max_n > 16 || args.max_h == 0 {
        bail!("--max-n must be in 1..=16 and --max-h at least 1");
    }
    let densest = checks::oracle_diff(args.trials, args.max_n, args.seed)?;
    let (checked, union) = checks::nash_williams_diff(args.matroids, args.max_n.min(10), args.max_h, args.seed)?;
    let row = |metric: &str, value: usize, n: usize| SummaryRow {
        suite: "oracle-diff".into(),
        metric: metric.into(),
        value: value as f64,
        ci_lo: value as f64,
        ci_hi: value as f64,
        n_trials: n,
        seed: args.seed,
    };
    let rows = [row("densest_mismatches", densest, args.trials), row("union_rank_mismatches", union, checked)];
    out.write_all(summary_csv(&rows).as_bytes())?;
    Ok(if densest == 0 && union == 0 { Status::Ok } else { Status::Failed })
}

/// Runs the command line with explicit output streams and returns the
/// exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Curve(a) => curve_cmd(a, out).map(Ok),
        Command::Downshift(a) => downshift_cmd(a, out).map(Ok),
        Command::Run(a) => run_cmd(a, out, err),
        Command::Verify(a) => verify_cmd(a, out, err),
        Command::OracleDiff(a) => oracle_diff_cmd(a, out).map(Ok),
    };
    match result {
        Ok(Ok(Status::Ok)) => 0,
        Ok(Ok(Status::Failed)) => 1,
        Ok(Err(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

pub fn cli_main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
