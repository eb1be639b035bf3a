//! CSV and JSON writers for solver, simulation and report outputs.
//!
//! Numbers are written with 17 significant digits, which round-trips any
//! `f64` exactly. Files use UTF-8, LF line ends and `.` as decimal mark.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::{spin_up_prob, Angle, GameParams, Prior, RoundDecision};
use crate::policy::PolicySpec;
use crate::report::{ContourLine, ContourSegment, HeatMapGrid};
use crate::scalar::Scalar;
use crate::sim::{Batch, ComparisonRow, Trajectory};
use crate::solver::{ValueCurve, ValueStack};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const VALUE_CURVE_HEADER: [&str; 4] = ["step", "xi", "g_value", "alpha_star_rad"];
pub const POLICY_HEADER: [&str; 6] = ["step", "xi", "alpha_star_rad", "p_up", "fraction", "bet_on"];
pub const CONTOUR_HEADER: [&str; 4] = ["xi", "wealth", "utility_level", "step"];
pub const TRAJECTORY_HEADER: [&str; 7] = ["round", "alpha_rad", "fraction", "bet_on", "outcome", "posterior", "wealth"];
pub const HEATMAP_CORNER: &str = "W\\xi";

/// Formats with 17 significant digits.
pub fn fmt_num<T: Scalar>(x: T) -> String {
    format!("{:.16e}", x.to_f64_lossy())
}

fn parse_num<T: Scalar>(s: &str) -> Result<T> {
    s.trim()
        .parse::<f64>()
        .map(T::lit)
        .map_err(|e| Error::Parse(format!("'{s}': {e}")))
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

pub fn write_json<S: Serialize + ?Sized>(value: &S, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// All value curves of a stack, step by step.
pub fn write_value_curves<T: Scalar>(stack: &ValueStack<T>, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(VALUE_CURVE_HEADER)?;
    for curve in stack.curves() {
        for (i, (&xi, &g)) in curve.xi_nodes.iter().zip(&curve.g_values).enumerate() {
            let alpha = curve.alpha_policy.as_ref().map_or(String::new(), |a| fmt_num(a[i].radians()));
            w.write_record([curve.step.to_string(), fmt_num(xi), fmt_num(g), alpha])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a file written by [`write_value_curves`]. An empty `alpha_star_rad`
/// column for a whole step means no policy at that step.
pub fn read_value_curves<T: Scalar>(path: &Path) -> Result<Vec<ValueCurve<T>>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != VALUE_CURVE_HEADER {
        return Err(Error::Parse(format!("unexpected value-curve header {header:?}")));
    }
    let mut curves: Vec<(ValueCurve<T>, Vec<Option<Angle<T>>>)> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let step: usize = rec[0].parse().map_err(|e| Error::Parse(format!("step '{}': {e}", &rec[0])))?;
        let alpha = match rec[3].trim() {
            "" => None,
            s => Some(Angle::new(parse_num(s)?)),
        };
        if curves.last().is_none_or(|(c, _)| c.step != step) {
            curves.push((ValueCurve { step, xi_nodes: Vec::new(), g_values: Vec::new(), alpha_policy: None }, Vec::new()));
        }
        let (curve, alphas) = curves.last_mut().expect("curve pushed above");
        curve.xi_nodes.push(parse_num(&rec[1])?);
        curve.g_values.push(parse_num(&rec[2])?);
        alphas.push(alpha);
    }
    Ok(curves
        .into_iter()
        .map(|(mut curve, alphas)| {
            curve.alpha_policy = alphas.into_iter().collect();
            curve
        })
        .collect())
}

fn decision_row<T: Scalar>(step: usize, xi: T, d: &RoundDecision<T>, p_up: T) -> [String; 6] {
    [
        step.to_string(),
        fmt_num(xi),
        fmt_num(d.alpha.radians()),
        fmt_num(p_up),
        fmt_num(d.fraction),
        d.bet_on.as_str().to_owned(),
    ]
}

/// Optimal action at every prior node of every non-terminal step.
pub fn write_policy_table<T: Scalar>(stack: &ValueStack<T>, path: &Path) -> Result<()> {
    let delta = stack.params().delta;
    let mut w = writer(path)?;
    w.write_record(POLICY_HEADER)?;
    for curve in &stack.curves()[..stack.n_steps()] {
        let alphas = curve.alpha_policy.as_ref().ok_or(Error::UnsolvablePolicy)?;
        for (&xi, &alpha) in curve.xi_nodes.iter().zip(alphas) {
            let prior = Prior::clamped(xi);
            let p_up = spin_up_prob(prior, alpha, delta);
            let d = RoundDecision::kelly(alpha, p_up);
            w.write_record(decision_row(curve.step, xi, &d, p_up))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Any policy tabulated on the prior nodes of `grid`.
pub fn write_policy_decisions<T: Scalar>(
    params: &GameParams<T>,
    policy: &PolicySpec<T>,
    grid: &GridSpec<T>,
    path: &Path,
) -> Result<()> {
    policy.check(params)?;
    let nodes = grid.xi_nodes();
    let mut w = writer(path)?;
    w.write_record(POLICY_HEADER)?;
    for k in 0..params.n_steps {
        for &xi in &nodes {
            let prior = Prior::clamped(xi);
            let d = policy.decide(params, k, prior)?;
            let p_up = spin_up_prob(prior, d.alpha, params.delta);
            w.write_record(decision_row(k, xi, &d, p_up))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One or more contour lines in a single table.
pub fn write_contours<T: Scalar>(lines: &[ContourLine<T>], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(CONTOUR_HEADER)?;
    for line in lines {
        for p in &line.points {
            w.write_record([fmt_num(p.xi), fmt_num(p.wealth), fmt_num(line.level), line.step.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_contour<T: Scalar>(line: &ContourLine<T>, path: &Path) -> Result<()> {
    write_contours(std::slice::from_ref(line), path)
}

/// Marching-squares segments, one per row.
pub fn write_contour_segments<T: Scalar>(segments: &[ContourSegment<T>], level: T, step: usize, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["xi_a", "wealth_a", "xi_b", "wealth_b", "utility_level", "step"])?;
    for s in segments {
        w.write_record([
            fmt_num(s.a.xi),
            fmt_num(s.a.wealth),
            fmt_num(s.b.xi),
            fmt_num(s.b.wealth),
            fmt_num(level),
            step.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Header row of priors, then one row per wealth node led by its wealth.
pub fn write_heatmap<T: Scalar>(grid: &HeatMapGrid<T>, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    let header = std::iter::once(HEATMAP_CORNER.to_owned()).chain(grid.xi_axis.iter().map(|&x| fmt_num(x)));
    w.write_record(header)?;
    for (&wealth, row) in grid.w_axis.iter().zip(&grid.values) {
        w.write_record(std::iter::once(fmt_num(wealth)).chain(row.iter().map(|&v| fmt_num(v))))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectory<T: Scalar>(traj: &Trajectory<T>, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(TRAJECTORY_HEADER)?;
    for (i, r) in traj.rounds.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            fmt_num(r.decision.alpha.radians()),
            fmt_num(r.decision.fraction),
            r.decision.bet_on.as_str().to_owned(),
            r.outcome.as_str().to_owned(),
            fmt_num(r.posterior.value()),
            fmt_num(r.wealth.value()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Summary statistics of a batch as stored in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchStatsRecord {
    pub policy: String,
    pub n_runs: usize,
    pub base_seed: u64,
    pub mean_log2_growth: f64,
    pub std_log2_growth: f64,
    pub stderr_log2_growth: f64,
    pub mean_final_xi_error: f64,
}

impl BatchStatsRecord {
    pub fn from_batch<T: Scalar>(batch: &Batch<T>, base_seed: u64) -> Self {
        let s = &batch.stats;
        BatchStatsRecord {
            policy: batch.policy.clone(),
            n_runs: s.n_runs,
            base_seed,
            mean_log2_growth: s.mean_log2_growth.to_f64_lossy(),
            std_log2_growth: s.std_log2_growth.to_f64_lossy(),
            stderr_log2_growth: s.stderr_log2_growth.to_f64_lossy(),
            mean_final_xi_error: s.mean_final_xi_error.to_f64_lossy(),
        }
    }
}

/// One CSV row per run plus the statistics as JSON.
pub fn write_batch<T: Scalar>(batch: &Batch<T>, base_seed: u64, csv_path: &Path, stats_path: &Path) -> Result<()> {
    let mut w = writer(csv_path)?;
    w.write_record(["run", "seed", "true_state", "final_wealth", "log2_growth", "final_posterior", "outcomes"])?;
    for (i, r) in batch.runs.iter().enumerate() {
        w.write_record([
            i.to_string(),
            r.seed.to_string(),
            r.true_state.as_str().to_owned(),
            fmt_num(r.final_wealth),
            fmt_num(r.log2_growth),
            fmt_num(r.final_posterior),
            r.outcomes.clone(),
        ])?;
    }
    w.flush()?;
    write_json(&BatchStatsRecord::from_batch(batch, base_seed), stats_path)
}

pub fn write_comparison<T: Scalar>(rows: &[ComparisonRow<T>], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["policy", "exact_log2_growth", "mc_mean_log2_growth", "mc_stderr"])?;
    for r in rows {
        w.write_record([
            r.policy.clone(),
            r.exact.map_or(String::new(), fmt_num),
            fmt_num(r.mc_mean),
            fmt_num(r.mc_stderr),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Description of an export directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub delta_deg: f64,
    pub n_steps: usize,
    pub xi0: f64,
    pub grid: GridSpec<f64>,
    pub solver_mode: String,
    pub tool_version: String,
    /// File name to short description.
    #[serde(default)]
    pub files: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl Manifest {
    pub fn new<T: Scalar>(params: &GameParams<T>, grid: &GridSpec<T>, solver_mode: &str) -> Self {
        Manifest {
            delta_deg: params.delta.degrees().to_f64_lossy(),
            n_steps: params.n_steps,
            xi0: params.xi0.value().to_f64_lossy(),
            grid: grid.cast(),
            solver_mode: solver_mode.to_owned(),
            tool_version: TOOL_VERSION.to_owned(),
            files: BTreeMap::new(),
            extra: serde_json::Map::new(),
        }
    }

    pub fn add_file(&mut self, name: impl Into<String>, description: impl Into<String>) {
        self.files.insert(name.into(), description.into());
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(self, path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?)
    }
}
