use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use serde_json::json;
use spin_kelly::report::export::*;
use spin_kelly::report::{contour_points, contour_segments_2d, heatmap, info_gain_discrepancy, ValueSource};
use spin_kelly::sim::{compare_strategies, simulate_batch, simulate_run};
use spin_kelly::{solve_1d, solve_2d_paper, Angle64, PolicySpec64, UtilitySurface64, ValueStack64};

use crate::config::RunConfig;
use crate::CliError;

const BUNDLE_DELTAS: [f64; 4] = [7.5, 30.0, 60.0, 90.0];
const CONTOUR_POINTS: usize = 401;
const DEFAULT_POLICIES: [&str; 4] = ["optimal", "myopic", "maxinfo", "zerobet"];

type Res = Result<(), CliError>;

fn out_dir(dir: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    Ok(dir.to_path_buf())
}

fn stack(cfg: &RunConfig) -> Result<ValueStack64, CliError> {
    Ok(solve_1d(&cfg.params, &cfg.grid)?)
}

fn surface(cfg: &RunConfig) -> Result<UtilitySurface64, CliError> {
    Ok(solve_2d_paper(&cfg.params, &cfg.grid)?)
}

fn manifest(cfg: &RunConfig) -> Manifest {
    let mut m = Manifest::new(&cfg.params, &cfg.grid, cfg.mode.as_str());
    // The requested degrees, not the radian round trip.
    m.delta_deg = cfg.delta_deg;
    m
}

fn levels(cfg: &RunConfig) -> Vec<f64> {
    cfg.levels.clone().unwrap_or_else(|| vec![cfg.grid.w_max.log2()])
}

fn write_heatmaps<S: ValueSource<f64>>(source: &S, cfg: &RunConfig, dir: &Path, m: &mut Manifest, prefix: &str) -> Res {
    let n = cfg.n_steps;
    for k in [n - 1, n] {
        let name = format!("{prefix}_k{k}.csv");
        write_heatmap(&heatmap(source, k, &cfg.grid)?, &dir.join(&name))?;
        m.add_file(name, format!("utility on the wealth x prior grid at step {k}"));
    }
    Ok(())
}

pub fn solve(cfg: &RunConfig) -> Res {
    let dir = out_dir(&cfg.output_dir)?;
    let s = stack(cfg)?;
    let mut m = manifest(cfg);
    write_value_curves(&s, &dir.join("value_curves.csv"))?;
    m.add_file("value_curves.csv", "G_k on the prior grid with the optimal axis");
    write_policy_table(&s, &dir.join("policy.csv"))?;
    m.add_file("policy.csv", "optimal axis, win probability and Kelly stake per node");
    println!("G_0({}) = {:.12}", cfg.xi0, s.g(0, cfg.xi0));

    if cfg.mode.wants_2d() {
        let surf = surface(cfg)?;
        write_heatmaps(&surf, cfg, &dir, &mut m, "surface")?;
        let residual = surf.separability_residual(&s)?;
        m.extra.insert("separability_residual".into(), json!(residual));
        println!("2-D separability residual = {residual:.3e}");
    }
    m.write(&dir.join("manifest.json"))?;
    Ok(())
}

/// Analytic contours (1-D) and/or marching-squares contours (2-D) into `dir`.
fn write_contour_set(cfg: &RunConfig, dir: &Path, m: &mut Manifest) -> Res {
    let levels = levels(cfg);
    if cfg.mode.wants_1d() {
        let s = stack(cfg)?;
        write_value_curves(&s, &dir.join("value_curves.csv"))?;
        m.add_file("value_curves.csv", "G_k on the prior grid with the optimal axis");
        for k in 0..=cfg.n_steps {
            let lines = levels
                .iter()
                .map(|&u| contour_points(&s, k, u, CONTOUR_POINTS))
                .collect::<spin_kelly::Result<Vec<_>>>()?;
            let name = format!("contours_k{k}.csv");
            write_contours(&lines, &dir.join(&name))?;
            m.add_file(name, format!("equal-utility wealth against prior at step {k}"));
        }
    }
    if cfg.mode.wants_2d() {
        let surf = surface(cfg)?;
        for k in 0..=cfg.n_steps {
            for (i, &u) in levels.iter().enumerate() {
                let name = format!("contour_segments_k{k}_l{i}.csv");
                write_contour_segments(&contour_segments_2d(&surf, k, u)?, u, k, &dir.join(&name))?;
                m.add_file(name, format!("marching-squares level {u} at step {k}"));
            }
        }
    }
    m.extra.insert("levels".into(), json!(levels));
    Ok(())
}

pub fn contours(cfg: &RunConfig) -> Res {
    let dir = out_dir(&cfg.output_dir)?;
    let mut m = manifest(cfg);
    write_contour_set(cfg, &dir, &mut m)?;
    m.write(&dir.join("manifest.json"))?;
    println!("wrote {} files to {}", m.files.len() + 1, dir.display());
    Ok(())
}

fn policy(cfg: &RunConfig, name: &str, solved: &mut Option<Arc<ValueStack64>>) -> Result<PolicySpec64, CliError> {
    if name.trim().eq_ignore_ascii_case("optimal") && solved.is_none() {
        *solved = Some(Arc::new(stack(cfg)?));
    }
    PolicySpec64::from_name(name, solved.clone()).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn simulate(cfg: &RunConfig) -> Res {
    let names = cfg.policies.clone().unwrap_or_else(|| vec!["optimal".into()]);
    let [name] = names.as_slice() else {
        return Err(CliError::Usage(format!("simulate takes exactly one policy, got {}", names.len())));
    };
    let dir = out_dir(&cfg.output_dir)?;
    let mut solved = None;
    let policy = policy(cfg, name, &mut solved)?;
    let batch = simulate_batch(&cfg.params, &policy, cfg.runs, cfg.seed)?;
    write_batch(&batch, cfg.seed, &dir.join("batch.csv"), &dir.join("batch_stats.json"))?;
    let first = simulate_run(&cfg.params, &policy, cfg.seed, None)?;
    write_trajectory(&first, &dir.join("trajectory.csv"))?;

    let mut m = manifest(cfg);
    m.add_file("batch.csv", "one row per run");
    m.add_file("batch_stats.json", "batch statistics");
    m.add_file("trajectory.csv", format!("round-by-round record of the run with seed {}", cfg.seed));
    m.extra.insert("policy".into(), json!(policy.name()));
    m.extra.insert("runs".into(), json!(cfg.runs));
    m.extra.insert("seed".into(), json!(cfg.seed));
    m.write(&dir.join("manifest.json"))?;

    let st = &batch.stats;
    println!(
        "{}: {} runs, mean log2 growth {:.6} (std {:.6}, stderr {:.6}), mean final prior error {:.6}",
        batch.policy, st.n_runs, st.mean_log2_growth, st.std_log2_growth, st.stderr_log2_growth, st.mean_final_xi_error
    );
    Ok(())
}

pub fn compare(cfg: &RunConfig) -> Res {
    let names = cfg
        .policies
        .clone()
        .unwrap_or_else(|| DEFAULT_POLICIES.iter().map(|s| s.to_string()).collect());
    if names.len() < 2 {
        return Err(CliError::Usage("compare needs at least two policies".into()));
    }
    let dir = out_dir(&cfg.output_dir)?;
    let mut solved = None;
    let policies = names.iter().map(|n| policy(cfg, n, &mut solved)).collect::<Result<Vec<_>, _>>()?;
    let rows = compare_strategies(&cfg.params, &policies, cfg.runs, cfg.seed)?;
    write_comparison(&rows, &dir.join("comparison.csv"))?;
    let mut m = manifest(cfg);
    m.add_file("comparison.csv", "exact and Monte Carlo log2 growth per policy");
    m.extra.insert("runs".into(), json!(cfg.runs));
    m.extra.insert("seed".into(), json!(cfg.seed));
    m.write(&dir.join("manifest.json"))?;

    println!("{:<14} {:>16} {:>16} {:>12}", "policy", "exact", "mc_mean", "mc_stderr");
    for r in &rows {
        let exact = r.exact.map_or_else(|| "-".to_owned(), |v| format!("{v:.10}"));
        println!("{:<14} {:>16} {:>16.10} {:>12.3e}", r.policy, exact, r.mc_mean, r.mc_stderr);
    }
    Ok(())
}

pub fn figures_data(cfg: &RunConfig) -> Res {
    let root = out_dir(&cfg.output_dir)?;
    let mut top = manifest(cfg);

    for deg in BUNDLE_DELTAS {
        let sub_cfg = cfg.with_delta_deg(deg)?;
        let name = format!("delta_{deg}");
        let dir = out_dir(&root.join(&name))?;
        let mut m = manifest(&sub_cfg);
        write_contour_set(&sub_cfg, &dir, &mut m)?;
        m.write(&dir.join("manifest.json"))?;
        top.add_file(format!("{name}/manifest.json"), format!("contour bundle for delta = {deg} deg"));
    }

    let dir = out_dir(&root.join("heatmap"))?;
    let mut m = manifest(cfg);
    if cfg.mode.wants_2d() {
        write_heatmaps(&surface(cfg)?, cfg, &dir, &mut m, "heatmap")?;
    } else {
        write_heatmaps(&stack(cfg)?, cfg, &dir, &mut m, "heatmap")?;
    }
    m.write(&dir.join("manifest.json"))?;
    top.add_file("heatmap/manifest.json", format!("heat maps for delta = {} deg", cfg.delta_deg));

    let xis: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
    let deltas: Vec<Angle64> = (1..=12).map(|i| Angle64::from_degrees(7.5 * i as f64)).collect();
    let report = info_gain_discrepancy(&xis, &deltas)?;
    write_json(&report, &root.join("info_gain_discrepancy.json"))?;
    top.add_file("info_gain_discrepancy.json", "closed-form against numeric information angle");

    top.extra.insert("bundle_deltas_deg".into(), json!(BUNDLE_DELTAS));
    top.extra.insert("heatmap_delta_deg".into(), json!(cfg.delta_deg));
    top.write(&root.join("manifest.json"))?;
    println!("wrote figure data to {}", root.display());
    Ok(())
}
