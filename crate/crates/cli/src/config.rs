use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use spin_kelly::{GameParams64, GridSpec64, PolicySpec64};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Mode {
    #[value(name = "1d")]
    #[serde(rename = "1d")]
    OneD,
    #[value(name = "2d")]
    #[serde(rename = "2d")]
    TwoD,
    #[value(name = "both")]
    #[serde(rename = "both")]
    Both,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::OneD => "1d",
            Mode::TwoD => "2d",
            Mode::Both => "both",
        }
    }

    pub fn wants_1d(self) -> bool {
        self != Mode::TwoD
    }

    pub fn wants_2d(self) -> bool {
        self != Mode::OneD
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to the defaults.
#[derive(Args, Debug, Default, Clone)]
pub struct Overrides {
    /// Separation angle between the two preparations, in degrees (0 to 90)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta_deg: Option<f64>,
    /// Number of betting rounds N
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Initial prior of the reference preparation
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub xi0: Option<f64>,
    /// Solver: 1-D reduction, 2-D grid replica, or both
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Prior grid nodes (odd)
    #[arg(long, global = true)]
    pub n_xi: Option<usize>,
    /// Wealth grid nodes (2-D mode)
    #[arg(long, global = true)]
    pub n_w: Option<usize>,
    /// Coarse angle scan size
    #[arg(long, global = true)]
    pub n_alpha_coarse: Option<usize>,
    /// Angle refinement tolerance in radians
    #[arg(long, global = true)]
    pub alpha_tol: Option<f64>,
    /// Base seed; run i uses seed + i
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Policy name(s): optimal, myopic, maxinfo, zerobet or fixed:<deg>
    #[arg(long, global = true, value_delimiter = ',')]
    pub policy: Option<Vec<String>>,
    /// Monte Carlo runs
    #[arg(long, global = true)]
    pub runs: Option<usize>,
    /// Utility levels for contour lines
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub levels: Option<Vec<f64>>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat JSON file with any of the settings above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Config file contents; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    delta_deg: Option<f64>,
    n_steps: Option<usize>,
    xi0: Option<f64>,
    n_xi: Option<usize>,
    n_w: Option<usize>,
    n_alpha_coarse: Option<usize>,
    alpha_tol: Option<f64>,
    mode: Option<Mode>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    policy: Option<PolicyList>,
    runs: Option<usize>,
    levels: Option<Vec<f64>>,
}

/// `"optimal,myopic"` or `["optimal", "myopic"]`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PolicyList {
    One(String),
    Many(Vec<String>),
}

impl PolicyList {
    fn into_vec(self) -> Vec<String> {
        match self {
            PolicyList::One(s) => s.split(',').map(|p| p.trim().to_owned()).collect(),
            PolicyList::Many(v) => v,
        }
    }
}

/// Fully resolved and validated settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub delta_deg: f64,
    pub n_steps: usize,
    pub xi0: f64,
    pub mode: Mode,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub policies: Option<Vec<String>>,
    pub runs: usize,
    pub levels: Option<Vec<f64>>,
    pub grid: GridSpec64,
    pub params: GameParams64,
}

fn read_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(flags: &Overrides) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => read_config(path)?,
            None => ConfigFile::default(),
        };
        let defaults = GridSpec64::default();
        let grid = GridSpec64 {
            n_xi: flags.n_xi.or(file.n_xi).unwrap_or(defaults.n_xi),
            n_w: flags.n_w.or(file.n_w).unwrap_or(defaults.n_w),
            n_alpha_coarse: flags.n_alpha_coarse.or(file.n_alpha_coarse).unwrap_or(defaults.n_alpha_coarse),
            alpha_tol: flags.alpha_tol.or(file.alpha_tol).unwrap_or(defaults.alpha_tol),
            ..defaults
        };
        let delta_deg = flags.delta_deg.or(file.delta_deg).unwrap_or(30.0);
        let n_steps = flags.steps.or(file.n_steps).unwrap_or(10);
        let xi0 = flags.xi0.or(file.xi0).unwrap_or(0.5);

        if !(0.0..=90.0).contains(&delta_deg) {
            return Err(CliError::Usage(format!("--delta-deg must lie in [0, 90], got {delta_deg}")));
        }
        if !(0.0..=1.0).contains(&xi0) {
            return Err(CliError::Usage(format!("--xi0 must lie in [0, 1], got {xi0}")));
        }
        let params = GameParams64::from_degrees(delta_deg, n_steps, xi0).map_err(|e| CliError::Usage(e.to_string()))?;
        grid.validate().map_err(|e| CliError::Usage(e.to_string()))?;

        let runs = flags.runs.or(file.runs).unwrap_or(10_000);
        if runs == 0 {
            return Err(CliError::Usage("--runs must be >= 1".into()));
        }
        let levels = flags.levels.clone().or(file.levels);
        if let Some(levels) = &levels {
            if levels.is_empty() || levels.iter().any(|l| !l.is_finite()) {
                return Err(CliError::Usage("--levels must be finite numbers".into()));
            }
        }
        let policies = flags.policy.clone().or(file.policy.map(PolicyList::into_vec));
        if let Some(list) = &policies {
            for name in list {
                // Only the name is checked here; `optimal` is bound to a solve later.
                if name.trim().eq_ignore_ascii_case("optimal") {
                    continue;
                }
                PolicySpec64::from_name(name, None).map_err(|e| CliError::Usage(e.to_string()))?;
            }
        }

        Ok(RunConfig {
            delta_deg,
            n_steps,
            xi0,
            mode: flags.mode.or(file.mode).unwrap_or(Mode::OneD),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            output_dir: flags.out.clone().or(file.output_dir).unwrap_or_else(|| PathBuf::from("out")),
            policies,
            runs,
            levels,
            grid,
            params,
        })
    }

    /// Same settings at another separation angle.
    pub fn with_delta_deg(&self, delta_deg: f64) -> Result<Self, CliError> {
        let params = GameParams64::from_degrees(delta_deg, self.n_steps, self.xi0)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(RunConfig { delta_deg, params, ..self.clone() })
    }
}
