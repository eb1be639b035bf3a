use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{
    expected_entropy_reduction, info_gain_angle_formula, info_gain_angle_numeric, myopic_growth_angle, spin_up_prob,
    Angle, Prior,
};
use crate::scalar::Scalar;

/// Axis gap (radians) under which the two information angles count as equal.
pub const AGREEMENT_TOL: f64 = 1e-6;

/// Closed-form vs numerically maximised information angle at one `(xi, delta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoGainRow {
    pub xi: f64,
    pub delta_rad: f64,
    pub delta_deg: f64,
    pub formula_angle_rad: Option<f64>,
    /// Why the closed form has no value here.
    pub formula_error: Option<String>,
    pub numeric_angle_rad: f64,
    pub formula_entropy_reduction: Option<f64>,
    pub numeric_entropy_reduction: f64,
    /// Distance between the two measurements. Axes `pi/2` apart only swap
    /// the outcome labels, so this lies in `[0, pi/4]`.
    pub axis_gap_rad: Option<f64>,
    pub numeric_p_up: f64,
    pub growth_angle_rad: f64,
    pub agree: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InfoGainSummary {
    pub n_rows: usize,
    pub n_agree: usize,
    pub n_formula_undefined: usize,
    pub n_numeric_undefined: usize,
    pub max_axis_gap_rad: f64,
    /// Largest shortfall of the formula's entropy reduction below the numeric one.
    pub max_entropy_shortfall: f64,
    pub agreement_tol_rad: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoGainReport {
    pub rows: Vec<InfoGainRow>,
    pub summary: InfoGainSummary,
}

/// Compares the closed-form information angle against the numeric maximiser
/// over every `(xi, delta)` pair. Priors at 0 or 1 have no information to
/// gain and are skipped.
pub fn info_gain_discrepancy<T: Scalar>(xis: &[T], deltas: &[Angle<T>]) -> Result<InfoGainReport> {
    let mut rows = Vec::new();
    let mut summary = InfoGainSummary { agreement_tol_rad: AGREEMENT_TOL, ..Default::default() };
    for &delta in deltas {
        for &x in xis {
            let xi = Prior::new(x)?;
            if xi.is_certain() {
                continue;
            }
            let numeric = match info_gain_angle_numeric(xi, delta) {
                Ok(a) => a,
                Err(_) => {
                    summary.n_numeric_undefined += 1;
                    continue;
                }
            };
            let numeric_h = expected_entropy_reduction(xi, numeric, delta).to_f64_lossy();
            let (formula, formula_error) = match info_gain_angle_formula(xi, delta) {
                Ok(a) => (Some(a), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let formula_h = formula.map(|a| expected_entropy_reduction(xi, a, delta).to_f64_lossy());
            let gap = formula.map(|a| a.measurement_distance(numeric).to_f64_lossy());
            let agree = gap.is_some_and(|g| g <= AGREEMENT_TOL);

            summary.n_rows += 1;
            summary.n_agree += agree as usize;
            summary.n_formula_undefined += formula.is_none() as usize;
            if let Some(g) = gap {
                summary.max_axis_gap_rad = summary.max_axis_gap_rad.max(g);
            }
            if let Some(h) = formula_h {
                summary.max_entropy_shortfall = summary.max_entropy_shortfall.max(numeric_h - h);
            }
            rows.push(InfoGainRow {
                xi: x.to_f64_lossy(),
                delta_rad: delta.radians().to_f64_lossy(),
                delta_deg: delta.degrees().to_f64_lossy(),
                formula_angle_rad: formula.map(|a| a.radians().to_f64_lossy()),
                formula_error,
                numeric_angle_rad: numeric.radians().to_f64_lossy(),
                formula_entropy_reduction: formula_h,
                numeric_entropy_reduction: numeric_h,
                axis_gap_rad: gap,
                numeric_p_up: spin_up_prob(xi, numeric, delta).to_f64_lossy(),
                growth_angle_rad: myopic_growth_angle(xi, delta).radians().to_f64_lossy(),
                agree,
            });
        }
    }
    Ok(InfoGainReport { rows, summary })
}
