//! Numerical thresholds used across the crate and its acceptance suite.

/// Probabilities at or below this are treated as zero when pruning branches.
pub const PROB_EPS: f64 = 1e-15;

/// Closeness to 0 or pi/2 at which the closed-form growth angle is degenerate.
pub const DEGENERATE_ANGLE: f64 = 1e-12;

/// Closeness to 0 or 1 at which a prior counts as certain.
pub const DEGENERATE_PRIOR: f64 = 1e-12;

/// Vanishing denominator in the closed-form information-gain angle.
pub const FORMULA_DENOMINATOR: f64 = 1e-12;

/// Largest tolerated drop `G_{k+1} - G_k` before the grid is declared too coarse.
pub const MONOTONE_SLACK: f64 = 1e-6;

/// Values within this of the best are ties in the angle optimiser.
pub const TIE_EPS: f64 = 1e-13;

/// Algebraic identities (martingale, mirror symmetry, Kelly optimality).
pub const IDENTITY: f64 = 1e-9;

/// Closed-form myopic angle against a dense scan.
pub const MYOPIC_ANGLE: f64 = 1e-6;

/// Grid DP against the interpolation-free recursion.
pub const DP_VS_BRUTE: f64 = 1e-4;

/// Two-dimensional replica against the separable solver.
pub const SEPARABILITY: f64 = 5e-3;

/// Contour anchor wealth.
pub const ANCHOR: f64 = 1e-9;

/// Value-curve mirror symmetry.
pub const SYMMETRY: f64 = 1e-6;

/// Slack allowed in policy dominance comparisons.
pub const DOMINANCE: f64 = 1e-9;

/// Monte Carlo mean against exact value, in standard errors.
pub const MC_STDERRS: f64 = 4.0;

/// Lookahead gap within which the optimal policy prefers a special axis.
pub const POLICY_TIE: f64 = 1e-7;
