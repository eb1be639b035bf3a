//! Backward induction for the optimal value function and axis policy.
//!
//! Log utility separates wealth from information: staking a fraction `f`
//! multiplies wealth, so `log2 W_N = log2 W_k + sum log2(1 +- f)`, and the
//! optimal utility at step `k` is `U_k(W, xi) = log2 W + G_k(xi)`. The
//! primary engine ([`solve_1d`]) therefore works on the prior axis alone:
//!
//! ```text
//! G_N(xi) = 0
//! G_k(xi) = max_a  sum_o p_o(a) [ log2(1 +- f(a)) + G_{k+1}(xi_o(a)) ]
//! ```
//!
//! with `f` the Kelly stake for `p_up(a)`. Given the axis, the posterior does
//! not depend on the stake, so the Kelly stake is the exact optimum of the
//! inner problem. [`solve_2d_paper`] keeps the wealth axis and reproduces the
//! grid algorithm literally; [`brute_force_value`] recurses on exact
//! posteriors without any grid and serves as the oracle for both.

mod brute;
mod surface;

pub use brute::{brute_force_value, BRUTE_FORCE_MAX_STEPS};
pub use surface::{solve_2d_paper, UtilitySurface};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, XiAxis};
use crate::model::{
    myopic_growth_angle, prior_preserving_angle, Angle, GameParams, Prior, RoundDecision,
    Transition,
};
use crate::optimize::{optimize_alpha, AlphaSearch};
use crate::scalar::Scalar;
use crate::tolerance;

/// `G_k` on the prior grid, with the maximising axis at each node.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueCurve<T> {
    pub step: usize,
    pub xi_nodes: Vec<T>,
    /// Optimal expected log2 gain of final over current wealth.
    pub g_values: Vec<T>,
    /// `None` at the terminal step.
    pub alpha_policy: Option<Vec<Angle<T>>>,
}

/// Solved value curves for every step `0..=N`.
#[derive(Clone, Debug)]
pub struct ValueStack<T> {
    params: GameParams<T>,
    grid: GridSpec<T>,
    axis: XiAxis<T>,
    curves: Vec<ValueCurve<T>>,
    /// Monotone cubic slopes of every curve, for [`ValueStack::decision`].
    slopes: Vec<Vec<T>>,
}

impl<T: Scalar> ValueStack<T> {
    pub fn params(&self) -> &GameParams<T> {
        &self.params
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn n_steps(&self) -> usize {
        self.params.n_steps
    }

    pub fn xi_axis(&self) -> &XiAxis<T> {
        &self.axis
    }

    /// Curve for step `k`, `0 <= k <= N`.
    pub fn curve(&self, k: usize) -> &ValueCurve<T> {
        &self.curves[k]
    }

    /// Curves ordered from step 0 to step N.
    pub fn curves(&self) -> &[ValueCurve<T>] {
        &self.curves
    }

    /// Interpolated `G_k(xi)`.
    pub fn g(&self, k: usize, xi: T) -> T {
        self.axis.interp(&self.curves[k].g_values, xi)
    }

    /// Optimal expected log2 growth of the whole game from `params.xi0`.
    pub fn value(&self) -> T {
        self.g(0, self.params.xi0.value())
    }

    /// `log2 w + G_k(xi)`.
    pub fn query_value(&self, k: usize, w: T, xi: T) -> Result<T> {
        check_query(k, self.n_steps(), xi)?;
        if !(w > T::zero() && w.is_finite()) {
            return Err(Error::InvalidInput(format!("wealth {w} must be > 0")));
        }
        Ok(w.log2() + self.g(k, xi))
    }

    /// Optimal action for round `k` (0-based) at an arbitrary prior: the axis
    /// maximising the one-step lookahead on a monotone cubic interpolant of
    /// `G_{k+1}`, with the Kelly stake.
    pub fn decision(&self, k: usize, xi: Prior<T>) -> Result<RoundDecision<T>> {
        if k >= self.n_steps() {
            return Err(Error::InvalidInput(format!(
                "round {k} out of range for an {}-round game",
                self.n_steps()
            )));
        }
        let delta = self.params.delta;
        let next = &self.curves[k + 1].g_values;
        let slopes = &self.slopes[k + 1];
        let objective = |a: Angle<T>| -> T {
            Transition::new(xi, a, delta)
                .branches()
                .map(|(p, log_mult, x)| p * (log_mult + self.axis.interp_hermite(next, slopes, x)))
                .sum()
        };
        let special = special_axes(xi, delta);
        let (mut alpha, best) = optimize_alpha(objective, &self.grid.alpha_search(), &special);
        // Near-ties are below what the interpolated lookahead can resolve;
        // they go to the prior-preserving axis, then the myopic one.
        for s in [special[1], special[0]] {
            if objective(s) >= best - T::lit(tolerance::POLICY_TIE) {
                alpha = s;
            }
        }
        let t = Transition::new(xi, alpha, delta);
        Ok(RoundDecision::kelly(alpha, t.p_up))
    }

    fn assemble(params: GameParams<T>, grid: GridSpec<T>, axis: XiAxis<T>, curves: Vec<ValueCurve<T>>) -> Self {
        let slopes = curves.iter().map(|c| axis.pchip_slopes(&c.g_values)).collect();
        ValueStack { params, grid, axis, curves, slopes }
    }

    /// Rebuilds a stack from stored curves (e.g. re-imported CSV).
    pub fn from_curves(params: GameParams<T>, grid: GridSpec<T>, curves: Vec<ValueCurve<T>>) -> Result<Self> {
        if curves.len() != params.n_steps + 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} curves, got {}",
                params.n_steps + 1,
                curves.len()
            )));
        }
        let axis = XiAxis::new(curves[0].xi_nodes.clone());
        Ok(ValueStack::assemble(params, grid, axis, curves))
    }
}

pub(crate) fn check_query<T: Scalar>(k: usize, n_steps: usize, xi: T) -> Result<()> {
    if k > n_steps {
        return Err(Error::InvalidInput(format!("step {k} exceeds N={n_steps}")));
    }
    if !(xi >= T::zero() && xi <= T::one()) {
        return Err(Error::InvalidInput(format!("prior {xi} outside [0, 1]")));
    }
    Ok(())
}

/// Expected `log2(1 +- f) + G_{k+1}(posterior)` for one axis choice.
#[inline]
pub(crate) fn lookahead<T: Scalar>(axis: &XiAxis<T>, next: &[T], t: &Transition<T>) -> T {
    t.branches().map(|(p, log_mult, x)| p * (log_mult + axis.interp(next, x))).sum()
}

/// Candidate axes tried in addition to the scan: the prior-preserving axis
/// (guarantees `G_k >= G_{k+1}`) and the myopic axis (exact at certainty).
pub(crate) fn special_axes<T: Scalar>(xi: Prior<T>, delta: Angle<T>) -> [Angle<T>; 2] {
    [prior_preserving_angle(delta), myopic_growth_angle(xi, delta)]
}

fn best_axis<T: Scalar>(
    axis: &XiAxis<T>,
    next: &[T],
    xi: Prior<T>,
    delta: Angle<T>,
    search: &AlphaSearch<T>,
) -> (Angle<T>, T) {
    optimize_alpha(
        |a| lookahead(axis, next, &Transition::new(xi, a, delta)),
        search,
        &special_axes(xi, delta),
    )
}

/// Exact 1-D backward induction on the prior grid.
pub fn solve_1d<T: Scalar>(params: &GameParams<T>, grid: &GridSpec<T>) -> Result<ValueStack<T>> {
    grid.validate()?;
    let axis = grid.xi_axis();
    let nodes = axis.nodes().to_vec();
    let n = params.n_steps;
    let search = grid.alpha_search();
    let delta = params.delta;

    let mut curves = vec![ValueCurve {
        step: n,
        xi_nodes: nodes.clone(),
        g_values: vec![T::zero(); nodes.len()],
        alpha_policy: None,
    }];

    for k in (0..n).rev() {
        let next = &curves.last().expect("terminal curve").g_values;
        let solved: Vec<(Angle<T>, T)> = nodes
            .par_iter()
            .map(|&x| best_axis(&axis, next, Prior::clamped(x), delta, &search))
            .collect();
        check_monotone(k, &nodes, next, solved.iter().map(|s| s.1))?;
        let (alpha, g): (Vec<_>, Vec<_>) = solved.into_iter().unzip();
        curves.push(ValueCurve {
            step: k,
            xi_nodes: nodes.clone(),
            g_values: g,
            alpha_policy: Some(alpha),
        });
    }
    curves.reverse();
    Ok(ValueStack::assemble(*params, *grid, axis, curves))
}

fn check_monotone<T: Scalar>(
    k: usize,
    nodes: &[T],
    next: &[T],
    current: impl Iterator<Item = T>,
) -> Result<()> {
    let slack = T::lit(tolerance::MONOTONE_SLACK);
    for ((x, g_next), g) in nodes.iter().zip(next).zip(current) {
        if g < *g_next - slack {
            return Err(Error::GridTooCoarse {
                step: k,
                xi: x.to_f64_lossy(),
                violation: (*g_next - g).to_f64_lossy(),
            });
        }
    }
    Ok(())
}
