use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::{Angle, GameParams, Prior, Transition};
use crate::optimize::{optimize_alpha, AlphaSearch};
use crate::scalar::Scalar;
use crate::solver::special_axes;

/// Largest game [`brute_force_value`] accepts; the cost grows like
/// `(2 * evaluations per search)^N`.
pub const BRUTE_FORCE_MAX_STEPS: usize = 4;

/// Optimal expected `log2(W_N / W_1)` by exhaustive recursion over the
/// outcome tree, optimising the axis at every node on exact posteriors.
/// No value function and no interpolation are involved.
pub fn brute_force_value<T: Scalar>(params: &GameParams<T>, xi0: Prior<T>, grid: &GridSpec<T>) -> Result<T> {
    if params.n_steps > BRUTE_FORCE_MAX_STEPS {
        return Err(Error::InstanceTooLarge { n_steps: params.n_steps, limit: BRUTE_FORCE_MAX_STEPS });
    }
    grid.validate()?;
    Ok(recurse(xi0, params.n_steps, params.delta, &grid.alpha_search()))
}

fn recurse<T: Scalar>(xi: Prior<T>, remaining: usize, delta: Angle<T>, search: &AlphaSearch<T>) -> T {
    if remaining == 0 {
        return T::zero();
    }
    let objective = |a: Angle<T>| {
        Transition::new(xi, a, delta)
            .branches()
            .map(|(p, log_mult, post)| p * (log_mult + recurse(Prior::clamped(post), remaining - 1, delta, search)))
            .sum()
    };
    optimize_alpha(objective, search, &special_axes(xi, delta)).1
}
