//! Betting strategies and their exact evaluation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{
    info_gain_angle_numeric, myopic_growth_angle, spin_up_prob, Angle, GameParams, Outcome,
    Prior, RoundDecision, Transition,
};
use crate::scalar::Scalar;
use crate::solver::ValueStack;
use crate::tolerance;

/// Largest game [`evaluate_policy_exact`] enumerates.
pub const EXACT_MAX_STEPS: usize = 12;

/// A rule mapping (round, current prior) to an action. Policies never see
/// the true preparation.
#[derive(Clone, Debug)]
pub enum PolicySpec<T> {
    /// Greedy one-step lookahead on a solved value function.
    Optimal(Arc<ValueStack<T>>),
    /// Maximise this round's win probability; Kelly stake.
    Myopic,
    /// Maximise expected entropy reduction of the prior; Kelly stake.
    MaxInfo,
    /// Always measure along one axis; Kelly stake.
    FixedAngle(Angle<T>),
    /// Measure along the reference axis and never bet.
    ZeroBet,
}

impl<T: Scalar> PolicySpec<T> {
    /// Parses `optimal`, `myopic`, `maxinfo`, `zerobet` or `fixed:<degrees>`.
    /// `optimal` needs a solved stack.
    pub fn from_name(name: &str, stack: Option<Arc<ValueStack<T>>>) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        match lower.as_str() {
            "optimal" => stack.map(PolicySpec::Optimal).ok_or(Error::UnsolvablePolicy),
            "myopic" => Ok(PolicySpec::Myopic),
            "maxinfo" => Ok(PolicySpec::MaxInfo),
            "zerobet" => Ok(PolicySpec::ZeroBet),
            other => {
                let deg = other
                    .strip_prefix("fixed:")
                    .and_then(|d| d.parse::<f64>().ok())
                    .filter(|d| d.is_finite())
                    .ok_or_else(|| Error::InvalidInput(format!("unknown policy '{name}'")))?;
                Ok(PolicySpec::FixedAngle(Angle::from_degrees(T::lit(deg))))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            PolicySpec::Optimal(_) => "optimal".into(),
            PolicySpec::Myopic => "myopic".into(),
            PolicySpec::MaxInfo => "maxinfo".into(),
            PolicySpec::FixedAngle(a) => format!("fixed:{}", a.degrees()),
            PolicySpec::ZeroBet => "zerobet".into(),
        }
    }

    /// Confirms the policy can act in a game with these parameters.
    pub fn check(&self, params: &GameParams<T>) -> Result<()> {
        if let PolicySpec::Optimal(stack) = self {
            let solved = stack.params();
            if solved.n_steps != params.n_steps || solved.delta != params.delta {
                return Err(Error::UnsolvablePolicy);
            }
        }
        Ok(())
    }

    /// Action for round `k` (0-based) given the current prior.
    pub fn decide(&self, params: &GameParams<T>, k: usize, xi: Prior<T>) -> Result<RoundDecision<T>> {
        let delta = params.delta;
        let kelly = |alpha: Angle<T>| RoundDecision::kelly(alpha, spin_up_prob(xi, alpha, delta));
        Ok(match self {
            PolicySpec::Optimal(stack) => stack.decision(k, xi)?,
            PolicySpec::Myopic => kelly(myopic_growth_angle(xi, delta)),
            PolicySpec::MaxInfo => {
                // A certain prior cannot be refined; every axis is equally
                // uninformative, so take the growth axis.
                let alpha = if xi.is_certain() {
                    myopic_growth_angle(xi, delta)
                } else {
                    info_gain_angle_numeric(xi, delta)?
                };
                kelly(alpha)
            }
            PolicySpec::FixedAngle(alpha) => kelly(*alpha),
            PolicySpec::ZeroBet => RoundDecision::no_bet(Angle::zero()),
        })
    }
}

impl<T: Scalar> fmt::Display for PolicySpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// One leaf of the outcome tree.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceOutcome<T> {
    /// `+` / `-` per round.
    pub sequence: String,
    pub probability: T,
    pub log2_growth: T,
}

/// Every outcome sequence with positive probability under `policy`, with
/// its probability (under the bettor's prior `xi0`) and log2 wealth growth.
pub fn enumerate_outcomes<T: Scalar>(
    params: &GameParams<T>,
    policy: &PolicySpec<T>,
    xi0: Prior<T>,
) -> Result<Vec<SequenceOutcome<T>>> {
    if params.n_steps > EXACT_MAX_STEPS {
        return Err(Error::InstanceTooLarge { n_steps: params.n_steps, limit: EXACT_MAX_STEPS });
    }
    policy.check(params)?;
    let mut leaves = Vec::new();
    let mut prefix = String::with_capacity(params.n_steps);
    walk(params, policy, 0, xi0, T::one(), T::zero(), &mut prefix, &mut leaves)?;
    Ok(leaves)
}

#[allow(clippy::too_many_arguments)]
fn walk<T: Scalar>(
    params: &GameParams<T>,
    policy: &PolicySpec<T>,
    k: usize,
    xi: Prior<T>,
    prob: T,
    log_w: T,
    prefix: &mut String,
    leaves: &mut Vec<SequenceOutcome<T>>,
) -> Result<()> {
    if k == params.n_steps {
        leaves.push(SequenceOutcome { sequence: prefix.clone(), probability: prob, log2_growth: log_w });
        return Ok(());
    }
    let decision = policy.decide(params, k, xi)?;
    let t = Transition::new(xi, decision.alpha, params.delta);
    let eps = T::lit(tolerance::PROB_EPS);
    for outcome in Outcome::BOTH {
        let (p, post) = match outcome {
            Outcome::Up => (t.p_up, t.xi_up),
            Outcome::Down => (t.p_down(), t.xi_down),
        };
        if p <= eps {
            continue;
        }
        let mult = if decision.bet_on.wins(outcome) {
            T::one() + decision.fraction
        } else {
            T::one() - decision.fraction
        };
        if mult <= T::zero() {
            return Err(Error::BankruptWealth);
        }
        prefix.push(outcome.symbol());
        walk(params, policy, k + 1, Prior::clamped(post), prob * p, log_w + mult.log2(), prefix, leaves)?;
        prefix.pop();
    }
    Ok(())
}

/// Exact expected `log2(W_N / W_1)` of a policy: the probability-weighted
/// sum over all outcome sequences.
pub fn evaluate_policy_exact<T: Scalar>(params: &GameParams<T>, policy: &PolicySpec<T>, xi0: Prior<T>) -> Result<T> {
    Ok(enumerate_outcomes(params, policy, xi0)?
        .iter()
        .map(|leaf| leaf.probability * leaf.log2_growth)
        .sum())
}
