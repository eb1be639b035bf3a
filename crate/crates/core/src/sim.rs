//! Seeded Monte Carlo play.
//!
//! Run `i` of a batch uses a ChaCha8 stream seeded with `base_seed + i`. The
//! first uniform draw picks the hidden preparation (reference with
//! probability `xi0`); each round then consumes exactly one draw, so
//! different policies fed the same seed see common random numbers. Outcomes
//! are sampled from the true preparation's conditional probability; the
//! policy only ever sees the bettor's posterior.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    apply_bet, conditional_up_probs, posterior, GameParams, Outcome, Prior, RoundDecision,
    Wealth,
};
use crate::policy::{evaluate_policy_exact, PolicySpec, EXACT_MAX_STEPS};
use crate::scalar::Scalar;

/// The hidden preparation of the whole particle stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrueState {
    /// Polarised at angle 0.
    Reference,
    /// Polarised at angle `delta`.
    Alternative,
}

impl TrueState {
    pub fn as_str(self) -> &'static str {
        match self {
            TrueState::Reference => "reference",
            TrueState::Alternative => "alternative",
        }
    }

    /// Prior value that would be certain of this state.
    pub fn indicator<T: Scalar>(self) -> T {
        match self {
            TrueState::Reference => T::one(),
            TrueState::Alternative => T::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRound<T> {
    pub decision: RoundDecision<T>,
    pub outcome: Outcome,
    /// Prior after this round's update.
    pub posterior: Prior<T>,
    /// Wealth after this round's bet.
    pub wealth: Wealth<T>,
}

/// One simulated game, starting from unit wealth.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub run_seed: u64,
    pub true_state: TrueState,
    pub rounds: Vec<TrajectoryRound<T>>,
    pub outcome_string: String,
}

impl<T: Scalar> Trajectory<T> {
    pub fn final_wealth(&self) -> T {
        self.rounds.last().map_or(T::one(), |r| r.wealth.value())
    }

    pub fn final_posterior(&self, xi0: Prior<T>) -> Prior<T> {
        self.rounds.last().map_or(xi0, |r| r.posterior)
    }
}

/// Plays one game. `forced_state` overrides the drawn preparation (the draw
/// is still consumed).
pub fn simulate_run<T: Scalar>(
    params: &GameParams<T>,
    policy: &PolicySpec<T>,
    seed: u64,
    forced_state: Option<TrueState>,
) -> Result<Trajectory<T>> {
    policy.check(params)?;
    play(params, &|k, xi| policy.decide(params, k, xi), seed, forced_state)
}

fn play<T: Scalar>(
    params: &GameParams<T>,
    decide: &(dyn Fn(usize, Prior<T>) -> Result<RoundDecision<T>> + Sync),
    seed: u64,
    forced_state: Option<TrueState>,
) -> Result<Trajectory<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw: f64 = rng.random();
    let true_state = forced_state.unwrap_or(if T::lit(draw) < params.xi0.value() {
        TrueState::Reference
    } else {
        TrueState::Alternative
    });

    let mut xi = params.xi0;
    let mut wealth = Wealth::one();
    let mut rounds = Vec::with_capacity(params.n_steps);
    let mut outcome_string = String::with_capacity(params.n_steps);
    for k in 0..params.n_steps {
        let decision = decide(k, xi)?;
        let (c0, c1) = conditional_up_probs(decision.alpha, params.delta);
        let p_true = match true_state {
            TrueState::Reference => c0,
            TrueState::Alternative => c1,
        };
        let u: f64 = rng.random();
        let outcome = if T::lit(u) < p_true { Outcome::Up } else { Outcome::Down };
        xi = posterior(xi, decision.alpha, params.delta, outcome)?;
        wealth = apply_bet(wealth, &decision, outcome)?;
        outcome_string.push(outcome.symbol());
        rounds.push(TrajectoryRound { decision, outcome, posterior: xi, wealth });
    }
    Ok(Trajectory { run_seed: seed, true_state, rounds, outcome_string })
}

/// Per-run summary kept by a batch.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary<T> {
    pub seed: u64,
    pub true_state: TrueState,
    pub final_wealth: T,
    pub log2_growth: T,
    pub final_posterior: T,
    pub outcomes: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchStats<T> {
    pub n_runs: usize,
    pub mean_log2_growth: T,
    /// Sample standard deviation (zero for a single run).
    pub std_log2_growth: T,
    pub stderr_log2_growth: T,
    /// Mean of `|final posterior - indicator(true state)|`.
    pub mean_final_xi_error: T,
}

#[derive(Clone, Debug)]
pub struct Batch<T> {
    pub policy: String,
    pub runs: Vec<RunSummary<T>>,
    pub stats: BatchStats<T>,
}

/// Memoises a deterministic policy by `(round, prior bits)`; optimal and
/// max-information decisions each run an axis search.
struct MemoPolicy<'a, T> {
    policy: &'a PolicySpec<T>,
    params: &'a GameParams<T>,
    memo: Mutex<HashMap<(usize, u64), RoundDecision<T>>>,
}

impl<'a, T: Scalar> MemoPolicy<'a, T> {
    fn new(policy: &'a PolicySpec<T>, params: &'a GameParams<T>) -> Self {
        MemoPolicy { policy, params, memo: Mutex::new(HashMap::new()) }
    }

    fn decide(&self, k: usize, xi: Prior<T>) -> Result<RoundDecision<T>> {
        let key = (k, xi.value().to_f64_lossy().to_bits());
        if let Some(d) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(*d);
        }
        let d = self.policy.decide(self.params, k, xi)?;
        self.memo.lock().expect("memo lock").insert(key, d);
        Ok(d)
    }
}

/// Runs `n_runs` games with seeds `base_seed..base_seed + n_runs`.
/// Statistics are reduced in seed order, so the result does not depend on
/// how runs are scheduled.
pub fn simulate_batch<T: Scalar>(
    params: &GameParams<T>,
    policy: &PolicySpec<T>,
    n_runs: usize,
    base_seed: u64,
) -> Result<Batch<T>> {
    if n_runs == 0 {
        return Err(Error::InvalidInput("a batch needs at least one run".into()));
    }
    policy.check(params)?;
    let memo = MemoPolicy::new(policy, params);
    let decide = |k: usize, xi: Prior<T>| memo.decide(k, xi);
    let runs: Vec<RunSummary<T>> = (0..n_runs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            let traj = play(params, &decide, seed, None)?;
            let final_wealth = traj.final_wealth();
            Ok(RunSummary {
                seed,
                true_state: traj.true_state,
                final_wealth,
                log2_growth: final_wealth.log2(),
                final_posterior: traj.final_posterior(params.xi0).value(),
                outcomes: traj.outcome_string,
            })
        })
        .collect::<Result<_>>()?;
    let stats = batch_stats(&runs);
    Ok(Batch { policy: policy.name(), runs, stats })
}

fn batch_stats<T: Scalar>(runs: &[RunSummary<T>]) -> BatchStats<T> {
    let n = T::from_usize_lossy(runs.len());
    let mean = runs.iter().map(|r| r.log2_growth).sum::<T>() / n;
    let var = if runs.len() > 1 {
        runs.iter().map(|r| (r.log2_growth - mean).powi(2)).sum::<T>() / (n - T::one())
    } else {
        T::zero()
    };
    let std = var.sqrt();
    let xi_err = runs
        .iter()
        .map(|r| (r.final_posterior - r.true_state.indicator::<T>()).abs())
        .sum::<T>()
        / n;
    BatchStats {
        n_runs: runs.len(),
        mean_log2_growth: mean,
        std_log2_growth: std,
        stderr_log2_growth: std / n.sqrt(),
        mean_final_xi_error: xi_err,
    }
}

/// One row of a strategy comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow<T> {
    pub policy: String,
    /// Exact expectation when `N` is small enough to enumerate.
    pub exact: Option<T>,
    pub mc_mean: T,
    pub mc_stderr: T,
}

/// Evaluates several policies on the same seed sequence.
pub fn compare_strategies<T: Scalar>(
    params: &GameParams<T>,
    policies: &[PolicySpec<T>],
    n_runs: usize,
    base_seed: u64,
) -> Result<Vec<ComparisonRow<T>>> {
    if policies.len() < 2 {
        return Err(Error::InvalidInput("comparison needs at least two policies".into()));
    }
    policies
        .iter()
        .map(|policy| {
            let exact = if params.n_steps <= EXACT_MAX_STEPS {
                Some(evaluate_policy_exact(params, policy, params.xi0)?)
            } else {
                None
            };
            let batch = simulate_batch(params, policy, n_runs, base_seed)?;
            Ok(ComparisonRow {
                policy: policy.name(),
                exact,
                mc_mean: batch.stats.mean_log2_growth,
                mc_stderr: batch.stats.stderr_log2_growth,
            })
        })
        .collect()
}
