//! Log-optimal betting on sequential spin-1/2 measurements.
//!
//! A stream of identically prepared spin-1/2 particles is either in the
//! reference state (angle 0) or in an alternative state at angle `delta`.
//! Each round the bettor picks a measurement axis and stakes a fraction of
//! wealth on the outcome of a double-or-nothing bet. The axis trades off the
//! win probability of the current round against what the outcome reveals
//! about the preparation.
//!
//! * [`model`]: per-round mechanics (probabilities, Bayes updates, Kelly
//!   stake, closed-form axes, information measures).
//! * [`solver`]: backward induction for the optimal value function, a 2-D
//!   replica over the wealth/prior plane, and an exhaustive oracle.
//! * [`policy`]: built-in strategies and exact evaluation by outcome
//!   enumeration.
//! * [`sim`]: seeded Monte Carlo play.
//! * [`report`]: contour lines, heat maps, CSV/JSON export.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision case.

pub mod error;
pub mod grid;
pub mod model;
pub mod optimize;
pub mod policy;
pub mod report;
pub mod scalar;
pub mod sim;
pub mod solver;
pub mod tolerance;

pub use error::{Error, Result};
pub use grid::{GridSpec, WealthBoundary, WealthInterp, XiSpacing};
pub use model::{
    apply_bet, kelly_decision, myopic_growth_angle, one_step_growth, posterior, spin_up_prob,
    Angle, BetDirection, GameParams, Outcome, Prior, RoundDecision, Wealth,
};
pub use optimize::{optimize_alpha, AlphaSearch};
pub use policy::{evaluate_policy_exact, PolicySpec};
pub use scalar::Scalar;
pub use sim::{compare_strategies, simulate_batch, simulate_run, TrueState};
pub use solver::{brute_force_value, solve_1d, solve_2d_paper, UtilitySurface, ValueCurve, ValueStack};

pub type Angle64 = Angle<f64>;
pub type Prior64 = Prior<f64>;
pub type Wealth64 = Wealth<f64>;
pub type GameParams64 = GameParams<f64>;
pub type RoundDecision64 = RoundDecision<f64>;
pub type GridSpec64 = GridSpec<f64>;
pub type ValueCurve64 = ValueCurve<f64>;
pub type ValueStack64 = ValueStack<f64>;
pub type UtilitySurface64 = UtilitySurface<f64>;
pub type PolicySpec64 = PolicySpec<f64>;

pub type Angle32 = Angle<f32>;
pub type Prior32 = Prior<f32>;
pub type GameParams32 = GameParams<f32>;
pub type GridSpec32 = GridSpec<f32>;
pub type ValueStack32 = ValueStack<f32>;
