//! Per-round game mechanics: measurement statistics, Bayesian prior updates,
//! the Kelly stake and wealth bookkeeping.
//!
//! The two candidate preparations are pure spin states at angle `0` (the
//! reference state) and at angle `delta`. A projective measurement along
//! `alpha` yields "up" with probability `cos²(alpha)` for the reference state
//! and `cos²(delta - alpha)` for the alternative. The prior `xi` is the
//! bettor's weight on the reference state.

mod classical;
mod information;

pub use classical::st_petersburg_log_value;
pub use information::{
    binary_entropy, expected_entropy_reduction, info_gain_angle_formula,
    info_gain_angle_numeric, info_gain_angle_numeric_with, info_gain_p_up,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tolerance;

/// Measurement axis or polarisation angle, canonicalised to `[0, pi)`.
///
/// Axes at `a` and `a + pi` describe the same projective measurement, so the
/// representation is reduced mod pi. Which outcome is backed is carried
/// separately by [`BetDirection`].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Angle<T>(T);

impl<T: Scalar> Angle<T> {
    /// Reduces any finite input into `[0, pi)`.
    pub fn new(radians: T) -> Self {
        let pi = T::PI();
        if radians >= T::zero() && radians < pi {
            return Angle(radians);
        }
        let mut a = radians % pi;
        if a < T::zero() {
            a = a + pi;
        }
        // `a + pi` can round up to exactly pi.
        if a >= pi {
            a = T::zero();
        }
        Angle(a)
    }

    pub fn from_degrees(degrees: T) -> Self {
        Self::new(degrees.to_radians())
    }

    #[inline]
    pub fn radians(self) -> T {
        self.0
    }

    pub fn degrees(self) -> T {
        self.0.to_degrees()
    }

    pub fn zero() -> Self {
        Angle(T::zero())
    }

    /// Distance between two axes on the mod-pi circle, in `[0, pi/2]`.
    pub fn axis_distance(self, other: Self) -> T {
        let d = (self.0 - other.0).abs();
        d.min(T::PI() - d)
    }

    /// Distance in `[0, pi/4]` between the measurements along two axes when
    /// outcome labels are ignored: axes `pi/2` apart swap up and down.
    pub fn measurement_distance(self, other: Self) -> T {
        let d = self.axis_distance(other);
        d.min(T::FRAC_PI_2() - d)
    }
}

impl<T: Scalar> fmt::Display for Angle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// Probability weight on the reference (angle 0) preparation.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Prior<T>(T);

impl<T: Scalar> Prior<T> {
    pub fn new(xi: T) -> Result<Self> {
        if !xi.is_finite() || xi < T::zero() || xi > T::one() {
            return Err(Error::InvalidInput(format!("prior {xi} outside [0, 1]")));
        }
        Ok(Prior(xi))
    }

    /// Builds a prior from a computed value that may have drifted out of
    /// `[0, 1]` by round-off.
    pub fn clamped(xi: T) -> Self {
        Prior(xi.clamp_unit())
    }

    pub fn half() -> Self {
        Prior(T::half())
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// The prior obtained by swapping the roles of the two preparations.
    pub fn complement(self) -> Self {
        Prior(T::one() - self.0)
    }

    pub fn is_certain(self) -> bool {
        let eps = T::lit(tolerance::DEGENERATE_PRIOR);
        self.0 <= eps || self.0 >= T::one() - eps
    }
}

/// Strictly positive wealth.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Wealth<T>(T);

impl<T: Scalar> Wealth<T> {
    pub fn new(w: T) -> Result<Self> {
        if !w.is_finite() || w <= T::zero() {
            return Err(Error::InvalidInput(format!("wealth {w} must be finite and > 0")));
        }
        Ok(Wealth(w))
    }

    pub fn one() -> Self {
        Wealth(T::one())
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

/// A problem instance: separation angle, number of rounds, initial prior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameParams<T> {
    pub delta: Angle<T>,
    pub n_steps: usize,
    pub xi0: Prior<T>,
}

impl<T: Scalar> GameParams<T> {
    /// Validates `0 <= delta <= pi/2` and `n_steps >= 1`. `delta = 0`
    /// (identical preparations) is accepted as a degenerate instance.
    pub fn new(delta_radians: T, n_steps: usize, xi0: T) -> Result<Self> {
        if !delta_radians.is_finite()
            || delta_radians < T::zero()
            || delta_radians > T::FRAC_PI_2() + T::lit(1e-15)
        {
            return Err(Error::InvalidInput(format!(
                "separation angle {delta_radians} rad outside [0, pi/2]"
            )));
        }
        if n_steps == 0 {
            return Err(Error::InvalidInput("number of steps must be >= 1".into()));
        }
        Ok(GameParams {
            delta: Angle(delta_radians.min(T::FRAC_PI_2())),
            n_steps,
            xi0: Prior::new(xi0)?,
        })
    }

    pub fn from_degrees(delta_deg: T, n_steps: usize, xi0: T) -> Result<Self> {
        Self::new(delta_deg.to_radians(), n_steps, xi0)
    }

    pub fn with_xi0(self, xi0: Prior<T>) -> Self {
        GameParams { xi0, ..self }
    }

    pub fn is_degenerate(&self) -> bool {
        self.delta.radians() <= T::lit(tolerance::DEGENERATE_ANGLE)
    }
}

/// Result of one spin measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Up,
    Down,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Up, Outcome::Down];

    /// `'+'` for up, `'-'` for down.
    pub fn symbol(self) -> char {
        match self {
            Outcome::Up => '+',
            Outcome::Down => '-',
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Up => "up",
            Outcome::Down => "down",
        }
    }
}

/// Which outcome the stake is placed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BetDirection {
    Up,
    Down,
}

impl BetDirection {
    pub fn wins(self, outcome: Outcome) -> bool {
        matches!(
            (self, outcome),
            (BetDirection::Up, Outcome::Up) | (BetDirection::Down, Outcome::Down)
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BetDirection::Up => "up",
            BetDirection::Down => "down",
        }
    }
}

/// Kelly stake for a known win probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KellyBet<T> {
    pub fraction: T,
    pub bet_on: BetDirection,
}

/// One round's action.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundDecision<T> {
    pub alpha: Angle<T>,
    pub fraction: T,
    pub bet_on: BetDirection,
}

impl<T: Scalar> RoundDecision<T> {
    /// Measures along `alpha` and stakes the Kelly fraction for `p_up`.
    pub fn kelly(alpha: Angle<T>, p_up: T) -> Self {
        let bet = kelly_decision(p_up);
        RoundDecision { alpha, fraction: bet.fraction, bet_on: bet.bet_on }
    }

    /// Measures along `alpha` without staking anything.
    pub fn no_bet(alpha: Angle<T>) -> Self {
        RoundDecision { alpha, fraction: T::zero(), bet_on: BetDirection::Up }
    }
}

#[inline]
fn sin2<T: Scalar>(x: T) -> T {
    let c = x.sin();
    c * c
}

#[inline]
fn cos2<T: Scalar>(x: T) -> T {
    let c = x.cos();
    c * c
}

/// `cos²(alpha)` and `cos²(delta - alpha)`: the up probabilities under the
/// reference and the alternative preparation.
#[inline]
pub fn conditional_up_probs<T: Scalar>(alpha: Angle<T>, delta: Angle<T>) -> (T, T) {
    let a = alpha.radians();
    (cos2(a), cos2(delta.radians() - a))
}

/// Mixture probability of a spin-up outcome,
/// `xi cos²(alpha) + (1 - xi) cos²(delta - alpha)`.
pub fn spin_up_prob<T: Scalar>(xi: Prior<T>, alpha: Angle<T>, delta: Angle<T>) -> T {
    let (c0, c1) = conditional_up_probs(alpha, delta);
    mix(xi.value(), c0, c1)
}

#[inline]
fn mix<T: Scalar>(xi: T, c0: T, c1: T) -> T {
    (xi * c0 + (T::one() - xi) * c1).clamp_unit()
}

/// Bayes update of the prior after observing `outcome` along `alpha`.
pub fn posterior<T: Scalar>(
    xi: Prior<T>,
    alpha: Angle<T>,
    delta: Angle<T>,
    outcome: Outcome,
) -> Result<Prior<T>> {
    let x = xi.value();
    let (num, den) = match outcome {
        Outcome::Up => {
            let (c0, c1) = conditional_up_probs(alpha, delta);
            (x * c0, mix(x, c0, c1))
        }
        Outcome::Down => {
            // sin² avoids the cancellation in 1 - cos² for nearly sure ups.
            let (a, d) = (alpha.radians(), delta.radians());
            let (s0, s1) = (sin2(a), sin2(d - a));
            (x * s0, mix(x, s0, s1))
        }
    };
    if den <= T::lit(tolerance::PROB_EPS) {
        return Err(Error::ZeroProbabilityOutcome);
    }
    Ok(Prior::clamped(num / den))
}

/// Kelly stake for the double-or-nothing game: back up with `2p - 1` when
/// `p >= 1/2`, otherwise back down with `1 - 2p`.
pub fn kelly_decision<T: Scalar>(p_up: T) -> KellyBet<T> {
    let p = p_up.clamp_unit();
    if p >= T::half() {
        KellyBet { fraction: (T::two() * p - T::one()).clamp_unit(), bet_on: BetDirection::Up }
    } else {
        KellyBet { fraction: (T::one() - T::two() * p).clamp_unit(), bet_on: BetDirection::Down }
    }
}

/// Wealth after the round: `w (1 + f)` on a win, `w (1 - f)` on a loss.
pub fn apply_bet<T: Scalar>(
    w: Wealth<T>,
    decision: &RoundDecision<T>,
    outcome: Outcome,
) -> Result<Wealth<T>> {
    let f = decision.fraction;
    if !(T::zero()..=T::one()).contains(&f) {
        return Err(Error::InvalidInput(format!("bet fraction {f} outside [0, 1]")));
    }
    let next = if decision.bet_on.wins(outcome) {
        w.value() * (T::one() + f)
    } else {
        w.value() * (T::one() - f)
    };
    if next <= T::zero() {
        return Err(Error::BankruptWealth);
    }
    Ok(Wealth(next))
}

/// Expected log2 wealth growth of one Kelly-staked round,
/// `1 - H2(max(p, 1 - p))`.
pub fn one_step_growth<T: Scalar>(p_up: T) -> T {
    let p = p_up.clamp_unit();
    let win = p.max(T::one() - p);
    let lose = T::one() - win;
    // win * log2(2 win) + lose * log2(2 lose)
    (win + lose + win.xlog2x() + lose.xlog2x()).max(T::zero())
}

/// Everything one measurement along `alpha` does to a prior: outcome
/// probabilities, both posteriors and the Kelly stake.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition<T> {
    pub p_up: T,
    pub xi_up: T,
    pub xi_down: T,
    pub bet: KellyBet<T>,
}

impl<T: Scalar> Transition<T> {
    /// Posteriors of outcomes at or below [`tolerance::PROB_EPS`] are left at
    /// the prior; callers prune those branches.
    pub fn new(xi: Prior<T>, alpha: Angle<T>, delta: Angle<T>) -> Self {
        let (c0, c1) = conditional_up_probs(alpha, delta);
        Self::from_conditionals(xi.value(), c0, c1)
    }

    #[inline]
    pub fn from_conditionals(xi: T, c0: T, c1: T) -> Self {
        let eps = T::lit(tolerance::PROB_EPS);
        let p_up = mix(xi, c0, c1);
        let p_down = T::one() - p_up;
        let xi_up = if p_up > eps { (xi * c0 / p_up).clamp_unit() } else { xi };
        let xi_down =
            if p_down > eps { (xi * (T::one() - c0) / p_down).clamp_unit() } else { xi };
        Transition { p_up, xi_up, xi_down, bet: kelly_decision(p_up) }
    }

    #[inline]
    pub fn p_down(&self) -> T {
        T::one() - self.p_up
    }

    /// `(probability, log2 wealth multiplier, posterior)` for each outcome
    /// whose probability exceeds the pruning threshold.
    #[inline]
    pub fn branches(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        let eps = T::lit(tolerance::PROB_EPS);
        let f = self.bet.fraction;
        let (up_mult, down_mult) = match self.bet.bet_on {
            BetDirection::Up => (T::one() + f, T::one() - f),
            BetDirection::Down => (T::one() - f, T::one() + f),
        };
        [(self.p_up, up_mult, self.xi_up), (self.p_down(), down_mult, self.xi_down)]
            .into_iter()
            .filter(move |(p, _, _)| *p > eps)
            .map(|(p, m, x)| (p, m.log2(), x))
    }

    /// Wealth multiplier `1 +- f` applied on `outcome`.
    pub fn multiplier(&self, outcome: Outcome) -> T {
        if self.bet.bet_on.wins(outcome) {
            T::one() + self.bet.fraction
        } else {
            T::one() - self.bet.fraction
        }
    }
}

/// Closed-form last-round angle maximising the spin-up probability.
///
/// Roots of `tan²a sinδ cosδ + tan a (ξ/(1-ξ) + 1 - 2 sin²δ) - sinδ cosδ = 0`,
/// i.e. `tan a = -A/2 ± sqrt(A² + 4)/2` with
/// `A = (ξ/(1-ξ) + 1 - 2 sin²δ) / (sinδ cosδ)`. Both roots are evaluated and
/// the one with the larger `p_up` is returned.
///
/// Fails with [`Error::DegenerateDelta`] when `sinδ cosδ` vanishes.
pub fn growth_angle_closed_form<T: Scalar>(xi: Prior<T>, delta: Angle<T>) -> Result<Angle<T>> {
    let d = delta.radians();
    let eps = T::lit(tolerance::DEGENERATE_ANGLE);
    if d <= eps || (d - T::FRAC_PI_2()).abs() <= eps {
        return Err(Error::DegenerateDelta { delta: d.to_f64_lossy() });
    }
    let x = xi.value();
    if x >= T::one() {
        return Ok(Angle::zero());
    }
    if x <= T::zero() {
        return Ok(delta);
    }
    let (s, c) = d.sin_cos();
    let a = (x / (T::one() - x) + T::one() - T::two() * s * s) / (s * c);
    let root = (a * a + T::lit(4.0)).sqrt();
    // Product of the two roots is -1; pick the cancellation-free expression.
    let t_plus = if a >= T::zero() { T::two() / (a + root) } else { (root - a) / T::two() };
    let t_minus = -T::one() / t_plus;
    let first = Angle::new(t_plus.atan());
    let second = Angle::new(t_minus.atan());
    Ok(pick_larger_p(xi, delta, first, second))
}

fn pick_larger_p<T: Scalar>(xi: Prior<T>, delta: Angle<T>, a: Angle<T>, b: Angle<T>) -> Angle<T> {
    let pa = spin_up_prob(xi, a, delta);
    let pb = spin_up_prob(xi, b, delta);
    let tie = T::lit(tolerance::TIE_EPS);
    if pa > pb + tie {
        a
    } else if pb > pa + tie {
        b
    } else if a.radians() <= b.radians() {
        a
    } else {
        b
    }
}

/// Angle maximising this round's win probability (the myopic, growth-only
/// choice).
///
/// Uses [`growth_angle_closed_form`] for `0 < delta < pi/2`. For identical
/// states (`delta = 0`) returns `0`. For orthogonal states (`delta = pi/2`)
/// `p_up = 1/2 + (xi - 1/2) cos 2a`, maximised at `0` for `xi > 1/2`, at
/// `pi/2` for `xi < 1/2`; every angle ties at `xi = 1/2` and `delta/2` is
/// returned.
pub fn myopic_growth_angle<T: Scalar>(xi: Prior<T>, delta: Angle<T>) -> Angle<T> {
    match growth_angle_closed_form(xi, delta) {
        Ok(a) => a,
        Err(_) if delta.radians() <= T::lit(tolerance::DEGENERATE_ANGLE) => Angle::zero(),
        Err(_) => {
            let x = xi.value();
            if x > T::half() {
                Angle::zero()
            } else if x < T::half() {
                Angle::new(T::FRAC_PI_2())
            } else {
                Angle::new(delta.radians() / T::two())
            }
        }
    }
}

/// Axis that leaves the prior unchanged whatever the outcome: `delta / 2`.
pub fn prior_preserving_angle<T: Scalar>(delta: Angle<T>) -> Angle<T> {
    Angle::new(delta.radians() / T::two())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    fn pr(x: f64) -> Prior<f64> {
        Prior::new(x).unwrap()
    }
    fn an(x: f64) -> Angle<f64> {
        Angle::new(x)
    }

    #[test]
    fn angle_canonicalisation() {
        assert_abs_diff_eq!(an(-0.25).radians(), PI - 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(an(PI + 0.5).radians(), 0.5, epsilon = 1e-15);
        assert_eq!(an(PI).radians(), 0.0);
        assert_eq!(an(-PI).radians(), 0.0);
        assert_abs_diff_eq!(an(0.1).axis_distance(an(PI - 0.1)), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn prior_and_wealth_validation() {
        assert!(Prior::new(1.2).is_err());
        assert!(Prior::new(-0.1).is_err());
        assert!(Prior::new(f64::NAN).is_err());
        assert!(Wealth::new(0.0).is_err());
        assert!(Wealth::<f64>::new(f64::INFINITY).is_err());
        assert!(GameParams::new(1.6, 3, 0.5).is_err());
        assert!(GameParams::new(0.5, 0, 0.5).is_err());
        assert!(GameParams::new(0.0, 3, 0.5).unwrap().is_degenerate());
        assert!(GameParams::from_degrees(90.0, 3, 0.5).is_ok());
    }

    #[test]
    fn spin_up_prob_examples() {
        assert_abs_diff_eq!(spin_up_prob(pr(1.0), an(0.0), an(FRAC_PI_3)), 1.0);
        assert_abs_diff_eq!(
            spin_up_prob(pr(0.5), an(FRAC_PI_6), an(FRAC_PI_3)),
            0.75,
            epsilon = 1e-15
        );
        for a in [0.0, 0.3, 1.1, 2.9] {
            assert_abs_diff_eq!(
                spin_up_prob(pr(0.5), an(a), an(FRAC_PI_2)),
                0.5,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn posterior_examples() {
        let d = an(FRAC_PI_3);
        for x in [0.0, 0.2, 0.77, 1.0] {
            for o in Outcome::BOTH {
                let post = posterior(pr(x), an(FRAC_PI_6), d, o).unwrap();
                assert_abs_diff_eq!(post.value(), x, epsilon = 1e-15);
            }
        }
        let up = posterior(pr(0.5), an(0.0), an(FRAC_PI_2), Outcome::Up).unwrap();
        assert_abs_diff_eq!(up.value(), 1.0, epsilon = 1e-15);

        // Martingale at (0.3, pi/9, pi/3), both branches evaluated directly.
        let (x, a) = (0.3, PI / 9.0);
        let p = spin_up_prob(pr(x), an(a), d);
        let xu = posterior(pr(x), an(a), d, Outcome::Up).unwrap().value();
        let xd = posterior(pr(x), an(a), d, Outcome::Down).unwrap().value();
        assert_abs_diff_eq!(p * xu + (1.0 - p) * xd, 0.3, epsilon = 1e-12);
    }

    #[test]
    fn posterior_on_impossible_outcome_fails() {
        // Orthogonal states, certain reference state, axis orthogonal to it.
        let err = posterior(pr(1.0), an(FRAC_PI_2), an(FRAC_PI_2), Outcome::Up);
        assert!(matches!(err, Err(Error::ZeroProbabilityOutcome)));
        let err = posterior(pr(1.0), an(0.0), an(FRAC_PI_3), Outcome::Down);
        assert!(matches!(err, Err(Error::ZeroProbabilityOutcome)));
    }

    #[test]
    fn kelly_examples() {
        let k = kelly_decision(0.75);
        assert_eq!((k.fraction, k.bet_on), (0.5, BetDirection::Up));
        let k = kelly_decision(0.5);
        assert_eq!((k.fraction, k.bet_on), (0.0, BetDirection::Up));
        let k = kelly_decision(0.25);
        assert_eq!((k.fraction, k.bet_on), (0.5, BetDirection::Down));
    }

    #[test]
    fn apply_bet_examples() {
        let d = RoundDecision { alpha: an(0.0), fraction: 0.5, bet_on: BetDirection::Up };
        assert_eq!(apply_bet(Wealth::one(), &d, Outcome::Up).unwrap().value(), 1.5);
        assert_eq!(apply_bet(Wealth::one(), &d, Outcome::Down).unwrap().value(), 0.5);
        let z = RoundDecision::no_bet(an(0.0));
        let w2 = Wealth::new(2.0).unwrap();
        for o in Outcome::BOTH {
            assert_eq!(apply_bet(w2, &z, o).unwrap().value(), 2.0);
        }
        let all_in = RoundDecision { alpha: an(0.0), fraction: 1.0, bet_on: BetDirection::Down };
        assert!(matches!(apply_bet(w2, &all_in, Outcome::Up), Err(Error::BankruptWealth)));
        let bad = RoundDecision { alpha: an(0.0), fraction: 1.5, bet_on: BetDirection::Up };
        assert!(apply_bet(w2, &bad, Outcome::Up).is_err());
    }

    #[test]
    fn one_step_growth_examples() {
        assert_eq!(one_step_growth(1.0), 1.0);
        assert_eq!(one_step_growth(0.0), 1.0);
        assert_eq!(one_step_growth(0.5), 0.0);
        let expected = 1.0 + 0.75 * 0.75f64.log2() + 0.25 * 0.25f64.log2();
        assert_abs_diff_eq!(one_step_growth(0.75), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(one_step_growth(0.75), 0.18872187554086717, epsilon = 1e-15);
        // Brute-force expectation over the two outcomes with f = 0.5.
        let brute = 0.75 * 1.5f64.log2() + 0.25 * 0.5f64.log2();
        assert_abs_diff_eq!(one_step_growth(0.75), brute, epsilon = 1e-15);
        assert_abs_diff_eq!(one_step_growth(0.2), one_step_growth(0.8), epsilon = 1e-15);
    }

    #[test]
    fn myopic_angle_limits_and_midpoint() {
        let d = an(FRAC_PI_3);
        assert_eq!(myopic_growth_angle(pr(1.0), d).radians(), 0.0);
        assert_abs_diff_eq!(myopic_growth_angle(pr(0.0), d).radians(), FRAC_PI_3);
        for deg in [7.5f64, 30.0, 45.0, 60.0, 89.0] {
            let d = an(deg.to_radians());
            assert_abs_diff_eq!(
                myopic_growth_angle(pr(0.5), d).radians(),
                deg.to_radians() / 2.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn myopic_angle_matches_phasor_maximiser() {
        // p_up = 1/2 + (xi cos 2a + (1 - xi) cos(2d - 2a)) / 2 peaks where 2a is
        // the argument of xi (1, 0) + (1 - xi) (cos 2d, sin 2d).
        for &x in &[0.05, 0.3, 0.7, 0.999_999] {
            for &d in &[0.1, 0.7, FRAC_PI_4, 1.5] {
                let expect = 0.5 * ((1.0 - x) * (2.0 * d).sin()).atan2(x + (1.0 - x) * (2.0 * d).cos());
                let got = myopic_growth_angle(pr(x), an(d));
                assert!(got.axis_distance(an(expect)) < 1e-12, "x={x} d={d}");
            }
        }
    }

    #[test]
    fn closed_form_rejects_degenerate_delta() {
        assert!(matches!(
            growth_angle_closed_form(pr(0.3), an(0.0)),
            Err(Error::DegenerateDelta { .. })
        ));
        assert!(matches!(
            growth_angle_closed_form(pr(0.3), an(FRAC_PI_2)),
            Err(Error::DegenerateDelta { .. })
        ));
        assert_eq!(myopic_growth_angle(pr(0.3), an(0.0)).radians(), 0.0);
        let d = an(FRAC_PI_2);
        assert_eq!(myopic_growth_angle(pr(0.7), d).radians(), 0.0);
        assert_abs_diff_eq!(myopic_growth_angle(pr(0.3), d).radians(), FRAC_PI_2);
        assert_abs_diff_eq!(myopic_growth_angle(pr(0.5), d).radians(), FRAC_PI_4);
    }

    #[test]
    fn works_in_single_precision() {
        let p = spin_up_prob(Prior::new(0.5f32).unwrap(), Angle::new(0.5236f32), Angle::new(1.0472f32));
        assert!((p - 0.75).abs() < 1e-4);
        let a = myopic_growth_angle(Prior::new(0.5f32).unwrap(), Angle::new(1.0f32));
        assert!((a.radians() - 0.5).abs() < 1e-5);
        assert!((one_step_growth(0.75f32) - 0.188_721_9).abs() < 1e-6);
    }

    #[test]
    fn transition_branches_prune_impossible_outcomes() {
        let t = Transition::new(pr(0.0), an(FRAC_PI_3), an(FRAC_PI_3));
        let b: Vec<_> = t.branches().collect();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0], (1.0, 1.0, 0.0));
    }
}
