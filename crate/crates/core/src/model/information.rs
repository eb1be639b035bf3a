use crate::error::{Error, Result};
use crate::model::{conditional_up_probs, spin_up_prob, Angle, Prior, Transition};
use crate::optimize::{optimize_alpha, AlphaSearch};
use crate::scalar::Scalar;
use crate::tolerance;

/// Binary Shannon entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy<T: Scalar>(x: T) -> T {
    let x = x.clamp_unit();
    -(x.xlog2x() + (T::one() - x).xlog2x())
}

/// Expected drop in the prior's entropy from one measurement along `alpha`:
/// `H2(xi) - [p_up H2(xi_up) + p_down H2(xi_down)]`.
pub fn expected_entropy_reduction<T: Scalar>(xi: Prior<T>, alpha: Angle<T>, delta: Angle<T>) -> T {
    let t = Transition::new(xi, alpha, delta);
    let eps = T::lit(tolerance::PROB_EPS);
    let mut after = T::zero();
    if t.p_up > eps {
        after = after + t.p_up * binary_entropy(t.xi_up);
    }
    if t.p_down() > eps {
        after = after + t.p_down() * binary_entropy(t.xi_down);
    }
    binary_entropy(xi.value()) - after
}

/// Closed-form "information-optimal" axis
/// `atan((xi - 1) sin δ / (xi - (1 - xi) cos δ))`, reduced mod pi.
///
/// This is a literal transcription. It is not claimed to maximise
/// [`expected_entropy_reduction`]; at `xi = 1/2` it lands on `δ/2 + pi/2`,
/// where the posterior does not move at all. See
/// [`crate::report::info_gain_discrepancy`].
pub fn info_gain_angle_formula<T: Scalar>(xi: Prior<T>, delta: Angle<T>) -> Result<Angle<T>> {
    let x = xi.value();
    let d = delta.radians();
    let den = x - (T::one() - x) * d.cos();
    if den.abs() <= T::lit(tolerance::FORMULA_DENOMINATOR) {
        return Err(Error::UndefinedFormula { xi: x.to_f64_lossy(), delta: d.to_f64_lossy() });
    }
    let num = (x - T::one()) * d.sin();
    Ok(Angle::new((num / den).atan()))
}

/// Numerical maximiser of [`expected_entropy_reduction`] over the axis, with
/// the default search resolution.
pub fn info_gain_angle_numeric<T: Scalar>(xi: Prior<T>, delta: Angle<T>) -> Result<Angle<T>> {
    info_gain_angle_numeric_with(xi, delta, &AlphaSearch::default())
}

/// As [`info_gain_angle_numeric`] with an explicit search configuration.
///
/// A coarse scan plus golden-section search locates the maximum; the result
/// is then polished by bisection on the analytic derivative of the mutual
/// information, since the objective is too flat at its peak for comparisons
/// of values alone to pin the angle below ~1e-8.
pub fn info_gain_angle_numeric_with<T: Scalar>(
    xi: Prior<T>,
    delta: Angle<T>,
    search: &AlphaSearch<T>,
) -> Result<Angle<T>> {
    if xi.is_certain() {
        return Err(Error::DegeneratePrior { xi: xi.value().to_f64_lossy() });
    }
    let (alpha, _) = optimize_alpha(|a| expected_entropy_reduction(xi, a, delta), search, &[]);
    Ok(polish_stationary(xi, delta, alpha))
}

/// d/dα of `H2(p_up) - xi H2(c0) - (1 - xi) H2(c1)`, the same quantity as the
/// expected entropy reduction written as mutual information.
fn mutual_information_slope<T: Scalar>(xi: T, alpha: T, delta: T) -> T {
    let (c0, c1) = conditional_up_probs(Angle::new(alpha), Angle::new(delta));
    let p = xi * c0 + (T::one() - xi) * c1;
    let dc0 = -(T::two() * alpha).sin();
    let dc1 = (T::two() * (delta - alpha)).sin();
    let dp = xi * dc0 + (T::one() - xi) * dc1;
    let dh = |x: T| ((T::one() - x) / x).log2();
    dh(p) * dp - xi * dh(c0) * dc0 - (T::one() - xi) * dh(c1) * dc1
}

fn polish_stationary<T: Scalar>(xi: Prior<T>, delta: Angle<T>, alpha: Angle<T>) -> Angle<T> {
    let x = xi.value();
    let d = delta.radians();
    let half_width = T::lit(1e-6);
    let mut lo = alpha.radians() - half_width;
    let mut hi = alpha.radians() + half_width;
    let slope_lo = mutual_information_slope(x, lo, d);
    let slope_hi = mutual_information_slope(x, hi, d);
    if !(slope_lo.is_finite() && slope_hi.is_finite())
        || slope_lo <= T::zero()
        || slope_hi >= T::zero()
    {
        return alpha;
    }
    for _ in 0..64 {
        let mid = (lo + hi) / T::two();
        if mid <= lo || mid >= hi {
            break;
        }
        let s = mutual_information_slope(x, mid, d);
        if !s.is_finite() {
            break;
        }
        if s > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let polished = Angle::new((lo + hi) / T::two());
    // Keep the polished angle only if it is at least as informative.
    if expected_entropy_reduction(xi, polished, delta) + T::lit(1e-15)
        >= expected_entropy_reduction(xi, alpha, delta)
    {
        polished
    } else {
        alpha
    }
}

/// Spin-up probability at the numerically information-optimal axis.
pub fn info_gain_p_up<T: Scalar>(xi: Prior<T>, delta: Angle<T>) -> Result<T> {
    let a = info_gain_angle_numeric(xi, delta)?;
    Ok(spin_up_prob(xi, a, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn pr(x: f64) -> Prior<f64> {
        Prior::new(x).unwrap()
    }
    fn an(x: f64) -> Angle<f64> {
        Angle::new(x)
    }

    /// Dense scan of the entropy reduction, independent of the optimiser.
    fn scan_argmax(xi: f64, delta: f64, n: usize) -> (f64, f64) {
        (0..n)
            .map(|i| {
                let a = PI * i as f64 / n as f64;
                (a, expected_entropy_reduction(pr(xi), an(a), an(delta)))
            })
            .fold((0.0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b })
    }

    #[test]
    fn entropy_reduction_zero_cases() {
        for a in [0.0, 0.4, 2.0] {
            assert_eq!(expected_entropy_reduction(pr(0.0), an(a), an(1.0)), 0.0);
            assert_eq!(expected_entropy_reduction(pr(1.0), an(a), an(1.0)), 0.0);
        }
        let r = expected_entropy_reduction(pr(0.5), an(FRAC_PI_3 / 2.0), an(FRAC_PI_3));
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_reduction_peaks_off_the_growth_axis() {
        let d = FRAC_PI_3;
        let peak = expected_entropy_reduction(pr(0.5), an(d / 2.0 + FRAC_PI_4), an(d));
        assert!(peak > 0.0);
        let (_, best) = scan_argmax(0.5, d, 10_000);
        assert!(peak >= best - 1e-12, "peak {peak} below scan max {best}");
    }

    #[test]
    fn formula_examples() {
        // (xi - 1) sin60 / (1/2 - cos60 / 2) = -sqrt(3)  =>  2 pi / 3 mod pi
        let a = info_gain_angle_formula(pr(0.5), an(FRAC_PI_3)).unwrap();
        assert_abs_diff_eq!(a.radians(), 2.0 * FRAC_PI_3, epsilon = 1e-14);
        assert_eq!(info_gain_angle_formula(pr(1.0), an(FRAC_PI_3)).unwrap().radians(), 0.0);
        let a = info_gain_angle_formula(pr(0.4), an(FRAC_PI_2)).unwrap();
        assert_abs_diff_eq!(a.radians(), PI - 1.5f64.atan(), epsilon = 1e-14);
        assert_abs_diff_eq!(a.radians(), PI - 0.98279, epsilon = 1e-5);
    }

    #[test]
    fn formula_undefined_when_denominator_vanishes() {
        // xi = (1 - xi) cos d  <=>  xi = cos d / (1 + cos d)
        let d = FRAC_PI_3;
        let xi = d.cos() / (1.0 + d.cos());
        assert!(matches!(
            info_gain_angle_formula(pr(xi), an(d)),
            Err(Error::UndefinedFormula { .. })
        ));
    }

    #[test]
    fn numeric_angle_at_half_prior() {
        let d = FRAC_PI_3;
        let a = info_gain_angle_numeric(pr(0.5), an(d)).unwrap();
        assert_abs_diff_eq!(a.radians(), d / 2.0 + FRAC_PI_4, epsilon = 1e-9);
        let a = info_gain_angle_numeric(pr(0.5), an(FRAC_PI_2)).unwrap();
        assert!(a.axis_distance(an(0.0)) < 1e-9, "got {a}");
        for deg in [7.5f64, 30.0, 60.0, 90.0] {
            let d = an(deg.to_radians());
            let a = info_gain_angle_numeric(pr(0.5), d).unwrap();
            assert_abs_diff_eq!(spin_up_prob(pr(0.5), a, d), 0.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn numeric_angle_matches_dense_scan() {
        for &(x, d) in &[(0.2, 0.5), (0.6, 1.0), (0.8, 1.3), (0.35, FRAC_PI_2)] {
            let got = info_gain_angle_numeric(pr(x), an(d)).unwrap();
            let (scan, _) = scan_argmax(x, d, 200_000);
            assert!(got.measurement_distance(an(scan)) < 2e-5, "x={x} d={d}: {got} vs {scan}");
        }
    }

    #[test]
    fn numeric_angle_rejects_certain_prior() {
        assert!(matches!(
            info_gain_angle_numeric(pr(0.0), an(1.0)),
            Err(Error::DegeneratePrior { .. })
        ));
        assert!(info_gain_angle_numeric(pr(1.0), an(1.0)).is_err());
    }

    #[test]
    fn numeric_maximum_has_zero_kelly_stake_at_half() {
        let p = info_gain_p_up(pr(0.5), an(1.0)).unwrap();
        assert_eq!(crate::model::kelly_decision(p).fraction < 1e-9, true);
    }
}
