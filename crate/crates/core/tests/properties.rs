use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use proptest::prelude::*;
use spin_kelly::model::{expected_entropy_reduction, prior_preserving_angle};
use spin_kelly::report::export::fmt_num;
use spin_kelly::*;

fn prior() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(0.5), Just(1.0), 0.0..=1.0]
}

fn angle() -> impl Strategy<Value = f64> {
    0.0..PI
}

fn delta() -> impl Strategy<Value = f64> {
    prop_oneof![Just(FRAC_PI_2), 1e-4..=FRAC_PI_2]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn posteriors_average_back_to_the_prior(x in prior(), a in angle(), d in delta()) {
        let (xi, alpha, delta) = (Prior64::new(x).unwrap(), Angle64::new(a), Angle64::new(d));
        let p = spin_up_prob(xi, alpha, delta);
        prop_assert!((0.0..=1.0).contains(&p));
        let mut mean = 0.0;
        for (o, w) in [(Outcome::Up, p), (Outcome::Down, 1.0 - p)] {
            if w > 1e-12 {
                let post = posterior(xi, alpha, delta, o).unwrap().value();
                prop_assert!((0.0..=1.0).contains(&post));
                mean += w * post;
            }
        }
        prop_assert!((mean - x).abs() < 1e-9);
    }

    #[test]
    fn mirror_symmetry(x in prior(), a in angle(), d in delta()) {
        let delta = Angle64::new(d);
        let lhs = spin_up_prob(Prior64::new(x).unwrap(), Angle64::new(a), delta);
        let rhs = spin_up_prob(Prior64::new(1.0 - x).unwrap(), Angle64::new(d - a), delta);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn bisecting_axis_leaves_the_prior_alone(x in 1e-6..1.0 - 1e-6, d in delta()) {
        let xi = Prior64::new(x).unwrap();
        let delta = Angle64::new(d);
        let half = prior_preserving_angle(delta);
        for o in [Outcome::Up, Outcome::Down] {
            if let Ok(post) = posterior(xi, half, delta, o) {
                prop_assert!((post.value() - x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kelly_stake_beats_nearby_stakes(p in 0.0..=1.0f64, df in -0.2..0.2f64) {
        let bet = kelly_decision(p);
        prop_assert!((0.0..=1.0).contains(&bet.fraction));
        let signed = match bet.bet_on { BetDirection::Up => bet.fraction, BetDirection::Down => -bet.fraction };
        let g = |f: f64| {
            let up = if p > 0.0 { p * (1.0 + f).log2() } else { 0.0 };
            let down = if p < 1.0 { (1.0 - p) * (1.0 - f).log2() } else { 0.0 };
            up + down
        };
        let other = (signed + df).clamp(-0.999_999, 0.999_999);
        prop_assert!(one_step_growth(p) + 1e-12 >= g(other));
        prop_assert!((0.0..=1.0).contains(&one_step_growth(p)));
    }

    #[test]
    fn bets_keep_wealth_positive(x in prior(), a in angle(), d in delta(), w in 1e-3..1e3f64) {
        let (xi, alpha, delta) = (Prior64::new(x).unwrap(), Angle64::new(a), Angle64::new(d));
        let decision = RoundDecision::kelly(alpha, spin_up_prob(xi, alpha, delta));
        for o in [Outcome::Up, Outcome::Down] {
            if posterior(xi, alpha, delta, o).is_ok() {
                let next = apply_bet(Wealth64::new(w).unwrap(), &decision, o);
                if let Ok(next) = next {
                    prop_assert!(next.value() > 0.0);
                }
            }
        }
    }

    #[test]
    fn entropy_reduction_is_nonnegative(x in prior(), a in angle(), d in delta()) {
        let h = expected_entropy_reduction(Prior64::new(x).unwrap(), Angle64::new(a), Angle64::new(d));
        prop_assert!(h >= -1e-12 && h <= 1.0 + 1e-12);
    }

    #[test]
    fn measurement_distance_is_at_most_an_eighth_turn(a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let d = Angle64::new(a).measurement_distance(Angle64::new(b));
        prop_assert!((0.0..=FRAC_PI_4 + 1e-12).contains(&d));
        prop_assert!(Angle64::new(a).measurement_distance(Angle64::new(a + FRAC_PI_2)) < 1e-12);
    }

    #[test]
    fn prior_cells_bracket_the_query(n in 1usize..200, uniform in any::<bool>(), x in prior()) {
        let grid = GridSpec64 {
            n_xi: 2 * n + 1,
            xi_spacing: if uniform { XiSpacing::Uniform } else { XiSpacing::LogMirrored },
            ..Default::default()
        };
        let axis = grid.xi_axis();
        let nodes = axis.nodes();
        let c = axis.locate(x);
        prop_assert!(c.index + 1 < nodes.len());
        prop_assert!(nodes[c.index] <= x && x <= nodes[c.index + 1]);
        prop_assert!((nodes[c.index] + c.t * (nodes[c.index + 1] - nodes[c.index]) - x).abs() < 1e-15);
    }

    #[test]
    fn monotone_cubic_stays_inside_cell_range(values in prop::collection::vec(-5.0..5.0f64, 9), x in 0.0..=1.0f64) {
        let grid = GridSpec64 { n_xi: 9, xi_spacing: XiSpacing::Uniform, ..Default::default() };
        let axis = grid.xi_axis();
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let slopes = axis.pchip_slopes(&sorted);
        let v = axis.interp_hermite(&sorted, &slopes, x);
        let c = axis.locate(x);
        prop_assert!(v >= sorted[c.index] - 1e-12 && v <= sorted[c.index + 1] + 1e-12);
    }

    #[test]
    fn seventeen_digits_round_trip(x in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let back: f64 = fmt_num(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn value_curves_keep_their_shape(deg in 1.0..=90.0f64, n in 1usize..6) {
        let p = GameParams64::from_degrees(deg, n, 0.5).unwrap();
        let s = solve_1d(&p, &GridSpec64 { n_xi: 201, ..Default::default() }).unwrap();
        let nodes = s.xi_axis().nodes().to_vec();
        for k in 0..=n {
            let g = &s.curve(k).g_values;
            prop_assert_eq!(g[0], (n - k) as f64);
            prop_assert_eq!(*g.last().unwrap(), (n - k) as f64);
            for (j, &x) in nodes.iter().enumerate() {
                prop_assert!(g[j] >= 0.0 && g[j] <= (n - k) as f64 + 1e-12);
                // Coarse grid: the lookahead ripples by a few 1e-6.
                prop_assert!((g[j] - s.g(k, 1.0 - x)).abs() < 2e-5);
                if k < n {
                    prop_assert!(g[j] >= s.curve(k + 1).g_values[j]);
                }
            }
        }
    }
}
