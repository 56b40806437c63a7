use std::f64::consts::FRAC_PI_4;

use ctl_core::fd::DEFAULT_STEP;
use ctl_core::flows::{total_legendre_field, LegendreMap};
use ctl_core::metriclab::{
    build_metric, discrete_isometry_residual, flow_pullback_residual, flow_recurrence_residual, k_contact_residual,
    killing_residual, lie_derivative_metric, poisson_constraint_residual, GtdPartialParams, GtdTotalParams,
    MetricFamily, OmegaFunction, OMEGA_FLOOR,
};
use ctl_core::sampling::PointSampler;
use ctl_core::DarbouxPoint;
use proptest::prelude::*;

fn gtd_total() -> MetricFamily {
    MetricFamily::GtdTotal(GtdTotalParams::identity(OmegaFunction::constant(2, 1.0).unwrap()))
}

fn gtd_partial(k: u32) -> MetricFamily {
    MetricFamily::GtdPartial(GtdPartialParams {
        k,
        omega: OmegaFunction::constant(2, 1.0).unwrap(),
    })
}

fn frozen_point() -> DarbouxPoint {
    DarbouxPoint::new(0.0, vec![1.0, 1.0], vec![1.0, 1.0]).unwrap()
}

fn usable_points(seed: u64, count: usize, omega: &OmegaFunction) -> Vec<DarbouxPoint> {
    let mut s = PointSampler::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = s.point(2, 2.0).unwrap();
        if omega.value(&x).unwrap().abs() >= OMEGA_FLOOR {
            out.push(x);
        }
    }
    out
}

#[test]
fn invariant_registry_satisfies_constraint_and_killing_equation() {
    let field = total_legendre_field(2).unwrap();
    for omega in OmegaFunction::invariant_registry().unwrap() {
        let metric = build_metric(&MetricFamily::Epsilon(omega.clone())).unwrap();
        let fd_metric = metric.clone().without_derivatives();
        let fd_field = field.clone().without_jacobian();
        for x in usable_points(42, 100, &omega) {
            assert!(poisson_constraint_residual(&omega, &x, DEFAULT_STEP).unwrap().abs() < 1e-9);
            let exact = killing_residual(&field, &metric, &x, DEFAULT_STEP).unwrap();
            assert!(exact < 1e-9, "{} at {x}: {exact}", omega.label());
            let approx = killing_residual(&fd_field, &fd_metric, &x, DEFAULT_STEP).unwrap();
            assert!(approx < 1e-5, "{} at {x}: {approx}", omega.label());
        }
    }
}

#[test]
fn violating_functions_leave_twice_the_bracket() {
    // For the epsilon class, |L_X G|_F = 2 |{h, Omega}| exactly.
    let field = total_legendre_field(2).unwrap();
    let cases = [
        OmegaFunction::coordinate_q(1, 2).unwrap(),
        OmegaFunction::sum(&OmegaFunction::constant(2, 3.0).unwrap(), &OmegaFunction::coordinate_q(2, 2).unwrap())
            .unwrap(),
    ];
    for omega in cases {
        let metric = build_metric(&MetricFamily::Epsilon(omega.clone())).unwrap();
        for x in usable_points(8, 50, &omega) {
            let bracket = poisson_constraint_residual(&omega, &x, DEFAULT_STEP).unwrap();
            let r = killing_residual(&field, &metric, &x, DEFAULT_STEP).unwrap();
            assert!((r - 2.0 * bracket.abs()).abs() < 1e-9 * (1.0 + r));
            if bracket.abs() > 1e-3 {
                assert!(r > 1e-3);
            }
        }
    }
}

#[test]
fn gtd_families_fail_the_killing_equation_at_the_frozen_point() {
    // Rotating each pair, L_X (c dq.dp) = c' dq.dp + c (dq dq - dp dp). At
    // q = p = 1 the first term vanishes and the diagonal carries +-c per
    // pair: c = q_a p_a = 1 gives |L|_F = 2, c = sum q_a p_a = 2 gives 4.
    let field = total_legendre_field(2).unwrap();
    let x = frozen_point();
    for (family, golden) in [(gtd_partial(0), 2.0), (gtd_total(), 4.0)] {
        let metric = build_metric(&family).unwrap();
        let exact = killing_residual(&field, &metric, &x, DEFAULT_STEP).unwrap();
        let approx =
            killing_residual(&field.clone().without_jacobian(), &metric.without_derivatives(), &x, DEFAULT_STEP)
                .unwrap();
        assert!((exact - golden).abs() < 1e-12, "{}: {exact}", family.name());
        assert!((approx - golden).abs() < 1e-6, "{}: {approx}", family.name());
    }
}

#[test]
fn families_are_k_contact() {
    let mut s = PointSampler::new(77);
    for family in [gtd_total(), gtd_partial(0), gtd_partial(2), MetricFamily::Epsilon(OmegaFunction::cross_dot().unwrap())] {
        let metric = build_metric(&family).unwrap();
        for x in s.points(2, 20).unwrap() {
            assert!(k_contact_residual(&metric, &x, DEFAULT_STEP).unwrap() < 1e-12);
        }
    }
}

#[test]
fn discrete_isometries() {
    let mut s = PointSampler::new(2718);
    let points = s.points(2, 100).unwrap();
    let total = LegendreMap::total(2).unwrap();
    for k in [0, 1, 2] {
        let metric = build_metric(&gtd_partial(k)).unwrap();
        for map in LegendreMap::all(2).unwrap() {
            for x in &points {
                assert!(discrete_isometry_residual(&metric, &map, x).unwrap() < 1e-10, "k={k} map={map}");
            }
        }
    }
    let metric = build_metric(&gtd_total()).unwrap();
    for x in &points {
        assert!(discrete_isometry_residual(&metric, &total, x).unwrap() < 1e-10);
    }
    for map in LegendreMap::all(2).unwrap().into_iter().filter(|m| !m.is_total()) {
        let r = discrete_isometry_residual(&metric, &map, &frozen_point()).unwrap();
        assert!(r > 1e-3, "gtd_total is not invariant under {map}: {r}");
    }
}

#[test]
fn quarter_turn_recurrence_but_not_eighth_turn() {
    let x = DarbouxPoint::new(0.2, vec![0.9, -0.4], vec![0.3, 1.1]).unwrap();
    for family in [gtd_total(), gtd_partial(0)] {
        let metric = build_metric(&family).unwrap();
        let r = flow_recurrence_residual(&metric, &x, 1e-3).unwrap();
        assert!(r < 1e-6, "{}: {r}", family.name());
        let eighth = flow_pullback_residual(&metric, &x, FRAC_PI_4, 1e-3).unwrap();
        assert!(eighth > 1e-3, "{}: {eighth}", family.name());
    }
}

proptest! {
    #[test]
    fn lie_derivative_is_symmetric(c in prop::collection::vec(-2.0..2.0f64, 5)) {
        let x = DarbouxPoint::from_coords(&c).unwrap();
        let field = total_legendre_field(2).unwrap();
        for family in [gtd_total(), gtd_partial(1)] {
            let l = lie_derivative_metric(&field, &build_metric(&family).unwrap(), &x, DEFAULT_STEP).unwrap();
            prop_assert!((l.clone() - l.transpose()).abs().max() == 0.0);
        }
    }

    #[test]
    fn analytic_metric_derivatives_match_differences(c in prop::collection::vec(-2.0..2.0f64, 5)) {
        let x = DarbouxPoint::from_coords(&c).unwrap();
        for family in [gtd_total(), gtd_partial(1), MetricFamily::Epsilon(OmegaFunction::total_norm(2).unwrap())] {
            let metric = build_metric(&family).unwrap();
            let exact = metric.derivatives(&x, DEFAULT_STEP).unwrap();
            let approx = metric.clone().without_derivatives().derivatives(&x, DEFAULT_STEP).unwrap();
            for (a, b) in exact.iter().zip(&approx) {
                prop_assert!((a - b).abs().max() < 1e-6 * (1.0 + a.abs().max()));
            }
        }
    }
}
