use ctl_core::fd::DEFAULT_STEP;
use ctl_core::flows::total_legendre_field;
use ctl_core::phasespace::{
    eval_deta, eval_eta, lie_derivative_oneform, p_index, q_index, reeb, volume_form_coefficient, OneFormField,
};
use ctl_core::sampling::PointSampler;
use ctl_core::DarbouxPoint;
use nalgebra::DMatrix;

/// Pfaffian by expansion along the first row.
fn pfaffian(a: &DMatrix<f64>) -> f64 {
    let m = a.nrows();
    if m == 0 {
        return 1.0;
    }
    let mut total = 0.0;
    for j in 1..m {
        if a[(0, j)] == 0.0 {
            continue;
        }
        let keep: Vec<usize> = (1..m).filter(|&k| k != j).collect();
        let minor = DMatrix::from_fn(keep.len(), keep.len(), |r, c| a[(keep[r], keep[c])]);
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * a[(0, j)] * pfaffian(&minor);
    }
    total
}

/// `eta ^ (d eta)^n` on the ordered basis: `eta` must eat `d/dPhi` because
/// `d eta` annihilates it, leaving `n!` times the Pfaffian of the `(q, p)`
/// block of `d eta`.
fn volume_oracle(n: usize) -> f64 {
    let w = eval_deta(n).unwrap();
    let block = w.matrix().view((1, 1), (2 * n, 2 * n)).into_owned();
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    factorial * pfaffian(&block)
}

#[test]
fn volume_coefficient_matches_pfaffian_oracle() {
    let mut s = PointSampler::new(11);
    for n in 1..=3 {
        let oracle = volume_oracle(n);
        let at_origin = volume_form_coefficient(&DarbouxPoint::origin(n).unwrap()).unwrap();
        assert!((at_origin - oracle).abs() < 1e-12, "n={n}: {at_origin} vs {oracle}");
        for _ in 0..5 {
            let x = s.point(n, 2.0).unwrap();
            let c = volume_form_coefficient(&x).unwrap();
            assert!((c - at_origin).abs() < 1e-12, "point dependence at n={n}");
        }
    }
    assert_eq!(volume_oracle(1), 1.0);
    assert_eq!(volume_oracle(2), -2.0);
}

#[test]
fn reeb_identities_at_many_points() {
    let mut s = PointSampler::new(2024);
    let r = reeb(2).unwrap();
    let w = eval_deta(2).unwrap();
    assert!(w.is_antisymmetric());
    for x in s.points(2, 10_000).unwrap() {
        assert_eq!(eval_eta(&x).contract(&r), 1.0);
        assert!(w.interior(&r).iter().all(|v| *v == 0.0));
    }
}

#[test]
fn legendre_generator_preserves_eta() {
    let field = total_legendre_field(2).unwrap();
    let eta = OneFormField::eta(2).unwrap();
    let mut s = PointSampler::new(5);
    for x in s.points(2, 100).unwrap() {
        let l = lie_derivative_oneform(&field, &eta, &x, DEFAULT_STEP).unwrap();
        assert!(l.norm() < 1e-7, "{x}: {}", l.norm());
    }
}

#[test]
fn analytic_and_fd_lie_derivatives_agree() {
    let h = DEFAULT_STEP;
    // a field that does not preserve eta, so the comparison is nontrivial
    let field = ctl_core::flows::hamiltonian_vector_field(
        &ctl_core::flows::ContactHamiltonian::from_fn(2, "q1^2 p2", |x| Ok(x.q()[0].powi(2) * x.p()[1]))
            .unwrap(),
    );
    let stretched = OneFormField::new(2, "q1 eta", |x| Ok(ctl_core::phasespace::eval_eta(x).0 * x.q()[0]))
        .with_derivative(|x| {
            let n = 2;
            let e = eval_eta(x).0;
            let mut d = DMatrix::zeros(5, 5);
            for a in 0..5 {
                d[(a, q_index(0))] = e[a];
            }
            for a in 0..n {
                d[(q_index(a), p_index(n, a))] = -x.q()[0];
            }
            Ok(d)
        });
    let analytic_field = total_legendre_field(2).unwrap();
    let mut s = PointSampler::new(9);
    for x in s.points(2, 50).unwrap() {
        for (f, w) in [(&field, &stretched), (&analytic_field, &stretched)] {
            let exact = lie_derivative_oneform(f, w, &x, h).unwrap();
            let approx = lie_derivative_oneform(
                &f.clone().without_jacobian(),
                &w.clone().without_derivative(),
                &x,
                h,
            )
            .unwrap();
            let scale = exact.norm().max(1.0);
            assert!((exact.0 - approx.0).norm() <= 10.0 * h * h * scale, "{x}");
        }
    }
}
