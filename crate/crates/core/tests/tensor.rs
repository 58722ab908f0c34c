use liefield_core::combinatorics::double_factorial;
use liefield_core::tensor::{
    bivector_integrand, levi_civita, metric, metric_pairing_sum, minkowski_dot,
    q_vacuum_expectation, vector_integrand, vector_kernel, Bivector,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn bivector() -> impl Strategy<Value = Bivector> {
    (
        prop::array::uniform3(-2.0..2.0f64),
        prop::array::uniform3(-2.0..2.0f64),
        prop::array::uniform3(-2.0..2.0f64),
    )
        .prop_map(|(e, b, im)| {
            Bivector::from_fields(
                [C64::new(e[0], im[0]), c(e[1]), c(e[2])],
                [c(b[0]), C64::new(b[1], im[1]), C64::new(b[2], im[2])],
            )
        })
}

/// `prod g` summed over matchings found by pairing the first index with
/// each later one, recursively.
fn pairing_oracle(idx: &[usize]) -> i64 {
    if idx.is_empty() {
        return 1;
    }
    if idx.len() % 2 == 1 {
        return 0;
    }
    (1..idx.len())
        .map(|j| {
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != 0 && *i != j)
                .map(|(_, x)| *x)
                .collect();
            metric(idx[0], idx[j]) as i64 * pairing_oracle(&rest)
        })
        .sum()
}

proptest! {
    #[test]
    fn pairing_sum_is_symmetric(idx in prop::collection::vec(0usize..4, 6), perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let s = metric_pairing_sum(6);
        let permuted: Vec<usize> = perm.iter().map(|&i| idx[i]).collect();
        prop_assert_eq!(s.evaluate(&idx), s.evaluate(&permuted));
        prop_assert_eq!(s.evaluate(&idx), pairing_oracle(&idx));
    }

    #[test]
    fn double_dual_is_minus_identity(f in bivector()) {
        let back = f.hodge_dual().hodge_dual();
        let mut neg = f;
        for row in neg.0.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        prop_assert!(back.max_abs_diff(&neg) < 1e-12);
    }

    #[test]
    fn lightlike_integrand_is_two_polarizations(e in prop::array::uniform3(-3.0..3.0f64), b in prop::array::uniform3(-3.0..3.0f64), u0 in 0.1..5.0f64) {
        let f = Bivector::from_fields([c(e[0]), c(e[1]), c(e[2])], [c(b[0]), c(b[1]), c(b[2])]);
        let u = [u0, 0.0, 0.0, u0];
        let got = bivector_integrand(&f, &f, u);
        let want = u0 * u0 * ((e[0] + b[1]).powi(2) + (e[1] - b[0]).powi(2));
        prop_assert!((got - c(want)).norm() <= 1e-12 * (1.0 + want.abs()), "{} vs {}", got, want);
    }

    #[test]
    fn lightlike_quadratic_form_is_positive(f in bivector(), dir in prop::array::uniform3(-1.0..1.0f64), u0 in 0.1..3.0f64) {
        let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        prop_assume!(n > 1e-3);
        let u = [u0, u0 * dir[0] / n, u0 * dir[1] / n, u0 * dir[2] / n];
        prop_assert!(minkowski_dot(u, u).abs() < 1e-12);
        let v = bivector_integrand(&f, &f, u);
        prop_assert!(v.re >= -1e-12 && v.im.abs() < 1e-12, "{}", v);
    }

    #[test]
    fn timelike_vector_kernel_is_positive(uvec in prop::array::uniform4(-2.0..2.0f64), v in prop::array::uniform3(-0.9..0.9f64), a_t in 0.0..2.0f64, a_s in 0.0..2.0f64) {
        let u = [1.0, v[0] / 2.0, v[1] / 2.0, v[2] / 2.0];
        let w = uvec.map(c);
        let val = vector_integrand(w, w, u, a_t, a_s);
        prop_assert!(val.re >= -1e-12, "{}", val);
    }
}

#[test]
fn pairing_counts_are_double_factorials() {
    for k in (2..=8).step_by(2) {
        assert_eq!(
            metric_pairing_sum(k).terms.len() as u128,
            double_factorial(k as i64 - 1),
            "k={k}"
        );
    }
    assert_eq!(metric_pairing_sum(4).terms.len(), 3);
    assert_eq!(metric_pairing_sum(6).terms.len(), 15);
    for k in [1, 3, 5] {
        let s = metric_pairing_sum(k);
        assert!(s.terms.is_empty());
        assert_eq!(s.evaluate(&vec![0; k]), 0);
    }
}

#[test]
fn four_index_pairing_display() {
    let s = metric_pairing_sum(4);
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    let want = metric(a, b) * metric(cc, d)
                        + metric(a, cc) * metric(b, d)
                        + metric(a, d) * metric(b, cc);
                    assert_eq!(s.evaluate(&[a, b, cc, d]), want as i64);
                }
            }
        }
    }
}

#[test]
fn q_vacuum_matches_pairing_sums() {
    let s4 = metric_pairing_sum(4);
    for idx in [
        [0, 0, 0, 0],
        [0, 0, 1, 1],
        [1, 2, 1, 2],
        [3, 3, 3, 3],
        [0, 1, 2, 3],
    ] {
        assert_eq!(
            q_vacuum_expectation(&idx, false),
            s4.evaluate(&idx),
            "{idx:?}"
        );
        assert_eq!(
            q_vacuum_expectation(&idx, true),
            s4.evaluate(&idx),
            "{idx:?}"
        );
    }
    for a in 0..4 {
        assert_eq!(q_vacuum_expectation(&[a, a], false), metric(a, a) as i64);
        assert_eq!(q_vacuum_expectation(&[a, a], true), -metric(a, a) as i64);
    }
    assert_eq!(q_vacuum_expectation(&[0, 1, 2], false), 0);
}

#[test]
fn hodge_dual_basics() {
    assert_eq!(
        Bivector::zero()
            .hodge_dual()
            .max_abs_diff(&Bivector::zero()),
        0.0
    );
    let e1 = Bivector::from_fields([c(1.0), c(0.0), c(0.0)], [c(0.0); 3]);
    let (e, b) = e1.hodge_dual().fields();
    assert!(e.iter().all(|x| x.norm() < 1e-15));
    assert!((b[0].norm() - 1.0).abs() < 1e-15 && b[1].norm() < 1e-15 && b[2].norm() < 1e-15);
    assert_eq!(levi_civita([0, 1, 2, 3]), 1);
    assert_eq!(levi_civita([1, 0, 2, 3]), -1);
    assert_eq!(levi_civita([0, 0, 2, 3]), 0);
}

#[test]
fn vector_kernel_limits() {
    let u = [2.0, 0.5, 0.3, -0.2];
    let w = [c(1.0), c(-0.4), c(0.7), c(0.2)];
    assert_eq!(vector_integrand(w, w, u, 0.0, 0.0), c(0.0));
    assert_eq!(vector_kernel([1.0, 1.0, 0.0, 0.0], 1.0, 1.0), [[0.0; 4]; 4]);
    let longitudinal = [
        c(1.5 * u[0]),
        c(-1.5 * u[1]),
        c(-1.5 * u[2]),
        c(-1.5 * u[3]),
    ];
    let got = vector_integrand(longitudinal, longitudinal, u, 0.7, 0.0);
    let want = 0.7 * 1.5 * 1.5 * minkowski_dot(u, u);
    assert!((got - c(want)).norm() < 1e-12, "{got} vs {want}");
}
