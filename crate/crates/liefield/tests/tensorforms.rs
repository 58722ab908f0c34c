use liefield::lattice::Lattice;
use liefield::model::{MassFunction, TestFunctionSpec};
use liefield::quadrature::Box;
use liefield::tensorforms::{
    bivector_inner_product, indexed_form_value, vector_inner_product, vector_integrand_via_q,
    BivectorFunction, BivectorWeights, ConeWeights, LatticeBivector, TensorQuadrature,
    VectorFunction,
};
use liefield_core::tensor::{minkowski_dot, vector_integrand};
use num_complex::Complex64;
use proptest::prelude::*;

fn g4(center: [f64; 4], width: f64, carrier: [f64; 4]) -> TestFunctionSpec {
    TestFunctionSpec::gaussian(&center, width, &carrier)
}

fn vector(parts: [Option<TestFunctionSpec>; 4]) -> VectorFunction {
    VectorFunction { components: parts }
}

fn quad(order: usize) -> TensorQuadrature {
    TensorQuadrature {
        region: Box {
            lo: vec![0.0, -3.0, -3.0, -3.0],
            hi: vec![6.0, 3.0, 3.0, 3.0],
        },
        order,
    }
}

/// The profile is negligible on the light cone.
fn cone(time: f64, space: f64) -> ConeWeights {
    ConeWeights {
        time,
        space,
        profile: MassFunction::new(2.0, 0.8),
    }
}

fn sample_vector() -> VectorFunction {
    vector([
        Some(g4([0.0; 4], 1.0, [2.0, 0.0, 0.0, 0.0])),
        Some(g4([0.2, 0.0, 0.1, 0.0], 0.9, [2.0, 0.3, 0.0, 0.0])),
        None,
        Some(g4([0.0, 0.1, 0.0, -0.2], 1.1, [1.5, 0.0, 0.0, 0.4])),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn q_route_rebuilds_the_vector_kernel(
        re in prop::array::uniform4(-2.0..2.0f64),
        im in prop::array::uniform4(-2.0..2.0f64),
        other in prop::array::uniform4(-2.0..2.0f64),
        v in prop::array::uniform3(-0.9..0.9f64),
        u0 in 0.2..3.0f64,
        a_t in 0.0..2.0f64,
        a_s in 0.0..2.0f64,
    ) {
        let u = [u0, u0 * v[0] / 2.0, u0 * v[1] / 2.0, u0 * v[2] / 2.0];
        let a: [Complex64; 4] = std::array::from_fn(|i| Complex64::new(re[i], im[i]));
        let b = other.map(|x| Complex64::new(x, 0.5 * x));
        let direct = vector_integrand(a, b, u, a_t, a_s);
        let via_q = vector_integrand_via_q(a, b, u, a_t, a_s);
        prop_assert!((direct - via_q).norm() < 1e-10 * (1.0 + direct.norm()), "{} vs {}", direct, via_q);
    }
}

#[test]
fn vector_norms_are_nonnegative() {
    let u = sample_vector();
    for (t, s) in [(1.0, 0.0), (0.0, 1.0), (0.7, 0.4)] {
        let v = vector_inner_product(&u, &u, &cone(t, s), 1.0, &quad(10)).unwrap();
        assert!(v.re > 0.0 && v.im.abs() < 1e-10 * v.re, "({t},{s}): {v}");
    }
    assert_eq!(
        vector_inner_product(&u, &u, &cone(0.0, 0.0), 1.0, &quad(6)).unwrap(),
        Complex64::new(0.0, 0.0)
    );
}

#[test]
fn weights_reaching_the_light_cone_are_rejected() {
    let w = ConeWeights {
        time: 1.0,
        space: 0.0,
        profile: MassFunction::new(1.5, 1.5),
    };
    let u = sample_vector();
    assert!(vector_inner_product(&u, &u, &w, 1.0, &quad(4)).is_err());
}

#[test]
fn vector_product_matches_a_midpoint_rule() {
    let (u, v) = (
        sample_vector(),
        vector([
            None,
            Some(g4([0.0; 4], 1.0, [2.0, 0.0, 0.2, 0.0])),
            None,
            None,
        ]),
    );
    let w = cone(0.6, 0.3);
    let got = vector_inner_product(&u, &v, &w, 2.0, &quad(12)).unwrap();
    let finer = vector_inner_product(&u, &v, &w, 2.0, &quad(20)).unwrap();
    assert!(
        (got - finer).norm() < 1e-5 * finer.norm(),
        "{got} vs {finer}"
    );
    let n = 40;
    let q = quad(1).region;
    let h: Vec<f64> = (0..4).map(|i| (q.hi[i] - q.lo[i]) / n as f64).collect();
    let mut want = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let p = [i, j, k, l];
                    let x: [f64; 4] = std::array::from_fn(|d| q.lo[d] + (p[d] as f64 + 0.5) * h[d]);
                    let (at, as_) = w.at(&x);
                    if at + as_ > 0.0 {
                        want += vector_integrand(
                            u.transform(&x).unwrap(),
                            v.transform(&x).unwrap(),
                            x,
                            at,
                            as_,
                        );
                    }
                }
            }
        }
    }
    want *= 2.0 * h.iter().product::<f64>();
    assert!((got - want).norm() < 1e-3 * want.norm(), "{got} vs {want}");
}

#[test]
fn cone_weights_vanish_outside_the_cone() {
    let w = cone(1.0, 2.0);
    assert_eq!(w.at(&[1.0, 1.0, 0.0, 0.0]), (0.0, 0.0));
    assert_eq!(w.at(&[0.5, 0.0, 1.0, 0.0]), (0.0, 0.0));
    let (t, s) = w.at(&[2.1, 0.3, 0.0, 0.0]);
    assert!(t > 0.0 && (s - 2.0 * t).abs() < 1e-15);
}

#[test]
fn longitudinal_vector_reduces_to_a_scalar_integral() {
    // U_mu = d_mu f has transform proportional to u_mu, so only A_t survives
    let u = [1.4, 0.3, -0.5, 0.2];
    let f = Complex64::new(0.8, -0.3);
    let lower = [u[0], -u[1], -u[2], -u[3]].map(|c| f * c);
    let (a_t, a_s) = (0.9, 0.0);
    let got = vector_integrand(lower, lower, u, a_t, a_s);
    let want = a_t * f.norm_sqr() * minkowski_dot(u, u);
    assert!(
        (got - Complex64::new(want, 0.0)).norm() < 1e-12,
        "{got} vs {want}"
    );
}

fn sample_bivector(shift: f64) -> BivectorFunction {
    BivectorFunction::new(vec![
        (
            (0, 1),
            g4([shift, 0.0, 0.0, 0.0], 1.0, [0.0, 0.5, 0.0, 1.0]),
        ),
        (
            (2, 0),
            g4([0.0, shift, 0.0, 0.0], 0.9, [0.0, 0.0, 0.4, 0.8]),
        ),
        (
            (1, 3),
            g4([0.0, 0.0, shift, 0.0], 1.2, [0.0, 0.3, 0.3, 0.0]),
        ),
    ])
    .unwrap()
}

#[test]
fn bivector_norms_are_nonnegative() {
    let e = sample_bivector(0.0);
    let light =
        bivector_inner_product(&e, &e, &BivectorWeights::LightCone, 1.0, &quad(12)).unwrap();
    assert!(
        light.re > 0.0 && light.im.abs() < 1e-10 * light.re,
        "{light}"
    );
    let smooth = BivectorWeights::Smooth {
        b: 1.0,
        dual: 0.5,
        profile: MassFunction::new(1.5, 1.5),
    };
    let v = bivector_inner_product(&e, &e, &smooth, 1.0, &quad(8)).unwrap();
    assert!(v.re > 0.0 && v.im.abs() < 1e-10 * v.re, "{v}");
    let off = BivectorWeights::Smooth {
        b: 0.0,
        dual: 0.0,
        profile: MassFunction::new(1.5, 1.5),
    };
    assert_eq!(
        bivector_inner_product(&e, &e, &off, 1.0, &quad(6)).unwrap(),
        Complex64::new(0.0, 0.0)
    );
}

#[test]
fn bivector_product_is_hermitian() {
    let (e, f) = (sample_bivector(0.0), sample_bivector(0.4));
    let w = BivectorWeights::LightCone;
    let ef = bivector_inner_product(&e, &f, &w, 1.0, &quad(10)).unwrap();
    let fe = bivector_inner_product(&f, &e, &w, 1.0, &quad(10)).unwrap();
    assert!(
        (ef - fe.conj()).norm() < 1e-12 * (1.0 + ef.norm()),
        "{ef} vs {fe}"
    );
}

#[test]
fn bivector_construction() {
    assert!(BivectorFunction::new(vec![((1, 1), g4([0.0; 4], 1.0, [0.0; 4]))]).is_err());
    assert!(BivectorFunction::new(vec![((0, 4), g4([0.0; 4], 1.0, [0.0; 4]))]).is_err());
    let a = BivectorFunction::new(vec![((1, 0), g4([0.0; 4], 1.0, [0.0; 4]))]).unwrap();
    let b = BivectorFunction::new(vec![((0, 1), g4([0.0; 4], 1.0, [0.0; 4]))]).unwrap();
    let u = [1.0, 0.2, 0.0, 0.0];
    let (ta, tb) = (a.transform(&u).unwrap(), b.transform(&u).unwrap());
    let mut neg = tb;
    for row in neg.0.iter_mut() {
        for x in row.iter_mut() {
            *x = -*x;
        }
    }
    assert!(ta.max_abs_diff(&neg) < 1e-15);
}

fn lattice_bivector(seed: u64, lattice: &Lattice) -> LatticeBivector {
    let f = BivectorFunction::new(vec![
        ((0, 1), TestFunctionSpec::Random { seed, scale: 1.0 }),
        (
            (1, 2),
            TestFunctionSpec::Random {
                seed: seed + 50,
                scale: 1.0,
            },
        ),
        (
            (3, 0),
            TestFunctionSpec::Random {
                seed: seed + 90,
                scale: 1.0,
            },
        ),
    ])
    .unwrap();
    LatticeBivector::new(&f, lattice).unwrap()
}

#[test]
fn indexed_form_contraction_matches_brute_force() {
    let lattice = Lattice::new(6, 2);
    let weight = MassFunction::new(1.0, 1.5);
    for seed in 1..=3 {
        let fs: Vec<LatticeBivector> = (0..4)
            .map(|i| lattice_bivector(seed * 10 + i, &lattice))
            .collect();
        let (a, b) = indexed_form_value([&fs[0], &fs[1], &fs[2], &fs[3]], &lattice, &weight, 0.7);
        assert!(a.norm() > 0.0);
        assert!(
            (a - b).norm() < 1e-12 * (1.0 + a.norm()),
            "seed {seed}: {a} vs {b}"
        );
    }
}

#[test]
fn indexed_form_degenerate_cases() {
    let lattice = Lattice::new(6, 2);
    let weight = MassFunction::new(1.0, 1.5);
    let fs: Vec<LatticeBivector> = (0..4).map(|i| lattice_bivector(i, &lattice)).collect();
    let zero = LatticeBivector::new(&BivectorFunction::default(), &lattice).unwrap();
    assert!(zero.is_zero());
    let (a, b) = indexed_form_value([&fs[0], &zero, &fs[2], &fs[3]], &lattice, &weight, 0.7);
    assert_eq!((a, b), (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    let (a, b) = indexed_form_value([&fs[0], &fs[1], &fs[2], &fs[3]], &lattice, &weight, 0.0);
    assert_eq!((a.norm(), b.norm()), (0.0, 0.0));
}
