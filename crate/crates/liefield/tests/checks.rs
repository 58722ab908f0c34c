use std::collections::BTreeMap;

use liefield::fcheck::{f_condition_check, f_condition_check_with};
use liefield::lattice::LatticeOracle;
use liefield::model::{KernelSpec, MassFunction, Phase, Realization, Space, TestFunctionSpec};
use liefield::overlap::{
    ip2_terms, ip2_value, momentum_overlap, momentum_overlap_grid, MomentumBox,
};
use liefield::psd::{basis, numeric_gsip, partition_sums, psd_check, psd_check_with, SymbolicGram};
use liefield::FormOracle;
use liefield_core::states::gsip_formula;
use liefield_core::{Label, Mode};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lab(s: &str) -> Label {
    Label::external(s)
}

fn spec(lambda: f64, phase: Phase, spatial_dims: usize) -> KernelSpec {
    KernelSpec {
        mode: Mode::Classical,
        spatial_dims,
        lambda,
        mass: MassFunction::new(1.0, 1.5).with_phase(phase),
        realization: Realization::Lattice { side: 8 },
        ..KernelSpec::default()
    }
}

fn random_bindings(names: &[&str], seed: u64) -> BTreeMap<String, TestFunctionSpec> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            (
                n.to_string(),
                TestFunctionSpec::Random {
                    seed: seed * 100 + i as u64,
                    scale: 1.0,
                },
            )
        })
        .collect()
}

fn real_bindings(names: &[&str], seed: u64, n: usize) -> BTreeMap<String, TestFunctionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    names
        .iter()
        .map(|s| {
            let values = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
                .collect();
            (
                s.to_string(),
                TestFunctionSpec::Lattice {
                    values,
                    space: Space::Position,
                },
            )
        })
        .collect()
}

#[test]
fn f_conditions_hold_for_realized_amplitudes() {
    for phase in [Phase::Zero, Phase::OddSine(0.5), Phase::EvenCosine(0.3)] {
        for ds in [1, 2, 3] {
            let r = f_condition_check(&spec(0.7, phase, ds), 1000, 11);
            assert_eq!(r.samples, 1000);
            assert!(r.passed(1e-12), "{phase:?} ds={ds}: {r:?}");
        }
    }
}

#[test]
fn f_conditions_degenerate_at_zero_coupling() {
    let r = f_condition_check(&spec(0.0, Phase::OddSine(0.5), 1), 200, 3);
    assert_eq!(r.composition_residual, 0.0);
    assert_eq!(r.modulus_residual, 0.0);
}

#[test]
fn corrupted_f_is_flagged() {
    let r = f_condition_check_with(&spec(0.7, Phase::OddSine(0.5), 1), 1000, 5, 2.0, 1e-3);
    assert!(!r.passed(1e-12), "{r:?}");
    assert!(r.composition_residual > 1e-6 || r.modulus_residual > 1e-6);
}

fn interval(v: f64, w: f64) -> MomentumBox {
    MomentumBox::new(vec![v, v], vec![w, w])
}

#[test]
fn overlap_examples() {
    let o = momentum_overlap(
        &interval(3.0, 4.0),
        &interval(1.0, 2.0),
        &interval(1.0, 2.0),
    );
    assert!(!o.pairwise && o.sum);
    let s = MomentumBox::new(vec![-1.0, 0.5], vec![0.0, 2.0]);
    assert!(momentum_overlap(&s, &s, &interval(10.0, 11.0)).pairwise);
    let far = momentum_overlap(
        &interval(9.0, 9.5),
        &interval(1.0, 2.0),
        &interval(1.0, 2.0),
    );
    assert!(!far.pairwise && !far.sum);
}

fn random_box(rng: &mut ChaCha8Rng, dims: usize) -> Vec<(i64, i64)> {
    (0..dims)
        .map(|_| {
            let a = rng.random_range(0..4i64);
            (a, rng.random_range(a..4))
        })
        .collect()
}

fn as_box(b: &[(i64, i64)]) -> MomentumBox {
    MomentumBox::new(
        b.iter().map(|p| p.0 as f64).collect(),
        b.iter().map(|p| p.1 as f64).collect(),
    )
}

#[test]
fn interval_logic_matches_grid_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let dims = 1 + case % 3;
        let (s, s1, s2) = (
            random_box(&mut rng, dims),
            random_box(&mut rng, dims),
            random_box(&mut rng, dims),
        );
        let fast = momentum_overlap(&as_box(&s), &as_box(&s1), &as_box(&s2));
        assert_eq!(
            fast,
            momentum_overlap_grid(&s, &s1, &s2),
            "case {case}: {s:?} {s1:?} {s2:?}"
        );
    }
}

/// Four momentum-box functions on an 8x8 lattice. Boxes stay inside
/// `[0, 3]` so sums never wrap around.
fn box_oracle(boxes: &[Vec<(i64, i64)>; 4], seed: u64) -> LatticeOracle {
    let bindings = boxes
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let f = TestFunctionSpec::MomentumBox {
                lo: b.iter().map(|p| p.0).collect(),
                hi: b.iter().map(|p| p.1).collect(),
                seed: seed * 10 + i as u64,
            };
            (format!("g{}", i + 1), f)
        })
        .collect();
    LatticeOracle::new(&spec(1.0, Phase::OddSine(0.5), 1), &bindings).unwrap()
}

#[test]
fn ip2_vanishes_without_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let g: Vec<Label> = (1..=4).map(|i| lab(&format!("g{i}"))).collect();
    let refs = [&g[0], &g[1], &g[2], &g[3]];
    let (mut vanishing, mut live) = (0, 0);
    for case in 0..100u64 {
        let boxes = [0, 1, 2, 3].map(|_| random_box(&mut rng, 2));
        let [b1, b2, b3, b4] = boxes.clone().map(|b| as_box(&b));
        let pairwise = (b3.intersects(&b1) && b4.intersects(&b2))
            || (b4.intersects(&b1) && b3.intersects(&b2));
        let sum = momentum_overlap(&b3.plus(&b4), &b1, &b2).sum;
        let terms = ip2_terms(refs, &box_oracle(&boxes, case)).unwrap();
        if !pairwise {
            assert_eq!(terms[0] + terms[1], Complex64::new(0.0, 0.0), "case {case}");
        }
        if !sum {
            assert!(terms[2].norm() < 1e-14, "case {case}: {}", terms[2]);
        }
        if !pairwise && !sum {
            vanishing += 1;
            assert!(ip2_value(refs, &box_oracle(&boxes, case)).unwrap().norm() < 1e-14);
        } else {
            live += 1;
        }
    }
    assert!(vanishing > 0 && live > 0, "{vanishing} {live}");
}

#[test]
fn ip2_on_a_conserving_pair_keeps_only_the_joint_term() {
    let boxes = [
        vec![(0, 0), (1, 1)],
        vec![(2, 2), (0, 0)],
        vec![(1, 1), (0, 0)],
        vec![(1, 1), (1, 1)],
    ];
    let g: Vec<Label> = (1..=4).map(|i| lab(&format!("g{i}"))).collect();
    let terms = ip2_terms([&g[0], &g[1], &g[2], &g[3]], &box_oracle(&boxes, 5)).unwrap();
    assert_eq!(terms[0], Complex64::new(0.0, 0.0));
    assert_eq!(terms[1], Complex64::new(0.0, 0.0));
    assert!(terms[2].norm() > 1e-6, "{}", terms[2]);
}

#[test]
fn ip2_norm_is_nonnegative() {
    for seed in 1..=5 {
        let o = LatticeOracle::new(
            &spec(0.8, Phase::OddSine(0.5), 1),
            &random_bindings(&["g1", "g2"], seed),
        )
        .unwrap();
        let (g1, g2) = (lab("g1"), lab("g2"));
        let v = ip2_value([&g1, &g2, &g1, &g2], &o).unwrap();
        assert!(
            v.re >= 0.0 && v.im.abs() < 1e-12 * (1.0 + v.re),
            "seed {seed}: {v}"
        );
    }
}

#[test]
fn gram_is_positive_for_small_sectors() {
    let labels = [lab("h1"), lab("h2"), lab("h3")];
    for lambda in [0.0, 0.1, 1.0] {
        let o = LatticeOracle::new(
            &spec(lambda, Phase::OddSine(0.5), 1),
            &random_bindings(&["h1", "h2", "h3"], 3),
        )
        .unwrap();
        let r = psd_check(&o, &labels, 3, 1e-8).unwrap();
        assert_eq!(r.size, 20);
        assert!(r.pass && r.hermiticity < 1e-10, "lambda {lambda}: {r:?}");
    }
    let o = LatticeOracle::new(
        &spec(1.0, Phase::OddSine(0.5), 1),
        &random_bindings(&["h1"], 1),
    )
    .unwrap();
    assert!(psd_check(&o, &labels[..1], 6, 1e-8).is_err());
}

#[test]
fn shared_symbolic_gram_gives_the_same_report() {
    let labels = [lab("h1"), lab("h2")];
    let gram = SymbolicGram::new(&basis(&labels, 3));
    assert_eq!(gram.size, 10);
    let o = LatticeOracle::new(
        &spec(0.5, Phase::OddSine(0.5), 1),
        &random_bindings(&["h1", "h2"], 8),
    )
    .unwrap();
    assert_eq!(
        psd_check_with(&o, &labels, &gram, 1e-8).unwrap(),
        psd_check(&o, &labels, 3, 1e-8).unwrap()
    );
}

#[test]
fn two_particle_gram_matches_the_orthogonal_formula() {
    let names = ["f1", "f2", "g1", "g2"];
    let o = LatticeOracle::new(
        &spec(0.9, Phase::OddSine(0.5), 1),
        &random_bindings(&names, 6),
    )
    .unwrap();
    let (f, g) = ([lab("f1"), lab("f2")], [lab("g1"), lab("g2")]);
    let xf = Label::xi(Vec::new(), f.to_vec());
    let xg = Label::xi(Vec::new(), g.to_vec());
    let states = vec![f.to_vec(), vec![xf], g.to_vec(), vec![xg]];
    let m = SymbolicGram::new(&states).evaluate(&o).unwrap();
    let numeric = m[(0, 2)] - m[(0, 3)] - m[(1, 2)] + m[(1, 3)];
    let symbolic = o.evaluate(&gsip_formula(&f, &g, Mode::Classical)).unwrap();
    assert!(
        (numeric - symbolic).norm() < 1e-12 * (1.0 + symbolic.norm()),
        "{numeric} vs {symbolic}"
    );
    assert!(
        m[(1, 2)].norm() > 1e-6,
        "lower state must not be trivially orthogonal"
    );
}

#[test]
fn partition_sums_reproduce_the_symbolic_inner_product() {
    for n in 1..=4 {
        let names: Vec<String> = (1..=n)
            .flat_map(|i| [format!("f{i}"), format!("g{i}")])
            .collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let o = LatticeOracle::new(
            &spec(0.6, Phase::OddSine(0.5), 1),
            &random_bindings(&refs, n as u64),
        )
        .unwrap();
        let f: Vec<Label> = (1..=n).map(|i| lab(&format!("f{i}"))).collect();
        let g: Vec<Label> = (1..=n).map(|i| lab(&format!("g{i}"))).collect();
        let numeric = numeric_gsip(&o, &f, &g).unwrap();
        let symbolic = o.evaluate(&gsip_formula(&f, &g, Mode::Classical)).unwrap();
        assert!(
            (numeric - symbolic).norm() < 1e-10 * (1.0 + symbolic.norm()),
            "n={n}: {numeric} vs {symbolic}"
        );
    }
    let o = LatticeOracle::new(
        &spec(0.6, Phase::OddSine(0.5), 1),
        &random_bindings(&["f1", "g1", "g2"], 2),
    )
    .unwrap();
    assert_eq!(
        numeric_gsip(&o, &[lab("f1")], &[lab("g1"), lab("g2")]).unwrap(),
        Complex64::new(0.0, 0.0)
    );
}

#[test]
fn each_partition_sum_is_nonnegative() {
    for seed in 1..=3 {
        let o = LatticeOracle::new(
            &spec(1.0, Phase::OddSine(0.5), 1),
            &real_bindings(&["f1", "f2", "f3", "f4"], seed, 64),
        )
        .unwrap();
        let f: Vec<Label> = (1..=4).map(|i| lab(&format!("f{i}"))).collect();
        let sums = partition_sums(&o, &f, &f).unwrap();
        assert_eq!(sums.len(), 5);
        let weights: f64 = sums.iter().map(|s| s.weight).sum();
        assert!((weights - 1.0).abs() < 1e-15);
        for s in sums {
            assert!(
                s.value.re >= -1e-10 && s.value.im.abs() < 1e-9 * (1.0 + s.value.re),
                "seed {seed} {:?}: {}",
                s.parts,
                s.value
            );
        }
    }
}
