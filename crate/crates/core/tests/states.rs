use liefield_core::combinatorics::{factorial, integer_partitions, partitions_with_multiplicities};
use liefield_core::permanent::{naive, ryser};
use liefield_core::states::{
    classify_terms, gs_state, gsip_formula, partition_product, raw_state, state_inner_product,
    GramSchmidt,
};
use liefield_core::vacuum::Vacuum;
use liefield_core::{parse, FormFactor, Label, Mode, Polynomial, Rational};

const C: Mode = Mode::Classical;

fn p(text: &str) -> Polynomial {
    parse(text, C).unwrap_or_else(|e| panic!("`{text}`: {e}"))
}

fn indexed(prefix: &str, n: usize) -> Vec<Label> {
    (1..=n)
        .map(|i| Label::external(&format!("{prefix}{i}")))
        .collect()
}

fn fact(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Multiplicities recomputed from the multiplicity vector of each partition.
fn multiplicities(parts: &[usize]) -> (u128, u128, u128) {
    let n: usize = parts.iter().sum();
    let mut a = vec![0usize; n + 1];
    for &k in parts {
        a[k] += 1;
    }
    let (mut m1, mut m2, mut m3) = (fact(n), fact(n), fact(n));
    for (k, &ak) in a.iter().enumerate().skip(1) {
        m1 /= fact(k).pow(ak as u32);
        m2 /= (k as u128).pow(ak as u32) * fact(ak);
        m3 /= fact(k).pow(ak as u32) * fact(ak);
    }
    (m1, m2, m3)
}

#[test]
fn partition_records() {
    for n in 1..=12 {
        let recs = partitions_with_multiplicities(n).unwrap();
        assert_eq!(recs.len(), integer_partitions(n).len());
        for r in &recs {
            assert_eq!(
                (r.m1, r.m2, r.m3),
                multiplicities(&r.parts),
                "{:?}",
                r.parts
            );
        }
    }
    let one = &partitions_with_multiplicities(1).unwrap()[0];
    assert_eq!((one.m1, one.m2, one.m3), (1, 1, 1));
    let four = partitions_with_multiplicities(4).unwrap();
    let r = four.iter().find(|r| r.parts == [2, 1, 1]).unwrap();
    assert_eq!((r.m1, r.m3, r.m1 * r.m3), (12, 6, 72));
    assert!(partitions_with_multiplicities(0).is_err());
    assert!(partitions_with_multiplicities(13).is_err());
}

#[test]
fn weighted_term_counts_sum_to_square_factorial() {
    for n in 1..=10 {
        let recs = partitions_with_multiplicities(n).unwrap();
        let total: u128 = recs.iter().map(|r| r.term_count() * r.coefficient()).sum();
        assert_eq!(total, factorial(n as u32).pow(2), "n={n}");
        let by_m2: u128 = recs.iter().map(|r| r.m2).sum();
        assert_eq!(by_m2, factorial(n as u32), "n={n}");
    }
    let five: u128 = [
        (120, 1),
        (600, 2),
        (450, 4),
        (200, 12),
        (100, 24),
        (25, 144),
        (1, 2880),
    ]
    .iter()
    .map(|(t, c)| t * c)
    .sum();
    assert_eq!(five, 14400);
}

#[test]
fn low_states() {
    let g = indexed("g", 4);
    assert_eq!(gs_state(&g[..1], C).unwrap().poly, p("ad(g1*)"));
    assert_eq!(
        gs_state(&g[..2], C).unwrap().poly,
        p("ad(g1*)*ad(g2*) - ad(xi(;g1,g2)*)")
    );
    assert_eq!(
        gs_state(&g[..3], C).unwrap().poly,
        p(
            "ad(g1*)*ad(g2*)*ad(g3*) - ad(g1*)*ad(xi(;g2,g3)*) - ad(g2*)*ad(xi(;g1,g3)*) \
           - ad(g3*)*ad(xi(;g1,g2)*) + 2*ad(xi(;g1,g2,g3)*)"
        )
    );
    let four = gs_state(&g, C).unwrap().poly;
    assert!(four
        .iter()
        .all(|(m, _)| m.ops().iter().all(|o| o.is_creator())));
    assert_eq!(four, subtracted(&g));
}

/// Set partitions of `0..n` as block lists.
fn blocks(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mut pi in blocks(n - 1) {
        for i in 0..pi.len() {
            let mut q = pi.clone();
            q[i].push(n - 1);
            out.push(q);
        }
        pi.push(vec![n - 1]);
        out.push(pi);
    }
    out
}

/// The raw state minus every orthogonal lower state obtained by merging
/// blocks of labels into `xi(;..)`, each with unit weight.
fn subtracted(g: &[Label]) -> Polynomial {
    let mut out = raw_state(g, C);
    for pi in blocks(g.len()) {
        if pi.len() == g.len() {
            continue;
        }
        let sub: Vec<Label> = pi
            .iter()
            .map(|b| match b.as_slice() {
                [i] => g[*i].clone(),
                _ => Label::xi(Vec::new(), b.iter().map(|&i| g[i].clone()).collect()),
            })
            .collect();
        out = &out - &subtracted(&sub);
    }
    out
}

#[test]
fn subtraction_weights_are_one() {
    let mut gs = GramSchmidt::new();
    for n in 2..=5 {
        for (shape, w) in gs.weights(n).unwrap() {
            assert_eq!(w, Rational::ONE, "n={n} shape {shape:?}");
        }
    }
    let g = indexed("g", 3);
    assert_eq!(gs_state(&g, C).unwrap().poly, subtracted(&g));
}

#[test]
fn orthogonal_to_lower_raw_states() {
    let vac = Vacuum::new(C);
    let g = indexed("g", 4);
    let one = raw_state(&[Label::external("f")], C);
    assert!(vac
        .inner_product(&one, &gs_state(&g[..2], C).unwrap().poly)
        .is_zero());
    for n in 2..=4 {
        let state = gs_state(&g[..n], C).unwrap();
        for m in 1..n {
            let bra = raw_state(&indexed("h", m), C);
            assert!(
                vac.inner_product(&bra, &state.poly).is_zero(),
                "m={m} n={n}"
            );
        }
    }
}

#[test]
fn orthogonality_between_particle_numbers() {
    let mut gs = GramSchmidt::new();
    for m in 1..=4 {
        for n in 1..=4 {
            if m == n {
                continue;
            }
            let a = gs.state(&indexed("f", m), C).unwrap();
            let b = gs.state(&indexed("g", n), C).unwrap();
            assert!(state_inner_product(&a, &b, C).is_zero(), "m={m} n={n}");
            assert!(gsip_formula(&a.labels, &b.labels, C).is_zero());
        }
    }
}

#[test]
fn gsip2_display() {
    let f = indexed("f", 2);
    let g = indexed("g", 2);
    let want = p("form(f1;g1)*form(f2;g2) + form(f2;g1)*form(f1;g2) + 2*form(f1,f2;g1,g2)");
    assert_eq!(gsip_formula(&f, &g, C), want);
    assert_eq!(
        state_inner_product(&gs_state(&f, C).unwrap(), &gs_state(&g, C).unwrap(), C),
        want
    );
}

#[test]
fn p21_display() {
    let want = p("form(f1;g1)*form(f2;g2)*form(f3,f4;g3,g4)");
    assert_eq!(
        partition_product(&[2, 1, 1], &indexed("f", 4), &indexed("g", 4), C),
        want
    );
}

fn class_table(n: usize) -> Vec<(Vec<usize>, usize, Vec<Rational>)> {
    let mut gs = GramSchmidt::new();
    let a = gs.state(&indexed("f", n), C).unwrap();
    let b = gs.state(&indexed("g", n), C).unwrap();
    let ip = state_inner_product(&a, &b, C);
    assert_eq!(ip, gsip_formula(&a.labels, &b.labels, C), "n={n}");
    classify_terms(&ip)
        .into_iter()
        .map(|c| (c.shape, c.terms, c.coefficients))
        .collect()
}

fn row(shape: &[usize], terms: usize, coeff: i128) -> (Vec<usize>, usize, Vec<Rational>) {
    (shape.to_vec(), terms, vec![Rational::from_integer(coeff)])
}

#[test]
fn inner_product_matches_formula_through_four() {
    let t3 = class_table(3);
    assert_eq!(t3.iter().find(|r| r.0 == [1, 1, 1]).unwrap().1, 6);
    let t4 = class_table(4);
    let want = [
        row(&[1, 1, 1, 1], 24, 1),
        row(&[2, 1, 1], 72, 2),
        row(&[2, 2], 18, 4),
        row(&[3, 1], 16, 12),
        row(&[4], 1, 144),
    ];
    for w in want {
        assert!(t4.contains(&w), "missing {w:?} in {t4:?}");
    }
    assert_eq!(t4.len(), 5);
}

#[test]
fn inner_product_matches_formula_at_five() {
    let t5 = class_table(5);
    let want = [
        row(&[1, 1, 1, 1, 1], 120, 1),
        row(&[2, 1, 1, 1], 600, 2),
        row(&[2, 2, 1], 450, 4),
        row(&[3, 1, 1], 200, 12),
        row(&[3, 2], 100, 24),
        row(&[4, 1], 25, 144),
        row(&[5], 1, 2880),
    ];
    for w in want {
        assert!(t5.contains(&w), "missing {w:?} in {t5:?}");
    }
    assert_eq!(t5.len(), 7);
}

#[test]
fn class_tables_follow_partition_records() {
    for n in 2..=4 {
        let table = class_table(n);
        for rec in partitions_with_multiplicities(n).unwrap() {
            let (_, terms, coeffs) = table.iter().find(|r| r.0 == rec.parts).unwrap();
            assert_eq!(*terms as u128, rec.term_count());
            assert_eq!(
                coeffs,
                &vec![Rational::from_integer(rec.coefficient() as i128)]
            );
        }
    }
}

#[test]
fn free_part_is_a_permanent() {
    for n in 1..=6 {
        let f = indexed("f", n);
        let g = indexed("g", n);
        let gram: Vec<Vec<Polynomial>> = f
            .iter()
            .map(|fi| {
                g.iter()
                    .map(|gj| {
                        Polynomial::form(FormFactor::new(vec![fi.clone()], vec![gj.clone()], C))
                    })
                    .collect()
            })
            .collect();
        let perm = ryser(&gram);
        assert_eq!(perm.len(), fact(n) as usize);
        assert_eq!(gsip_formula(&f, &g, C).truncate_lambda(0), perm, "n={n}");
        if n <= 4 {
            assert_eq!(naive(&gram), perm);
        }
    }
}

#[test]
fn numeric_permanents_agree() {
    let m: Vec<Vec<f64>> = (0..6)
        .map(|i| (0..6).map(|j| ((i * 7 + j * 3) % 5) as f64 - 1.5).collect())
        .collect();
    let (a, b) = (ryser(&m), naive(&m));
    assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
}
