//! Orthogonal n-particle states and the partition-sum inner product.
//!
//! `|g1..gn> = ad_{g1*}..ad_{gn*}|0>`. The orthogonal state subtracts, for
//! every set partition of the labels into fewer blocks, the lower state
//! built from the block labels (a singleton block keeps its label, a larger
//! block `B` becomes `xi(; g_B)`), weighted by a coefficient that depends
//! only on the block sizes. The weights are obtained by solving the
//! orthogonality conditions against generic lower states exactly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::combinatorics::{
    factorial, partitions_with_multiplicities, permutations, set_partitions,
};
use crate::expr::{FormFactor, Generator, Monomial, Polynomial};
use crate::label::{canonical_label, conjugate, Label, Mode};
use crate::linsolve::{solve, SolveError};
use crate::rational::Rational;
use crate::vacuum::Vacuum;

pub const MAX_STATE_PARTICLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StateError {
    #[error("orthogonal states are defined for 1..={MAX_STATE_PARTICLES} particles, got {0}")]
    UnsupportedSize(usize),
    #[error("orthogonal states need classical mode")]
    NotClassical,
    #[error("orthogonality conditions for {n} particles have no solution: {source}")]
    NoSolution { n: usize, source: SolveError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticleState {
    pub labels: Vec<Label>,
    /// Creator-only vector.
    pub poly: Polynomial,
}

impl ParticleState {
    pub fn n(&self) -> usize {
        self.labels.len()
    }
}

/// `ad_{l1*}..ad_{ln*}|0>`.
pub fn raw_state(labels: &[Label], mode: Mode) -> Polynomial {
    let ops: Vec<Generator> = labels
        .iter()
        .map(|l| Generator::Creator(conjugate(&canonical_label(l, mode), mode)))
        .collect();
    Polynomial::term(Monomial::implied(ops, Vec::new()), Rational::ONE)
}

fn block_label(labels: &[Label], block: &[usize]) -> Label {
    if block.len() == 1 {
        labels[block[0]].clone()
    } else {
        let args = block.iter().map(|&i| labels[i].clone()).collect();
        canonical_label(&Label::xi(Vec::new(), args), Mode::Classical)
    }
}

fn shape_of(blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut s: Vec<usize> = blocks.iter().map(Vec::len).collect();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

/// Builds orthogonal states, caching the per-size weight tables.
#[derive(Default)]
pub struct GramSchmidt {
    tables: BTreeMap<usize, BTreeMap<Vec<usize>, Rational>>,
}

impl GramSchmidt {
    pub fn new() -> GramSchmidt {
        GramSchmidt::default()
    }

    /// Weight of each block shape (parts non-increasing) for `n` particles.
    pub fn weights(&mut self, n: usize) -> Result<BTreeMap<Vec<usize>, Rational>, StateError> {
        if !(1..=MAX_STATE_PARTICLES).contains(&n) {
            return Err(StateError::UnsupportedSize(n));
        }
        if let Some(t) = self.tables.get(&n) {
            return Ok(t.clone());
        }
        let table = self.solve_weights(n)?;
        self.tables.insert(n, table.clone());
        Ok(table)
    }

    fn solve_weights(&mut self, n: usize) -> Result<BTreeMap<Vec<usize>, Rational>, StateError> {
        let mut table = BTreeMap::new();
        if n == 1 {
            return Ok(table);
        }
        let g: Vec<Label> = (1..=n)
            .map(|i| Label::external(&format!("_g{i}")))
            .collect();
        let shapes: Vec<Vec<usize>> = partitions_with_multiplicities(n)
            .expect("n is in range")
            .into_iter()
            .map(|r| r.parts)
            .filter(|p| p.len() < n)
            .collect();
        // Sum of lower states over all set partitions of each shape.
        let mut pieces: Vec<Polynomial> = alloc::vec![Polynomial::zero(); shapes.len()];
        for pi in set_partitions(n) {
            if pi.len() == n {
                continue;
            }
            let k = shapes.iter().position(|s| *s == shape_of(&pi)).unwrap();
            let sub: Vec<Label> = pi.iter().map(|b| block_label(&g, b)).collect();
            let st = self.build(&sub)?;
            pieces[k].add_assign(&st);
        }
        let raw = raw_state(&g, Mode::Classical);
        let vac = Vacuum::new(Mode::Classical);
        let mut rows: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
        let mut rhs: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for j in 1..n {
            let h: Vec<Label> = (1..=j)
                .map(|i| Label::external(&format!("_h{i}")))
                .collect();
            let bra = raw_state(&h, Mode::Classical);
            for (m, c) in vac.inner_product(&bra, &raw).iter() {
                *rhs.entry(m.clone()).or_insert(Rational::ZERO) += *c;
                rows.entry(m.clone())
                    .or_insert_with(|| alloc::vec![Rational::ZERO; shapes.len()]);
            }
            for (k, piece) in pieces.iter().enumerate() {
                for (m, c) in vac.inner_product(&bra, piece).iter() {
                    rows.entry(m.clone())
                        .or_insert_with(|| alloc::vec![Rational::ZERO; shapes.len()])[k] += *c;
                }
            }
        }
        let keys: Vec<Monomial> = rows.keys().cloned().collect();
        let a: Vec<Vec<Rational>> = keys.iter().map(|m| rows[m].clone()).collect();
        let b: Vec<Rational> = keys
            .iter()
            .map(|m| rhs.get(m).copied().unwrap_or(Rational::ZERO))
            .collect();
        let sol =
            solve(&a, &b, shapes.len()).map_err(|source| StateError::NoSolution { n, source })?;
        for (s, v) in shapes.into_iter().zip(sol.values) {
            table.insert(s, v);
        }
        Ok(table)
    }

    fn build(&mut self, labels: &[Label]) -> Result<Polynomial, StateError> {
        let n = labels.len();
        let weights = self.weights(n)?;
        let mut out = raw_state(labels, Mode::Classical);
        for pi in set_partitions(n) {
            if pi.len() == n {
                continue;
            }
            let w = weights[&shape_of(&pi)];
            if w.is_zero() {
                continue;
            }
            let sub: Vec<Label> = pi.iter().map(|b| block_label(labels, b)).collect();
            out.add_scaled(&self.build(&sub)?, -w);
        }
        Ok(out)
    }

    pub fn state(&mut self, labels: &[Label], mode: Mode) -> Result<ParticleState, StateError> {
        if mode != Mode::Classical {
            return Err(StateError::NotClassical);
        }
        if !(1..=MAX_STATE_PARTICLES).contains(&labels.len()) {
            return Err(StateError::UnsupportedSize(labels.len()));
        }
        let labels: Vec<Label> = labels.iter().map(|l| canonical_label(l, mode)).collect();
        let poly = self.build(&labels)?;
        Ok(ParticleState { labels, poly })
    }
}

pub fn gs_state(labels: &[Label], mode: Mode) -> Result<ParticleState, StateError> {
    GramSchmidt::new().state(labels, mode)
}

/// `<A|B>`; zero when the particle numbers differ.
pub fn state_inner_product(a: &ParticleState, b: &ParticleState, mode: Mode) -> Polynomial {
    Vacuum::new(mode).inner_product(&a.poly, &b.poly)
}

/// `P_pi(f..; g..)`: consecutive blocks of the sizes in `parts`, smallest
/// blocks first.
pub fn partition_product(parts: &[usize], f: &[Label], g: &[Label], mode: Mode) -> Polynomial {
    let mut sizes = parts.to_vec();
    sizes.sort_unstable();
    let mut forms = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for k in sizes {
        forms.push(FormFactor::new(
            f[at..at + k].to_vec(),
            g[at..at + k].to_vec(),
            mode,
        ));
        at += k;
    }
    Polynomial::term(Monomial::implied(Vec::new(), forms), Rational::ONE)
}

/// `delta_{mn} sum_pi M2(pi)/n! sum_sigma sum_tau P_pi(f_sigma; g_tau)`.
pub fn gsip_formula(f: &[Label], g: &[Label], mode: Mode) -> Polynomial {
    let n = g.len();
    if f.len() != n {
        return Polynomial::zero();
    }
    if n == 0 {
        return Polynomial::one();
    }
    let f: Vec<Label> = f.iter().map(|l| canonical_label(l, mode)).collect();
    let g: Vec<Label> = g.iter().map(|l| canonical_label(l, mode)).collect();
    let perms = permutations(n);
    let nf = Rational::from_integer(factorial(n as u32) as i128);
    // form for each (f-subset, g-subset) as ordered index lists, cached by bitmask
    let mut cache: BTreeMap<(u32, u32), FormFactor> = BTreeMap::new();
    let mut out = Polynomial::zero();
    for rec in partitions_with_multiplicities(n).expect("n in range") {
        let weight = Rational::from_integer(rec.m2 as i128) / nf;
        let mut sizes = rec.parts.clone();
        sizes.sort_unstable();
        let mut acc: BTreeMap<Vec<FormFactor>, u64> = BTreeMap::new();
        for sigma in &perms {
            for tau in &perms {
                let mut forms = Vec::with_capacity(sizes.len());
                let mut at = 0;
                for &k in &sizes {
                    let fm: u32 = sigma[at..at + k].iter().map(|&i| 1u32 << i).sum();
                    let gm: u32 = tau[at..at + k].iter().map(|&i| 1u32 << i).sum();
                    let form = cache.entry((fm, gm)).or_insert_with(|| {
                        let fs = (0..n)
                            .filter(|i| fm & (1 << i) != 0)
                            .map(|i| f[i].clone())
                            .collect();
                        let gs = (0..n)
                            .filter(|i| gm & (1 << i) != 0)
                            .map(|i| g[i].clone())
                            .collect();
                        FormFactor::new(fs, gs, mode)
                    });
                    forms.push(form.clone());
                    at += k;
                }
                forms.sort();
                *acc.entry(forms).or_insert(0) += 1;
            }
        }
        for (forms, count) in acc {
            out.add_term(
                Monomial::implied(Vec::new(), forms),
                weight * Rational::from(count),
            );
        }
    }
    out
}

/// Term count and coefficients of one block-size class of an inner product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSummary {
    /// Block sizes, non-increasing.
    pub shape: Vec<usize>,
    pub terms: usize,
    pub coefficients: Vec<Rational>,
}

/// Groups the terms of an inner product by the sizes of their forms
/// (a form with `2k` arguments is a block of size `k`).
pub fn classify_terms(p: &Polynomial) -> Vec<ClassSummary> {
    let mut by_shape: BTreeMap<Vec<usize>, (usize, Vec<Rational>)> = BTreeMap::new();
    for (m, c) in p.iter() {
        let mut shape: Vec<usize> = m.forms().iter().map(|f| f.arity() / 2).collect();
        shape.sort_unstable_by(|a, b| b.cmp(a));
        let e = by_shape.entry(shape).or_insert((0, Vec::new()));
        e.0 += 1;
        if !e.1.contains(c) {
            e.1.push(*c);
        }
    }
    let mut out: Vec<ClassSummary> = by_shape
        .into_iter()
        .map(|(shape, (terms, mut coefficients))| {
            coefficients.sort();
            ClassSummary {
                shape,
                terms,
                coefficients,
            }
        })
        .collect();
    out.sort_by_key(|c| (c.shape.len(), c.shape.clone()));
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn ls(names: &[&str]) -> Vec<Label> {
        names.iter().map(|s| Label::external(s)).collect()
    }

    #[test]
    fn two_particle_state() {
        let s = gs_state(&ls(&["g1", "g2"]), Mode::Classical).unwrap();
        let want = parse("ad(g1*)*ad(g2*) - ad(xi(;g1,g2)*)", Mode::Classical).unwrap();
        assert_eq!(s.poly, want);
    }

    #[test]
    fn one_particle_is_raw() {
        let s = gs_state(&ls(&["g"]), Mode::Classical).unwrap();
        assert_eq!(s.poly, parse("ad(g*)", Mode::Classical).unwrap());
    }

    #[test]
    fn quantum_is_rejected() {
        assert_eq!(
            gs_state(&ls(&["g"]), Mode::Quantum),
            Err(StateError::NotClassical)
        );
        assert_eq!(
            gs_state(&[], Mode::Classical),
            Err(StateError::UnsupportedSize(0))
        );
    }

    #[test]
    fn gsip2() {
        let f = ls(&["f1", "f2"]);
        let g = ls(&["g1", "g2"]);
        let want = parse(
            "form(f1;g1)*form(f2;g2) + form(f2;g1)*form(f1;g2) + 2*form(f1,f2;g1,g2)",
            Mode::Classical,
        )
        .unwrap();
        assert_eq!(gsip_formula(&f, &g, Mode::Classical), want);
        let a = gs_state(&f, Mode::Classical).unwrap();
        let b = gs_state(&g, Mode::Classical).unwrap();
        assert_eq!(state_inner_product(&a, &b, Mode::Classical), want);
    }

    #[test]
    fn p21_example() {
        let f = ls(&["f1", "f2", "f3", "f4"]);
        let g = ls(&["g1", "g2", "g3", "g4"]);
        let want = parse("form(f1;g1)*form(f2;g2)*form(f3,f4;g3,g4)", Mode::Classical).unwrap();
        assert_eq!(partition_product(&[2, 1, 1], &f, &g, Mode::Classical), want);
    }
}
