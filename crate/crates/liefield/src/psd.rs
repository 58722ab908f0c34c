//! Positivity of the vacuum state on few-particle sectors.

use std::collections::HashMap;

use liefield_core::combinatorics::{
    factorial, multisets, partitions_with_multiplicities, permutations,
};
use liefield_core::states::raw_state;
use liefield_core::vacuum::Vacuum;
use liefield_core::{FormFactor, Label, Mode, Polynomial};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::lattice::LatticeOracle;
use crate::oracle::{FormOracle, OracleError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PsdError {
    #[error("oracle identity spot check failed: {what} (residual {residual:e})")]
    Inconsistent { what: String, residual: f64 },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Parameter(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdReport {
    pub size: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Spectral norm of the Gram matrix.
    pub matrix_norm: f64,
    /// Largest `|G_ij - conj(G_ji)|` before symmetrization.
    pub hermiticity: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Basis of multisets over `labels` with at most `max_particles` members,
/// ordered by size.
pub fn basis(labels: &[Label], max_particles: usize) -> Vec<Vec<Label>> {
    let mut out = Vec::new();
    for k in 0..=max_particles {
        for m in multisets(labels.len(), k) {
            out.push(m.into_iter().map(|i| labels[i].clone()).collect());
        }
    }
    out
}

/// Spot checks the flattening and hermiticity identities the Gram matrix
/// relies on.
pub fn spot_check(oracle: &LatticeOracle, labels: &[Label]) -> Result<(), PsdError> {
    if labels.len() < 2 {
        return Ok(());
    }
    let quantum = oracle.rebind(oracle.lambda(), Mode::Quantum);
    let (f, g) = (&labels[0], &labels[1]);
    let xi = Label::xi(vec![f.clone()], vec![g.clone()]);
    let lhs = quantum.slots_value(&[xi], std::slice::from_ref(g))?;
    let rhs = quantum.slots_value(std::slice::from_ref(g), &[f.clone(), g.clone()])?;
    let r = (lhs - rhs).norm() / (1.0 + lhs.norm());
    if r > 1e-12 {
        return Err(PsdError::Inconsistent {
            what: "xi flattening".into(),
            residual: r,
        });
    }
    let ab = quantum.slots_value(&[f.clone(), g.clone()], std::slice::from_ref(g))?;
    let ba = quantum.slots_value(std::slice::from_ref(g), &[f.clone(), g.clone()])?;
    let r = (ab - ba.conj()).norm() / (1.0 + ab.norm());
    if r > 1e-12 {
        return Err(PsdError::Inconsistent {
            what: "hermiticity".into(),
            residual: r,
        });
    }
    Ok(())
}

/// Symbolic `<A|B>` for raw states, classical mode.
pub fn raw_inner_product(a: &[Label], b: &[Label]) -> Polynomial {
    let vac = Vacuum::new(Mode::Classical);
    vac.inner_product(
        &raw_state(a, Mode::Classical),
        &raw_state(b, Mode::Classical),
    )
}

/// Symbolic Gram entries `<B_i|B_j>`, row-major.
#[derive(Debug, Clone)]
pub struct SymbolicGram {
    pub size: usize,
    pub entries: Vec<Polynomial>,
}

impl SymbolicGram {
    pub fn new(basis: &[Vec<Label>]) -> SymbolicGram {
        let n = basis.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let entries = pairs
            .par_iter()
            .map(|&(i, j)| raw_inner_product(&basis[i], &basis[j]))
            .collect();
        SymbolicGram { size: n, entries }
    }

    /// Each entry is evaluated independently, so the result does not depend
    /// on the worker count.
    pub fn evaluate(&self, oracle: &dyn FormOracle) -> Result<DMatrix<Complex64>, OracleError> {
        let values: Vec<Complex64> = self
            .entries
            .par_iter()
            .map(|p| oracle.evaluate(p))
            .collect::<Result<_, _>>()?;
        let n = self.size;
        Ok(DMatrix::from_fn(n, n, |i, j| values[i * n + j]))
    }
}

pub fn psd_check(
    oracle: &LatticeOracle,
    labels: &[Label],
    max_particles: usize,
    tolerance: f64,
) -> Result<PsdReport, PsdError> {
    if max_particles > 5 {
        return Err(PsdError::Parameter(
            "positivity checks are capped at five particles".into(),
        ));
    }
    let gram = SymbolicGram::new(&basis(labels, max_particles));
    psd_check_with(oracle, labels, &gram, tolerance)
}

/// As [`psd_check`] with a precomputed symbolic Gram matrix over `labels`.
pub fn psd_check_with(
    oracle: &LatticeOracle,
    labels: &[Label],
    gram: &SymbolicGram,
    tolerance: f64,
) -> Result<PsdReport, PsdError> {
    spot_check(oracle, labels)?;
    Ok(analyze(&gram.evaluate(oracle)?, tolerance))
}

/// Eigen-analysis of a Gram matrix after Hermitian symmetrization.
pub fn analyze(gram: &DMatrix<Complex64>, tolerance: f64) -> PsdReport {
    let n = gram.nrows();
    let mut hermiticity: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            hermiticity = hermiticity.max((gram[(i, j)] - gram[(j, i)].conj()).norm());
        }
    }
    let sym = (gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigenvalues();
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let norm = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
    PsdReport {
        size: n,
        min_eigenvalue: min,
        max_eigenvalue: max,
        matrix_norm: norm,
        hermiticity,
        tolerance,
        pass: min >= -tolerance * norm,
    }
}

/// Form values `(f_S; g_T)` for every pair of equal-size subsets, keyed by
/// bitmask.
pub struct SubsetForms {
    n: usize,
    values: HashMap<(u32, u32), Complex64>,
}

impl SubsetForms {
    pub fn new(
        oracle: &dyn FormOracle,
        f: &[Label],
        g: &[Label],
        mode: Mode,
    ) -> Result<SubsetForms, OracleError> {
        let n = f.len();
        assert_eq!(n, g.len());
        let pick = |labels: &[Label], mask: u32| -> Vec<Label> {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| labels[i].clone())
                .collect()
        };
        let masks: Vec<(u32, u32)> = (1u32..1 << n)
            .flat_map(|a| {
                (1u32..1 << n)
                    .filter(move |b| b.count_ones() == a.count_ones())
                    .map(move |b| (a, b))
            })
            .collect();
        let values: Vec<((u32, u32), Complex64)> = masks
            .par_iter()
            .map(|&(a, b)| {
                let form = FormFactor::new(pick(f, a), pick(g, b), mode);
                oracle.form_value(&form).map(|v| ((a, b), v))
            })
            .collect::<Result<_, _>>()?;
        Ok(SubsetForms {
            n,
            values: values.into_iter().collect(),
        })
    }

    /// `S_pi = sum_sigma sum_tau P_pi(f_sigma; g_tau)` for the block sizes
    /// `parts`.
    pub fn partition_sum(&self, parts: &[usize]) -> Complex64 {
        let mut sizes = parts.to_vec();
        sizes.sort_unstable();
        let perms = permutations(self.n);
        let masks: Vec<Vec<u32>> = perms
            .iter()
            .map(|p| {
                let mut at = 0;
                sizes
                    .iter()
                    .map(|&k| {
                        let m = p[at..at + k].iter().map(|&i| 1u32 << i).sum();
                        at += k;
                        m
                    })
                    .collect()
            })
            .collect();
        let rows: Vec<Complex64> = masks
            .par_iter()
            .map(|ms| {
                let mut acc = Complex64::new(0.0, 0.0);
                for mt in &masks {
                    let mut v = Complex64::new(1.0, 0.0);
                    for (a, b) in ms.iter().zip(mt) {
                        v *= self.values[&(*a, *b)];
                    }
                    acc += v;
                }
                acc
            })
            .collect();
        rows.into_iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSum {
    pub parts: Vec<usize>,
    /// `M2 / n!`.
    pub weight: f64,
    pub value: Complex64,
}

/// Every `S_pi` for `n = f.len()` particles.
pub fn partition_sums(
    oracle: &dyn FormOracle,
    f: &[Label],
    g: &[Label],
) -> Result<Vec<PartitionSum>, OracleError> {
    let n = f.len();
    let table = SubsetForms::new(oracle, f, g, Mode::Classical)?;
    let nf = factorial(n as u32) as f64;
    Ok(partitions_with_multiplicities(n)
        .map_err(|e| OracleError::Unsupported(format!("{e:?}")))?
        .into_iter()
        .map(|rec| PartitionSum {
            value: table.partition_sum(&rec.parts),
            weight: rec.m2 as f64 / nf,
            parts: rec.parts,
        })
        .collect())
}

/// Numeric value of the partition-sum inner product.
pub fn numeric_gsip(
    oracle: &dyn FormOracle,
    f: &[Label],
    g: &[Label],
) -> Result<Complex64, OracleError> {
    if f.len() != g.len() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if f.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(partition_sums(oracle, f, g)?
        .into_iter()
        .map(|s| s.value * s.weight)
        .sum())
}
