//! Support conditions for two-particle inner products.

use liefield_core::{FormFactor, Label, Mode};
use num_complex::Complex64;

use crate::oracle::{FormOracle, OracleError};

/// Per-axis closed intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl MomentumBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> MomentumBox {
        assert_eq!(lo.len(), hi.len());
        MomentumBox { lo, hi }
    }

    pub fn intersects(&self, other: &MomentumBox) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .all(|((a, b), (c, d))| a.max(*c) <= b.min(*d))
    }

    /// Interval Minkowski sum.
    pub fn plus(&self, other: &MomentumBox) -> MomentumBox {
        MomentumBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn contains(&self, k: &[f64]) -> bool {
        k.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (a, b))| a <= x && x <= b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overlap {
    /// `S` meets `S1`.
    pub pairwise: bool,
    /// `S` meets `S1 (+) S2`.
    pub sum: bool,
}

pub fn momentum_overlap(s: &MomentumBox, s1: &MomentumBox, s2: &MomentumBox) -> Overlap {
    Overlap {
        pairwise: s.intersects(s1),
        sum: s.intersects(&s1.plus(s2)),
    }
}

/// Brute-force version on integer boxes: enumerates lattice points.
pub fn momentum_overlap_grid(s: &[(i64, i64)], s1: &[(i64, i64)], s2: &[(i64, i64)]) -> Overlap {
    let points = |b: &[(i64, i64)]| -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &(lo, hi) in b {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (lo..=hi).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    };
    let (ps, p1, p2) = (points(s), points(s1), points(s2));
    let pairwise = ps.iter().any(|p| p1.contains(p));
    let sum = p1.iter().any(|a| {
        p2.iter().any(|b| {
            let k: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            ps.contains(&k)
        })
    });
    Overlap { pairwise, sum }
}

/// The three pieces of `(g3;g1)(g4;g2) + (g4;g1)(g3;g2) + 2(g3,g4;g1,g2)`.
pub fn ip2_terms(g: [&Label; 4], oracle: &dyn FormOracle) -> Result<[Complex64; 3], OracleError> {
    let [g1, g2, g3, g4] = g;
    let form = |a: &[&Label], b: &[&Label]| {
        let anti = a.iter().map(|l| (*l).clone()).collect();
        let lin = b.iter().map(|l| (*l).clone()).collect();
        oracle.form_value(&FormFactor::new(anti, lin, Mode::Classical))
    };
    Ok([
        form(&[g3], &[g1])? * form(&[g4], &[g2])?,
        form(&[g4], &[g1])? * form(&[g3], &[g2])?,
        form(&[g3, g4], &[g1, g2])? * 2.0,
    ])
}

pub fn ip2_value(g: [&Label; 4], oracle: &dyn FormOracle) -> Result<Complex64, OracleError> {
    Ok(ip2_terms(g, oracle)?.iter().sum())
}
