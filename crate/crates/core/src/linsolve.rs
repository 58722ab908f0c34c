//! Exact Gaussian elimination over the rationals.

use alloc::vec::Vec;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("row length {got} does not match {expected} unknowns")]
    Shape { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub values: Vec<Rational>,
    /// True when the system pins down every unknown.
    pub unique: bool,
}

/// Solves `rows * x = rhs` for `unknowns` variables. Free variables are set
/// to zero.
pub fn solve(
    rows: &[Vec<Rational>],
    rhs: &[Rational],
    unknowns: usize,
) -> Result<Solution, SolveError> {
    let mut m: Vec<Vec<Rational>> = Vec::with_capacity(rows.len());
    for (r, b) in rows.iter().zip(rhs) {
        if r.len() != unknowns {
            return Err(SolveError::Shape {
                expected: unknowns,
                got: r.len(),
            });
        }
        let mut row = r.clone();
        row.push(*b);
        m.push(row);
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for x in m[rank].iter_mut() {
            *x *= inv;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let k = row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= k * *p;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if m[rank..].iter().any(|row| !row[unknowns].is_zero()) {
        return Err(SolveError::Inconsistent);
    }
    let mut values = alloc::vec![Rational::ZERO; unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        values[c] = m[r][unknowns];
    }
    Ok(Solution {
        values,
        unique: rank == unknowns,
    })
}
