//! Matrix permanents: Ryser's inclusion-exclusion formula and the naive
//! permutation sum.

use alloc::vec::Vec;

use crate::expr::Polynomial;
use crate::rational::Rational;

/// The ring operations a permanent needs.
pub trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for num_complex::Complex<f64> {
    fn zero() -> Self {
        num_complex::Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        num_complex::Complex::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational::ZERO
    }
    fn one() -> Self {
        Rational::ONE
    }
    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg(&self) -> Self {
        -*self
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.product(rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Ryser's formula, `O(2^n n^2)`. `matrix` is row-major and square.
pub fn ryser<T: Ring>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    if n == 0 {
        return T::one();
    }
    let mut total = T::zero();
    for mask in 1u64..(1u64 << n) {
        let mut prod = T::one();
        for row in matrix {
            let mut s = T::zero();
            for (j, x) in row.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    s = s.add(x);
                }
            }
            prod = prod.mul(&s);
        }
        // sign (-1)^(n - |S|)
        if (n as u32 - mask.count_ones()) % 2 == 1 {
            prod = prod.neg();
        }
        total = total.add(&prod);
    }
    total
}

/// Sum over all permutations of products of entries.
pub fn naive<T: Ring>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    let mut total = T::zero();
    for perm in crate::combinatorics::permutations(n) {
        let mut prod = T::one();
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul(&matrix[i][j]);
        }
        total = total.add(&prod);
    }
    total
}
