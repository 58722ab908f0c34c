//! Symbolic engine for a deformed algebra of creation and annihilation
//! operators indexed by test functions.
//!
//! Everything here is exact: coefficients are rationals, the deformation
//! parameter is tracked as an integer power, and test functions are formal
//! [`Label`]s. Numeric realizations live in the `liefield` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod expr;
pub mod label;
pub mod linsolve;
pub mod normal;
pub mod parse;
pub mod permanent;
pub mod print;
pub mod rational;
pub mod states;
pub mod tensor;
pub mod vacuum;

pub use expr::{FormFactor, Generator, Monomial, Polynomial};
pub use label::{Label, Mode};
pub use normal::{NormalOrderError, NormalOrderer, Strategy};
pub use parse::{parse, ParseError};
pub use print::{print, to_human, to_machine, Format};
pub use rational::Rational;
