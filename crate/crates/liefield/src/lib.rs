//! Numeric realizations of the deformed field algebra: a finite momentum
//! lattice, a continuum Gaussian-wavepacket model, two-point kernels,
//! scattering and positivity checks, and the tensor layer.

pub mod classicality;
pub mod config;
pub mod continuum;
pub mod fcheck;
pub mod kernels;
pub mod lattice;
pub mod machine;
pub mod model;
pub mod oracle;
pub mod overlap;
pub mod psd;
pub mod quadrature;
pub mod scattering;
pub mod tensorforms;

pub use model::{KernelSpec, MassFunction, Phase, Realization, TestFunctionSpec};
pub use oracle::{FormOracle, OracleError};
