//! Numeric residual of the field commutator on the lattice.

use liefield_core::normal::field_commutator;
use liefield_core::{Generator, Label, Mode};
use num_complex::Complex64;

use crate::lattice::LatticeOracle;
use crate::oracle::{FormOracle, OracleError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorResidual {
    /// `|scalar part|`.
    pub scalar: f64,
    /// Max norm of the summed annihilator labels.
    pub annihilator: f64,
    /// Max norm of the summed creator labels.
    pub creator: f64,
}

impl CommutatorResidual {
    pub fn max(&self) -> f64 {
        self.scalar.max(self.annihilator).max(self.creator)
    }
}

/// Evaluates the quantum-mode `[phi_f, phi_g]` through the lattice model.
/// Operator terms are summed as momentum arrays: `sum c_i a_{L_i}` vanishes
/// exactly when `sum c_i L~_i` does (creators are antilinear, so their
/// coefficients enter conjugated).
pub fn field_commutator_residual(
    oracle: &LatticeOracle,
    f: &Label,
    g: &Label,
) -> Result<CommutatorResidual, OracleError> {
    let quantum = oracle.rebind(oracle.lambda(), Mode::Quantum);
    let expr = field_commutator(f, g, Mode::Quantum);
    let n = oracle.lattice().len();
    let mut scalar = Complex64::new(0.0, 0.0);
    let mut ann = vec![Complex64::new(0.0, 0.0); n];
    let mut cre = vec![Complex64::new(0.0, 0.0); n];
    for (m, c) in expr.iter() {
        let mut coef =
            Complex64::new(c.to_f64(), 0.0) * quantum.lambda().powi(m.explicit_lambda() as i32);
        for form in m.forms() {
            coef *= quantum.form_value(form)?;
        }
        match m.ops() {
            [] => scalar += coef,
            [op] => {
                let arr = quantum.label_momentum(op.label())?;
                let (bucket, k) = match op {
                    Generator::Annihilator(_) => (&mut ann, coef),
                    Generator::Creator(_) => (&mut cre, coef.conj()),
                };
                for (b, x) in bucket.iter_mut().zip(arr.iter()) {
                    *b += k * x;
                }
            }
            _ => {
                return Err(OracleError::Unsupported(
                    "commutator term with several operators".into(),
                ))
            }
        }
    }
    let max = |v: &[Complex64]| v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    Ok(CommutatorResidual {
        scalar: scalar.norm(),
        annihilator: max(&ann),
        creator: max(&cre),
    })
}
