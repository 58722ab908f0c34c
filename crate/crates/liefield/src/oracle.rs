//! Numeric evaluation of scalar polynomials through a realized model.

use liefield_core::{FormFactor, Polynomial};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("no test function bound to label `{0}`")]
    UnknownLabel(String),
    #[error("expression is not scalar: {0}")]
    NotScalar(String),
    #[error("G vanishes at momentum {0:?}; xi is undefined there")]
    ZeroDivisor(Vec<f64>),
    #[error("{0}")]
    Unsupported(String),
    #[error("invalid model: {0}")]
    Model(String),
}

/// Assigns numbers to flattened forms. Implementations are immutable after
/// construction apart from internal caches, so evaluation can be shared
/// between threads.
pub trait FormOracle: Send + Sync {
    fn lambda(&self) -> f64;

    /// Value of one form, including its implied powers of lambda.
    fn form_value(&self, form: &FormFactor) -> Result<Complex64, OracleError>;

    /// Value of a scalar polynomial. Only the explicit lambda power of each
    /// monomial is applied here; the rest lives inside the form values.
    fn evaluate(&self, p: &Polynomial) -> Result<Complex64, OracleError> {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in p.iter() {
            if !m.is_scalar() {
                return Err(OracleError::NotScalar(
                    liefield_core::print::monomial_to_string(m),
                ));
            }
            let mut v =
                Complex64::new(c.to_f64(), 0.0) * self.lambda().powi(m.explicit_lambda() as i32);
            for form in m.forms() {
                if v == Complex64::new(0.0, 0.0) {
                    break;
                }
                v *= self.form_value(form)?;
            }
            total += v;
        }
        Ok(total)
    }
}
