//! Field measurements in a one-particle state `|g> = ad_{g*}|0>`.

use liefield_core::states::raw_state;
use liefield_core::vacuum::Vacuum;
use liefield_core::{parse, Label, Mode, Polynomial};
use num_complex::Complex64;

use crate::oracle::{FormOracle, OracleError};

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringReport {
    /// `<g|g>`.
    pub norm: Complex64,
    /// `<g|phi_f^k|g> / <g|g>` for `k = 1, 2, 3`.
    pub moments: [Complex64; 3],
    /// Mean and the connected second and third moments, from `moments`.
    pub connected: [Complex64; 3],
    /// The same three quantities from the closed rational combinations.
    pub closed_form: [Complex64; 3],
}

impl ScatteringReport {
    /// Largest relative gap between the two routes.
    pub fn route_gap(&self) -> f64 {
        self.connected
            .iter()
            .zip(&self.closed_form)
            .map(|(a, b)| (a - b).norm() / (1.0 + a.norm().max(b.norm())))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScatteringError {
    #[error("state has zero norm")]
    ZeroNorm,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Symbolic `<g|phi_f^k|g>` for `k = 0..=3`, classical mode.
pub fn symbolic_moments(g: &Label, f: &Label) -> Vec<Polynomial> {
    let mode = Mode::Classical;
    let vac = Vacuum::new(mode);
    let ket = raw_state(std::slice::from_ref(g), mode);
    let phi = Polynomial::field(f, mode);
    let mut state = ket.clone();
    let mut out = vec![vac.inner_product(&ket, &ket)];
    for _ in 0..3 {
        state = vac.apply(&phi, &state);
        out.push(vac.inner_product(&ket, &state));
    }
    out
}

/// Closed rational combinations for real `g`, `f`, as
/// `(numerator terms over powers of (g;g))`.
pub fn closed_form_terms(g: &str, f: &str) -> [Vec<(String, i32)>; 3] {
    let form = |a: &[&str], b: &[&str]| format!("form({};{})", a.join(","), b.join(","));
    let first = vec![(format!("2*{}", form(&[g], &[g, f])), 1)];
    let second = vec![
        (form(&[], &[f, f]), 0),
        (
            format!(
                "6*{} + 2*{}*{}",
                form(&[g], &[g, f, f]),
                form(&[g], &[f]),
                form(&[], &[g, f])
            ),
            1,
        ),
        (format!("-4*{}^2", form(&[g], &[g, f])), 2),
    ];
    let third = vec![
        (format!("2*{}", form(&[], &[f, f, f])), 0),
        (
            format!(
                "6*{}*{} + 6*{}*{} + 24*{}",
                form(&[g], &[f]),
                form(&[], &[g, f, f]),
                form(&[], &[g, f]),
                form(&[g], &[f, f]),
                form(&[g], &[g, f, f, f])
            ),
            1,
        ),
        (
            format!(
                "-12*{}*{}*{} - 36*{}*{}",
                form(&[g], &[g, f]),
                form(&[g], &[f]),
                form(&[], &[g, f]),
                form(&[g], &[g, f]),
                form(&[g], &[g, f, f])
            ),
            2,
        ),
        (format!("16*{}^3", form(&[g], &[g, f])), 3),
    ];
    [first, second, third]
}

pub fn scattering_report(
    g: &Label,
    f: &Label,
    oracle: &dyn FormOracle,
) -> Result<ScatteringReport, ScatteringError> {
    let sym = symbolic_moments(g, f);
    let vals: Vec<Complex64> = sym
        .iter()
        .map(|p| oracle.evaluate(p))
        .collect::<Result<_, _>>()?;
    let norm = vals[0];
    if norm.norm() == 0.0 {
        return Err(ScatteringError::ZeroNorm);
    }
    let mu = [vals[1] / norm, vals[2] / norm, vals[3] / norm];
    let connected = [
        mu[0],
        mu[1] - mu[0] * mu[0],
        mu[2] - mu[1] * mu[0] * 3.0 + mu[0] * mu[0] * mu[0] * 2.0,
    ];
    let mut closed = [Complex64::new(0.0, 0.0); 3];
    for (slot, terms) in closed.iter_mut().zip(closed_form_terms(g.name(), f.name())) {
        for (text, power) in terms {
            let p = parse(&text, Mode::Classical).expect("closed-form text parses");
            *slot += oracle.evaluate(&p)? / norm.powi(power);
        }
    }
    Ok(ScatteringReport {
        norm,
        moments: mu,
        connected,
        closed_form: closed,
    })
}
