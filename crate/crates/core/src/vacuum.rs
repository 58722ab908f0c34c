//! Vacuum expectation values, moments, cumulants and connected correlators.
//!
//! Vectors are held as polynomials whose monomials carry creators only,
//! standing for `ad_{h1}..ad_{hk}|0>`. An annihilator acts on such a vector
//! through
//!
//! `a_f ad_H |0> = sum_{S nonempty} [ (H_S; f) ad_{H\S} + ad_{H\S} ad_{xi(f; H_S)} ] |0>`
//!
//! with `S` running over position subsets of `H`.

use alloc::vec::Vec;

use crate::combinatorics::{eulerian, set_partitions};
use crate::expr::{FormFactor, Generator, Monomial, Polynomial};
use crate::label::{canonical_label, Label, Mode};
use crate::rational::Rational;

/// Applies operator words to creator-only vectors.
#[derive(Clone, Copy, Debug)]
pub struct Vacuum {
    pub mode: Mode,
    /// Drop every term whose lambda power exceeds this cap.
    pub lambda_cap: Option<u32>,
}

impl Vacuum {
    pub fn new(mode: Mode) -> Vacuum {
        Vacuum {
            mode,
            lambda_cap: None,
        }
    }

    pub fn free_field(mode: Mode) -> Vacuum {
        Vacuum {
            mode,
            lambda_cap: Some(0),
        }
    }

    fn keep(&self, pow: u32) -> bool {
        self.lambda_cap.is_none_or(|cap| pow <= cap)
    }

    /// `|0>` as a polynomial.
    pub fn vacuum() -> Polynomial {
        Polynomial::one()
    }

    /// With `last` set only the terms that reach the vacuum are produced.
    fn annihilate(&self, f: &Label, state: &Polynomial, last: bool) -> Polynomial {
        let mut out = Polynomial::zero();
        let fc = f.lambda_content();
        for (m, c) in state.iter() {
            let creators: Vec<Label> = m.ops().iter().map(|g| g.label().clone()).collect();
            let k = creators.len();
            if k == 0 {
                continue;
            }
            let full = (1u32 << k) - 1;
            let first = if last { full } else { 1 };
            for mask in first..=full {
                let mut picked = Vec::new();
                let mut rest = Vec::new();
                for (i, h) in creators.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        picked.push(h.clone());
                    } else {
                        rest.push(h.clone());
                    }
                }
                let s = picked.len() as u32;
                let pow_form = m.lambda_pow() + s - 1 + fc;
                if self.keep(pow_form) {
                    let mut forms = m.forms().to_vec();
                    forms.push(FormFactor::new(
                        picked.clone(),
                        alloc::vec![f.clone()],
                        self.mode,
                    ));
                    let ops = rest.iter().cloned().map(Generator::Creator).collect();
                    out.add_term(Monomial::from_parts(ops, forms, pow_form), *c);
                }
                let pow_xi = m.lambda_pow() + s + fc;
                if !last && self.keep(pow_xi) {
                    let xi = canonical_label(&Label::xi(alloc::vec![f.clone()], picked), self.mode);
                    let mut ops: Vec<Generator> =
                        rest.into_iter().map(Generator::Creator).collect();
                    ops.push(Generator::Creator(xi));
                    out.add_term(Monomial::from_parts(ops, m.forms().to_vec(), pow_xi), *c);
                }
            }
        }
        out
    }

    fn create(&self, h: &Label, state: &Polynomial) -> Polynomial {
        state
            .iter()
            .map(|(m, c)| {
                let mut ops = m.ops().to_vec();
                ops.push(Generator::Creator(h.clone()));
                (
                    Monomial::from_parts(
                        ops,
                        m.forms().to_vec(),
                        m.lambda_pow() + h.lambda_content(),
                    ),
                    *c,
                )
            })
            .collect()
    }

    /// Applies a generator word, rightmost letter first.
    pub fn apply_word(&self, word: &[Generator], state: &Polynomial) -> Polynomial {
        self.run_word(word, state, false)
    }

    fn run_word(&self, word: &[Generator], state: &Polynomial, to_vacuum: bool) -> Polynomial {
        let mut cur = state.clone();
        for (pos, g) in word.iter().enumerate().rev() {
            if cur.is_zero() {
                break;
            }
            cur = match g {
                Generator::Creator(h) => self.create(h, &cur),
                Generator::Annihilator(f) => self.annihilate(f, &cur, to_vacuum && pos == 0),
            };
        }
        if to_vacuum {
            cur.filter(Monomial::is_scalar)
        } else {
            cur
        }
    }

    /// `p |state>`, terms scaled by their scalar factors.
    pub fn apply(&self, p: &Polynomial, state: &Polynomial) -> Polynomial {
        self.apply_inner(p, state, false)
    }

    /// Vacuum component of `p |state>`.
    pub fn project(&self, p: &Polynomial, state: &Polynomial) -> Polynomial {
        self.apply_inner(p, state, true)
    }

    fn apply_inner(&self, p: &Polynomial, state: &Polynomial, to_vacuum: bool) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.iter() {
            if to_vacuum && m.ops().first().is_some_and(Generator::is_creator) {
                continue;
            }
            let v = self.run_word(m.ops(), state, to_vacuum);
            for (vm, vc) in v.iter() {
                let pow = vm.lambda_pow() + m.lambda_pow() - ops_content(m);
                if !self.keep(pow) {
                    continue;
                }
                let mut forms = vm.forms().to_vec();
                forms.extend(m.forms().iter().cloned());
                out.add_term(
                    Monomial::from_parts(vm.ops().to_vec(), forms, pow),
                    *vc * *c,
                );
            }
        }
        out
    }

    /// `<0| p |0>`.
    pub fn vev(&self, p: &Polynomial) -> Polynomial {
        self.project(p, &Vacuum::vacuum())
    }

    /// `<A|B>` for creator-only vectors.
    pub fn inner_product(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.project(&a.adjoint(self.mode), b)
    }
}

/// Lambda content carried by the operator labels of `m`: it moves into the
/// vector when the word is applied, so it must not be counted twice.
fn ops_content(m: &Monomial) -> u32 {
    m.ops().iter().map(|g| g.label().lambda_content()).sum()
}

pub fn vev(p: &Polynomial, mode: Mode) -> Polynomial {
    Vacuum::new(mode).vev(p)
}

/// Reference route: normal-order, then keep the operator-free terms.
pub fn vev_by_normal_order(
    p: &Polynomial,
    mode: Mode,
) -> Result<Polynomial, crate::NormalOrderError> {
    let mut e = crate::NormalOrderer::with_mode(mode);
    Ok(e.normal_order(p)?.filter(Monomial::is_scalar))
}

/// `<phi_f^n>` for `n = 1..=nmax`.
pub fn moments(f: &Label, nmax: usize, mode: Mode) -> Vec<Polynomial> {
    let vac = Vacuum::new(mode);
    let phi = Polynomial::field(f, mode);
    let mut state = Vacuum::vacuum();
    let mut out = Vec::with_capacity(nmax);
    for _ in 0..nmax {
        state = vac.apply(&phi, &state);
        out.push(state.filter(Monomial::is_scalar));
    }
    out
}

/// `(f*^k; f^(n-k))` summed with Eulerian weights.
pub fn cumulant_closed_form(f: &Label, n: usize, mode: Mode) -> Polynomial {
    let mut out = Polynomial::zero();
    if n < 2 {
        return out;
    }
    let fc = canonical_label(f, mode);
    let fs = crate::label::conjugate(&fc, mode);
    for k in 1..n {
        let w = eulerian((n - 1) as u32, (k - 1) as u32);
        let anti = alloc::vec![fs.clone(); k];
        let lin = alloc::vec![fc.clone(); n - k];
        out.add_scaled(
            &Polynomial::form(FormFactor::new(anti, lin, mode)),
            Rational::from_integer(w as i128),
        );
    }
    out
}

/// Moebius transform over set partitions of `0..n`:
/// `sum_pi (-1)^(|pi|-1) (|pi|-1)! prod_B moment(B)`.
pub fn moebius(n: usize, mut moment: impl FnMut(&[usize]) -> Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for pi in set_partitions(n) {
        let b = pi.len();
        let mut w = Rational::from_integer(crate::combinatorics::factorial(b as u32 - 1) as i128);
        if b % 2 == 0 {
            w = -w;
        }
        let mut prod = Polynomial::one();
        for block in &pi {
            prod = prod.product(&moment(block));
            if prod.is_zero() {
                break;
            }
        }
        out.add_scaled(&prod, w);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cumulant routes disagree at order {order}")]
pub struct CumulantMismatch {
    pub order: usize,
    pub from_moments: Polynomial,
    pub closed_form: Polynomial,
}

/// `C_1..C_nmax`, computed from moments and from the closed form; a
/// disagreement is an error.
pub fn cumulants(f: &Label, nmax: usize, mode: Mode) -> Result<Vec<Polynomial>, CumulantMismatch> {
    let m = moments(f, nmax, mode);
    let mut out = Vec::with_capacity(nmax);
    for n in 1..=nmax {
        let from_moments = moebius(n, |block| m[block.len() - 1].clone());
        let closed_form = cumulant_closed_form(f, n, mode);
        if from_moments != closed_form {
            return Err(CumulantMismatch {
                order: n,
                from_moments,
                closed_form,
            });
        }
        out.push(closed_form);
    }
    Ok(out)
}

/// `<phi_{l_i1} .. phi_{l_ik}>` with indices in increasing order.
pub fn joint_moment(labels: &[Label], indices: &[usize], vac: &Vacuum) -> Polynomial {
    let mut state = Vacuum::vacuum();
    for &i in indices.iter().rev() {
        state = vac.apply(&Polynomial::field(&labels[i], vac.mode), &state);
    }
    state.filter(Monomial::is_scalar)
}

/// Connected part of `<phi_{f1} .. phi_{fn}>`, `phi_{f1}` leftmost.
pub fn connected_correlator(labels: &[Label], mode: Mode) -> Polynomial {
    let vac = Vacuum::new(mode);
    let mut cache: alloc::collections::BTreeMap<Vec<usize>, Polynomial> =
        alloc::collections::BTreeMap::new();
    moebius(labels.len(), |block| {
        cache
            .entry(block.to_vec())
            .or_insert_with(|| joint_moment(labels, block, &vac))
            .clone()
    })
}
