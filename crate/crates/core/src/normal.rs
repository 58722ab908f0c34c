//! Normal ordering by repeated application of the deformed commutator
//!
//! `a_f ad_g = ad_g a_f + (g;f) + a_{xi(g;f)} + ad_{xi(f;g)}`
//!
//! until every creator stands left of every annihilator.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::expr::{first_misordered, FormFactor, Generator, Monomial, Polynomial};
use crate::label::{canonical_label, Label, Mode};
use crate::rational::Rational;

pub const DEFAULT_MAX_DEGREE: usize = 16;

/// Which misordered adjacent pair is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalOrderError {
    #[error("monomial of degree {degree} exceeds the degree cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub mode: Mode,
    pub strategy: Strategy,
    pub max_degree: usize,
    /// Splice nested xi labels. Turning this off breaks the algebra and is
    /// only useful as a negative control.
    pub flatten: bool,
}

impl Options {
    pub fn new(mode: Mode) -> Options {
        Options {
            mode,
            strategy: Strategy::Leftmost,
            max_degree: DEFAULT_MAX_DEGREE,
            flatten: true,
        }
    }
}

struct Commutation {
    form: FormFactor,
    xi_annihilator: Label,
    xi_creator: Label,
}

/// Rewrite engine with a memo of commutator results keyed by label pair.
/// Not shared between threads; give each worker its own.
pub struct NormalOrderer {
    opts: Options,
    memo: BTreeMap<(Label, Label), Arc<Commutation>>,
}

impl NormalOrderer {
    pub fn new(opts: Options) -> NormalOrderer {
        NormalOrderer {
            opts,
            memo: BTreeMap::new(),
        }
    }

    pub fn with_mode(mode: Mode) -> NormalOrderer {
        NormalOrderer::new(Options::new(mode))
    }

    pub fn options(&self) -> &Options {
        &self.opts
    }

    fn xi(&self, anti: Label, lin: Label) -> Label {
        let raw = Label::xi(alloc::vec![anti], alloc::vec![lin]);
        if self.opts.flatten {
            canonical_label(&raw, self.opts.mode)
        } else {
            raw
        }
    }

    fn commutation(&mut self, f: &Label, g: &Label) -> Arc<Commutation> {
        let key = (f.clone(), g.clone());
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let form = if self.opts.flatten {
            FormFactor::new(
                alloc::vec![g.clone()],
                alloc::vec![f.clone()],
                self.opts.mode,
            )
        } else {
            FormFactor::unflattened(alloc::vec![g.clone()], alloc::vec![f.clone()])
        };
        let c = Arc::new(Commutation {
            form,
            xi_annihilator: self.xi(g.clone(), f.clone()),
            xi_creator: self.xi(f.clone(), g.clone()),
        });
        self.memo.insert(key, c.clone());
        c
    }

    /// `[a_f, ad_g] = (g;f) + a_{xi(g;f)} + ad_{xi(f;g)}`.
    pub fn commutator_step(&mut self, f: &Label, g: &Label) -> Polynomial {
        let c = self.commutation(f, g);
        let mut p = Polynomial::zero();
        p.add_term(
            Monomial::from_parts(
                Vec::new(),
                alloc::vec![c.form.clone()],
                c.form.lambda_content(),
            ),
            Rational::ONE,
        );
        for gen in [
            Generator::Annihilator(c.xi_annihilator.clone()),
            Generator::Creator(c.xi_creator.clone()),
        ] {
            let pow = gen.label().lambda_content();
            p.add_term(
                Monomial::from_parts(alloc::vec![gen], Vec::new(), pow),
                Rational::ONE,
            );
        }
        p
    }

    pub fn normal_order(&mut self, p: &Polynomial) -> Result<Polynomial, NormalOrderError> {
        let mut pending: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in p.iter() {
            if m.degree() > self.opts.max_degree {
                return Err(NormalOrderError::DegreeOverflow {
                    degree: m.degree(),
                    cap: self.opts.max_degree,
                });
            }
            merge(&mut pending, m.clone(), *c);
        }
        let mut out = Polynomial::zero();
        let rightmost = self.opts.strategy == Strategy::Rightmost;
        while let Some((m, c)) = pending.pop_first() {
            let Some(i) = first_misordered(m.ops(), rightmost) else {
                out.add_term(m, c);
                continue;
            };
            let (ops, forms, pow) = m.into_parts();
            let f = ops[i].label().clone();
            let g = ops[i + 1].label().clone();
            let comm = self.commutation(&f, &g);

            let mut swapped = ops.clone();
            swapped.swap(i, i + 1);
            merge(
                &mut pending,
                Monomial::from_parts(swapped, forms.clone(), pow),
                c,
            );

            let mut rest = ops.clone();
            rest.drain(i..i + 2);
            let mut with_form = forms.clone();
            with_form.push(comm.form.clone());
            merge(&mut pending, Monomial::from_parts(rest, with_form, pow), c);

            for gen in [
                Generator::Annihilator(comm.xi_annihilator.clone()),
                Generator::Creator(comm.xi_creator.clone()),
            ] {
                let mut replaced = ops.clone();
                replaced.splice(i..i + 2, [gen]);
                merge(
                    &mut pending,
                    Monomial::from_parts(replaced, forms.clone(), pow + 1),
                    c,
                );
            }
        }
        Ok(out)
    }

    /// `NO(pq - qp)`.
    pub fn commutator(
        &mut self,
        p: &Polynomial,
        q: &Polynomial,
    ) -> Result<Polynomial, NormalOrderError> {
        let w = &p.product(q) - &q.product(p);
        self.normal_order(&w)
    }
}

fn merge(map: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    use alloc::collections::btree_map::Entry;
    match map.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = *o.get() + c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

pub fn normal_order(p: &Polynomial, mode: Mode) -> Result<Polynomial, NormalOrderError> {
    NormalOrderer::with_mode(mode).normal_order(p)
}

pub fn commutator_step(f: &Label, g: &Label, mode: Mode) -> Polynomial {
    NormalOrderer::with_mode(mode).commutator_step(f, g)
}

/// Re-canonicalizes so that every nested xi is spliced into its parent.
pub fn xi_flatten(p: &Polynomial, mode: Mode) -> Polynomial {
    p.canonicalize(mode)
}

/// `NO([phi_f, phi_g])`.
pub fn field_commutator(f: &Label, g: &Label, mode: Mode) -> Polynomial {
    let pf = Polynomial::field(f, mode);
    let pg = Polynomial::field(g, mode);
    NormalOrderer::with_mode(mode)
        .commutator(&pf, &pg)
        .expect("degree two never overflows")
}

#[derive(Clone, Debug)]
pub struct JacobiViolation {
    pub triple: [Polynomial; 3],
    pub residual: Polynomial,
}

#[derive(Clone, Debug, Default)]
pub struct JacobiReport {
    pub triples_checked: usize,
    pub violations: Vec<JacobiViolation>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Normal-ordered monomials `ad..ad a..a` over `labels` with total degree
/// in `1..=max_degree`, each with unit coefficient.
pub fn basis_monomials(labels: &[Label], max_degree: usize, mode: Mode) -> Vec<Monomial> {
    let labels: Vec<Label> = labels.iter().map(|l| canonical_label(l, mode)).collect();
    let mut out = Vec::new();
    for deg in 1..=max_degree {
        for n_cre in 0..=deg {
            for cre in crate::combinatorics::multisets(labels.len(), n_cre) {
                for ann in crate::combinatorics::multisets(labels.len(), deg - n_cre) {
                    let mut ops: Vec<Generator> = cre
                        .iter()
                        .map(|&i| Generator::Creator(labels[i].clone()))
                        .collect();
                    ops.extend(
                        ann.iter()
                            .map(|&i| Generator::Annihilator(labels[i].clone())),
                    );
                    out.push(Monomial::implied(ops, Vec::new()));
                }
            }
        }
    }
    out
}

/// Checks `[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0` over every multiset of
/// three basis monomials whose degrees add up to at most `degree`.
pub fn jacobi_check(
    labels: &[Label],
    degree: usize,
    opts: Options,
) -> Result<JacobiReport, NormalOrderError> {
    let basis = basis_monomials(labels, degree.saturating_sub(2).max(1), opts.mode);
    let mut engine = NormalOrderer::new(opts);
    let mut report = JacobiReport::default();
    for idx in crate::combinatorics::multisets(basis.len(), 3) {
        let ms = [&basis[idx[0]], &basis[idx[1]], &basis[idx[2]]];
        if ms.iter().map(|m| m.degree()).sum::<usize>() > degree {
            continue;
        }
        let [x, y, z] = ms.map(|m| Polynomial::term(m.clone(), Rational::ONE));
        let residual = jacobi_residual(&mut engine, &x, &y, &z)?;
        report.triples_checked += 1;
        if !residual.is_zero() {
            report.violations.push(JacobiViolation {
                triple: [x, y, z],
                residual,
            });
        }
    }
    Ok(report)
}

pub fn jacobi_residual(
    engine: &mut NormalOrderer,
    x: &Polynomial,
    y: &Polynomial,
    z: &Polynomial,
) -> Result<Polynomial, NormalOrderError> {
    let yz = engine.commutator(y, z)?;
    let zx = engine.commutator(z, x)?;
    let xy = engine.commutator(x, y)?;
    let mut r = engine.commutator(x, &yz)?;
    r.add_assign(&engine.commutator(y, &zx)?);
    r.add_assign(&engine.commutator(z, &xy)?);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn l(s: &str) -> Label {
        Label::external(s)
    }

    #[test]
    fn commutation_relation() {
        let p = commutator_step(&l("f"), &l("g"), Mode::Quantum);
        assert_eq!(
            p,
            parse("form(g;f) + a(xi(g;f)) + ad(xi(f;g))", Mode::Quantum).unwrap()
        );
        assert_eq!(
            p.truncate_lambda(0),
            parse("form(g;f)", Mode::Quantum).unwrap()
        );
    }

    #[test]
    fn two_creators_give_ten_terms() {
        let p = parse("a(g)*ad(f1)*ad(f2)", Mode::Classical).unwrap();
        assert_eq!(normal_order(&p, Mode::Classical).unwrap().len(), 10);
    }

    #[test]
    fn already_ordered_is_unchanged() {
        let p = parse("ad(f)*a(g)", Mode::Quantum).unwrap();
        assert_eq!(normal_order(&p, Mode::Quantum).unwrap(), p);
    }

    #[test]
    fn annihilators_commute() {
        let p = parse("a(f)*a(g) - a(g)*a(f)", Mode::Quantum).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn classical_fields_commute() {
        assert!(field_commutator(&l("f"), &l("g"), Mode::Classical).is_zero());
        assert!(!field_commutator(&l("f"), &l("g"), Mode::Quantum).is_zero());
        assert!(field_commutator(&l("f"), &l("f"), Mode::Quantum).is_zero());
    }

    #[test]
    fn degree_cap_is_loud() {
        let mut opts = Options::new(Mode::Quantum);
        opts.max_degree = 2;
        let p = parse("a(g)*ad(f)*ad(h)", Mode::Quantum).unwrap();
        assert!(NormalOrderer::new(opts).normal_order(&p).is_err());
    }

    #[test]
    fn unflattened_engine_breaks_jacobi() {
        let mut opts = Options::new(Mode::Quantum);
        opts.flatten = false;
        let mut e = NormalOrderer::new(opts);
        let x = parse("a(f)", Mode::Quantum).unwrap();
        let y = parse("a(g)", Mode::Quantum).unwrap();
        let z = parse("ad(h)", Mode::Quantum).unwrap();
        assert!(!jacobi_residual(&mut e, &x, &y, &z).unwrap().is_zero());
        let mut e = NormalOrderer::with_mode(Mode::Quantum);
        assert!(jacobi_residual(&mut e, &x, &y, &z).unwrap().is_zero());
    }
}
