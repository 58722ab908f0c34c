//! Monomials and polynomials over the operator algebra.
//!
//! A [`Monomial`] is an ordered product of generators times a multiset of
//! scalar form factors and a power of the deformation parameter. Its
//! `lambda_pow` is the *total* power, including the power implied by the
//! arity of every form and xi label it carries, so the free-field limit is a
//! plain filter on that field.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::label::{canonical_label, conjugate, splice_slots, Label, Mode};
use crate::rational::Rational;

/// The scalar form `(anti..; lin..)`: anti-linear in the left list, linear
/// in the right one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FormFactor {
    anti: Vec<Label>,
    lin: Vec<Label>,
}

impl FormFactor {
    /// Builds and canonicalizes a form. Panics when fewer than two
    /// arguments are given.
    pub fn new(anti: Vec<Label>, lin: Vec<Label>, mode: Mode) -> FormFactor {
        assert!(
            anti.len() + lin.len() >= 2,
            "a form needs at least two arguments"
        );
        let (anti, lin) = splice_slots(&anti, &lin, mode, true);
        FormFactor { anti, lin }
    }

    /// Sorts the slot lists but leaves nested xi labels in place.
    pub fn unflattened(mut anti: Vec<Label>, mut lin: Vec<Label>) -> FormFactor {
        anti.sort();
        lin.sort();
        FormFactor { anti, lin }
    }

    pub fn anti(&self) -> &[Label] {
        &self.anti
    }

    pub fn lin(&self) -> &[Label] {
        &self.lin
    }

    pub fn arity(&self) -> usize {
        self.anti.len() + self.lin.len()
    }

    /// `arity - 2` plus whatever the argument labels carry.
    pub fn lambda_content(&self) -> u32 {
        let nested: u32 = self
            .anti
            .iter()
            .chain(&self.lin)
            .map(Label::lambda_content)
            .sum();
        (self.arity() as u32 - 2) + nested
    }

    /// The conjugate form `(lin..; anti..)`.
    pub fn swapped(&self, mode: Mode) -> FormFactor {
        FormFactor::new(self.lin.clone(), self.anti.clone(), mode)
    }

    fn recanonicalize(&self, mode: Mode) -> FormFactor {
        FormFactor::new(self.anti.clone(), self.lin.clone(), mode)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    Creator(Label),
    Annihilator(Label),
}

impl Generator {
    pub fn label(&self) -> &Label {
        match self {
            Generator::Creator(l) | Generator::Annihilator(l) => l,
        }
    }

    pub fn is_creator(&self) -> bool {
        matches!(self, Generator::Creator(_))
    }

    /// `(a_L)^dagger = ad_L`; the label is not conjugated.
    pub fn dagger(&self) -> Generator {
        match self {
            Generator::Creator(l) => Generator::Annihilator(l.clone()),
            Generator::Annihilator(l) => Generator::Creator(l.clone()),
        }
    }

    fn with_label(&self, label: Label) -> Generator {
        match self {
            Generator::Creator(_) => Generator::Creator(label),
            Generator::Annihilator(_) => Generator::Annihilator(label),
        }
    }
}

/// Canonical key of one term. Field order fixes the printing order: scalar
/// terms come before operator terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    ops: Vec<Generator>,
    forms: Vec<FormFactor>,
    lambda_pow: u32,
}

impl Monomial {
    /// Sorts the forms and every maximal run of same-kind generators (they
    /// commute). Panics if `lambda_pow` is below the implied content.
    pub fn new(mut ops: Vec<Generator>, mut forms: Vec<FormFactor>, lambda_pow: u32) -> Monomial {
        forms.sort();
        sort_runs(&mut ops);
        let m = Monomial {
            ops,
            forms,
            lambda_pow,
        };
        assert!(
            m.implied_lambda() <= lambda_pow,
            "lambda power below the content implied by forms and labels"
        );
        m
    }

    /// Like [`Monomial::new`] but with `lambda_pow` set to the implied value.
    pub fn implied(ops: Vec<Generator>, forms: Vec<FormFactor>) -> Monomial {
        let mut m = Monomial {
            ops,
            forms,
            lambda_pow: 0,
        };
        m.forms.sort();
        sort_runs(&mut m.ops);
        m.lambda_pow = m.implied_lambda();
        m
    }

    pub fn unit() -> Monomial {
        Monomial {
            ops: Vec::new(),
            forms: Vec::new(),
            lambda_pow: 0,
        }
    }

    pub fn ops(&self) -> &[Generator] {
        &self.ops
    }

    pub fn forms(&self) -> &[FormFactor] {
        &self.forms
    }

    pub fn lambda_pow(&self) -> u32 {
        self.lambda_pow
    }

    pub fn degree(&self) -> usize {
        self.ops.len()
    }

    pub fn is_scalar(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn implied_lambda(&self) -> u32 {
        let f: u32 = self.forms.iter().map(FormFactor::lambda_content).sum();
        let o: u32 = self.ops.iter().map(|g| g.label().lambda_content()).sum();
        f + o
    }

    /// Power of an explicit `lam` factor beyond what forms and labels imply.
    pub fn explicit_lambda(&self) -> u32 {
        self.lambda_pow - self.implied_lambda()
    }

    pub fn is_normal_ordered(&self) -> bool {
        first_misordered(&self.ops, false).is_none()
    }

    pub fn product(&self, rhs: &Monomial) -> Monomial {
        let mut ops = Vec::with_capacity(self.ops.len() + rhs.ops.len());
        ops.extend(self.ops.iter().cloned());
        ops.extend(rhs.ops.iter().cloned());
        let mut forms = Vec::with_capacity(self.forms.len() + rhs.forms.len());
        forms.extend(self.forms.iter().cloned());
        forms.extend(rhs.forms.iter().cloned());
        Monomial::new(ops, forms, self.lambda_pow + rhs.lambda_pow)
    }

    /// Reassembles a monomial from parts the caller already holds in
    /// canonical shape, skipping the content check.
    pub(crate) fn from_parts(
        ops: Vec<Generator>,
        forms: Vec<FormFactor>,
        lambda_pow: u32,
    ) -> Monomial {
        let mut m = Monomial {
            ops,
            forms,
            lambda_pow,
        };
        m.forms.sort();
        sort_runs(&mut m.ops);
        m
    }

    pub(crate) fn into_parts(self) -> (Vec<Generator>, Vec<FormFactor>, u32) {
        (self.ops, self.forms, self.lambda_pow)
    }

    fn canonical(&self, mode: Mode) -> Monomial {
        let ops = self
            .ops
            .iter()
            .map(|g| g.with_label(canonical_label(g.label(), mode)))
            .collect();
        let forms = self.forms.iter().map(|f| f.recanonicalize(mode)).collect();
        Monomial::from_parts(ops, forms, self.lambda_pow)
    }

    fn adjoint(&self, mode: Mode) -> Monomial {
        let ops = self.ops.iter().rev().map(Generator::dagger).collect();
        let forms = self.forms.iter().map(|f| f.swapped(mode)).collect();
        Monomial::from_parts(ops, forms, self.lambda_pow)
    }
}

fn sort_runs(ops: &mut [Generator]) {
    let mut start = 0;
    while start < ops.len() {
        let kind = ops[start].is_creator();
        let mut end = start + 1;
        while end < ops.len() && ops[end].is_creator() == kind {
            end += 1;
        }
        ops[start..end].sort();
        start = end;
    }
}

/// Index `i` of a misordered adjacent pair `(a, ad)` at `(i, i+1)`, leftmost
/// or rightmost.
pub(crate) fn first_misordered(ops: &[Generator], rightmost: bool) -> Option<usize> {
    let hit = |i: &usize| !ops[*i].is_creator() && ops[*i + 1].is_creator();
    let n = ops.len().saturating_sub(1);
    if rightmost {
        (0..n).rev().find(hit)
    } else {
        (0..n).find(hit)
    }
}

/// A finite sum of monomials with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Rational::ONE)
    }

    pub fn constant(c: Rational) -> Polynomial {
        Polynomial::term(Monomial::unit(), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    /// The bare deformation parameter.
    pub fn lam() -> Polynomial {
        Polynomial::term(Monomial::new(Vec::new(), Vec::new(), 1), Rational::ONE)
    }

    pub fn annihilator(label: &Label, mode: Mode) -> Polynomial {
        let l = canonical_label(label, mode);
        Polynomial::term(
            Monomial::implied(alloc::vec![Generator::Annihilator(l)], Vec::new()),
            Rational::ONE,
        )
    }

    pub fn creator(label: &Label, mode: Mode) -> Polynomial {
        let l = canonical_label(label, mode);
        Polynomial::term(
            Monomial::implied(alloc::vec![Generator::Creator(l)], Vec::new()),
            Rational::ONE,
        )
    }

    /// `a_L + ad_{L*}`.
    pub fn field(label: &Label, mode: Mode) -> Polynomial {
        let l = canonical_label(label, mode);
        &Polynomial::annihilator(&l, mode) + &Polynomial::creator(&conjugate(&l, mode), mode)
    }

    pub fn form(form: FormFactor) -> Polynomial {
        Polynomial::term(
            Monomial::implied(Vec::new(), alloc::vec![form]),
            Rational::ONE,
        )
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add_assign(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), *c);
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, k: Rational) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), *c * k);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).copied().unwrap_or(Rational::ZERO)
    }

    pub fn scale(&self, k: Rational) -> Polynomial {
        let mut out = Polynomial::zero();
        out.add_scaled(self, k);
        out
    }

    /// Algebra product: concatenated operator words, merged forms. Not
    /// normal-ordered.
    pub fn product(&self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.product(m2), *c1 * *c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = acc.product(self);
        }
        acc
    }

    pub fn canonicalize(&self, mode: Mode) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.canonical(mode), *c);
        }
        out
    }

    /// Reverses each word, swaps creators and annihilators, and replaces each
    /// form `(A;B)` by `(B;A)`. Coefficients are real.
    pub fn adjoint(&self, mode: Mode) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.adjoint(mode), *c);
        }
        out
    }

    /// Drops every term whose total lambda power exceeds `max_pow`.
    pub fn truncate_lambda(&self, max_pow: u32) -> Polynomial {
        self.filter(|m| m.lambda_pow <= max_pow)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(Monomial::is_scalar)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(Monomial::is_normal_ordered)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }
}

impl FromIterator<(Monomial, Rational)> for Polynomial {
    fn from_iter<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, -Rational::ONE);
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.product(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-Rational::ONE)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self.add_assign(&rhs);
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self.add_scaled(&rhs, -Rational::ONE);
        self
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        self.product(&rhs)
    }
}
