//! Continuum realization for Gaussian wave packets.
//!
//! Momentum route: every slot becomes a function `H(v)` (`G f~` for linear
//! slots, `conj(G(-v) a~(-v))` for antilinear ones) and the form is
//! `lam^{k-2} int delta(sum v) prod H(v_i)`, evaluated as a tree of pair
//! convolutions over truncated boxes.
//!
//! Real-space route: `f^gimel(y) = (2 pi)^{-d} int G(u) f~(u) e^{i u.y} du`
//! and `(;f1..fn) = lam^{n-2} (2 pi)^{d(n-1)} int prod f_i^gimel(y) dy`.

use std::collections::BTreeMap;

use liefield_core::{FormFactor, Label, Mode};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::model::{KernelSpec, MassFunction, Realization, TestFunctionSpec};
use crate::oracle::{FormOracle, OracleError};
use crate::quadrature::{Box, GaussLegendre, KahanSum};

#[derive(Debug, Clone, PartialEq)]
struct Packet {
    center: Vec<f64>,
    width: f64,
    carrier: Vec<f64>,
}

impl Packet {
    fn transform(&self, k: &[f64]) -> Complex64 {
        TestFunctionSpec::gaussian_transform(&self.center, self.width, &self.carrier, k)
    }
}

/// One slot of a form as a function of its integration momentum.
#[derive(Debug, Clone)]
struct Slot<'a> {
    packet: &'a Packet,
    /// Label carries a star: `conj(f~(-k))`.
    starred: bool,
    /// Antilinear slot: the variable is the negated momentum.
    anti: bool,
    mass: MassFunction,
}

impl Slot<'_> {
    /// Momentum at which the packet's own transform is evaluated.
    fn flips(&self) -> bool {
        self.starred ^ self.anti
    }

    fn eval(&self, v: &[f64]) -> Complex64 {
        // lin, plain:   G(v) f~(v)
        // lin, star:    G(v) conj(f~(-v))
        // anti, plain:  conj(G(-v) f~(-v))
        // anti, star:   conj(G(-v)) f~(v)
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        match (self.anti, self.starred) {
            (false, false) => self.mass.amplitude(v) * self.packet.transform(v),
            (false, true) => self.mass.amplitude(v) * self.packet.transform(&neg).conj(),
            (true, false) => (self.mass.amplitude(&neg) * self.packet.transform(&neg)).conj(),
            (true, true) => self.mass.amplitude(&neg).conj() * self.packet.transform(v),
        }
    }

    fn support(&self, sigmas: f64) -> Box {
        let b = Box::around(&self.packet.carrier, sigmas / self.packet.width);
        if self.flips() {
            b.negated()
        } else {
            b
        }
    }
}

pub struct ContinuumOracle {
    lambda: f64,
    mode: Mode,
    mass: MassFunction,
    dims: usize,
    sigmas: f64,
    rule: GaussLegendre,
    position_rule: GaussLegendre,
    packets: BTreeMap<String, Packet>,
}

impl std::fmt::Debug for ContinuumOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ContinuumOracle")
            .field("lambda", &self.lambda)
            .field("dims", &self.dims)
            .field("order", &self.rule.nodes.len())
            .field("labels", &self.packets.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl ContinuumOracle {
    pub fn new(
        spec: &KernelSpec,
        bindings: &BTreeMap<String, TestFunctionSpec>,
    ) -> Result<ContinuumOracle, OracleError> {
        let Realization::Continuum {
            order,
            position_order,
            sigmas,
        } = spec.realization
        else {
            return Err(OracleError::Model(
                "continuum oracle needs a continuum realization".into(),
            ));
        };
        if spec.mass.width <= 0.0 {
            return Err(OracleError::Model(
                "mass-function width must be positive so that M > 0".into(),
            ));
        }
        if spec.mode == Mode::Classical && !spec.mass.phase.is_classical() {
            return Err(OracleError::Model(
                "classical mode needs an odd phase profile".into(),
            ));
        }
        let mut packets = BTreeMap::new();
        for (name, f) in bindings {
            f.validate(spec.dims()).map_err(OracleError::Model)?;
            let TestFunctionSpec::Gaussian {
                center,
                width,
                carrier,
            } = f
            else {
                return Err(OracleError::Unsupported(format!(
                    "label `{name}`: the continuum realization takes gaussian test functions only"
                )));
            };
            packets.insert(
                name.clone(),
                Packet {
                    center: center.clone(),
                    width: *width,
                    carrier: carrier.clone(),
                },
            );
        }
        Ok(ContinuumOracle {
            lambda: spec.lambda,
            mode: spec.mode,
            mass: spec.mass,
            dims: spec.dims(),
            sigmas,
            rule: GaussLegendre::new(order),
            position_rule: GaussLegendre::new(position_order),
            packets,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn packet(&self, label: &Label) -> Result<&Packet, OracleError> {
        if label.is_xi() {
            return Err(OracleError::Unsupported(format!(
                "continuum forms take flattened arguments; got `{label:?}`"
            )));
        }
        let name = if label.is_starred() {
            label.star()
        } else {
            label.clone()
        };
        self.packets
            .get(name.name())
            .ok_or_else(|| OracleError::UnknownLabel(name.name().to_string()))
    }

    fn slot<'a>(&'a self, label: &Label, anti: bool) -> Result<Slot<'a>, OracleError> {
        Ok(Slot {
            packet: self.packet(label)?,
            starred: label.is_starred(),
            anti,
            mass: self.mass,
        })
    }

    /// `C(s) = int H1(v) H2(s - v) dv`.
    fn pair(&self, a: &Slot, b: &Slot, s: &[f64]) -> Complex64 {
        let ba = a.support(self.sigmas);
        let bb = b.support(self.sigmas).negated().shifted(s);
        let region = ba.intersect(&bb);
        region.integrate(&self.rule, |v| {
            let w: Vec<f64> = s.iter().zip(v).map(|(x, y)| x - y).collect();
            a.eval(v) * b.eval(&w)
        })
    }

    /// Momentum-conservation route, arity 2 to 4.
    pub fn momentum_value(&self, anti: &[Label], lin: &[Label]) -> Result<Complex64, OracleError> {
        let mut slots = Vec::new();
        for l in anti {
            slots.push(self.slot(l, true)?);
        }
        for l in lin {
            slots.push(self.slot(l, false)?);
        }
        let k = slots.len();
        let sig = self.sigmas;
        let raw = match k {
            2 => {
                let region = slots[0]
                    .support(sig)
                    .intersect(&slots[1].support(sig).negated());
                region.integrate(&self.rule, |v| {
                    let w: Vec<f64> = v.iter().map(|x| -x).collect();
                    slots[0].eval(v) * slots[1].eval(&w)
                })
            }
            3 => {
                let region = slots[0]
                    .support(sig)
                    .plus(&slots[1].support(sig))
                    .intersect(&slots[2].support(sig).negated());
                self.outer(&region, |s| {
                    let neg: Vec<f64> = s.iter().map(|x| -x).collect();
                    self.pair(&slots[0], &slots[1], s) * slots[2].eval(&neg)
                })
            }
            4 => {
                let left = slots[0].support(sig).plus(&slots[1].support(sig));
                let right = slots[2].support(sig).plus(&slots[3].support(sig)).negated();
                self.outer(&left.intersect(&right), |s| {
                    let neg: Vec<f64> = s.iter().map(|x| -x).collect();
                    self.pair(&slots[0], &slots[1], s) * self.pair(&slots[2], &slots[3], &neg)
                })
            }
            _ => {
                return Err(OracleError::Unsupported(format!(
                    "continuum momentum route handles 2 to 4 arguments, got {k}"
                )))
            }
        };
        Ok(raw * self.lambda.powi(k as i32 - 2))
    }

    fn outer(&self, region: &Box, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Complex64 {
        if region.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let nodes = region.nodes(&self.rule);
        let parts: Vec<Complex64> = nodes.par_iter().map(|(p, w)| f(p) * *w).collect();
        let mut acc = KahanSum::default();
        for x in parts {
            acc.add(x);
        }
        acc.value()
    }

    /// `f^gimel(y)` for a (possibly starred) label.
    pub fn gimel(&self, label: &Label, y: &[f64]) -> Result<Complex64, OracleError> {
        let slot = self.slot(label, false)?;
        Ok(self.gimel_slot(&slot, y))
    }

    fn gimel_slot(&self, slot: &Slot, y: &[f64]) -> Complex64 {
        let region = slot.support(self.sigmas);
        let norm = (2.0 * std::f64::consts::PI).powi(-(self.dims as i32));
        region.integrate(&self.rule, |u| {
            let phase: f64 = u.iter().zip(y).map(|(a, b)| a * b).sum();
            slot.eval(u) * Complex64::from_polar(1.0, phase)
        }) * norm
    }

    /// Position-space box holding most of a packet's gimel profile.
    fn position_support(&self, label: &Label) -> Result<Box, OracleError> {
        let p = self.packet(label)?;
        // conjugation leaves the position profile where it was
        Ok(Box::around(&p.center, self.sigmas * p.width))
    }

    /// Real-space route for `(; labels)`.
    pub fn realspace_value(&self, labels: &[Label]) -> Result<Complex64, OracleError> {
        let n = labels.len();
        let mut region: Option<Box> = None;
        for l in labels {
            let b = self.position_support(l)?;
            region = Some(match region {
                None => b,
                Some(r) => r.intersect(&b),
            });
        }
        let region = region.ok_or_else(|| OracleError::Unsupported("empty form".into()))?;
        if region.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let slots: Vec<Slot> = labels
            .iter()
            .map(|l| self.slot(l, false))
            .collect::<Result<_, _>>()?;
        let nodes = region.nodes(&self.position_rule);
        let parts: Vec<Complex64> = nodes
            .par_iter()
            .map(|(y, w)| {
                slots
                    .iter()
                    .map(|s| self.gimel_slot(s, y))
                    .product::<Complex64>()
                    * *w
            })
            .collect();
        let mut acc = KahanSum::default();
        for x in parts {
            acc.add(x);
        }
        let scale = (2.0 * std::f64::consts::PI).powi((self.dims * (n - 1)) as i32);
        Ok(acc.value() * scale * self.lambda.powi(n as i32 - 2))
    }
}

impl FormOracle for ContinuumOracle {
    fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Arity 2 to 4 goes through momentum space. Longer classical forms use
    /// the real-space route, where an antilinear `a` is a linear `a*`.
    fn form_value(&self, form: &FormFactor) -> Result<Complex64, OracleError> {
        if form.arity() > 4 && self.mode == Mode::Classical {
            let labels: Vec<Label> = form
                .anti()
                .iter()
                .map(Label::star)
                .chain(form.lin().iter().cloned())
                .collect();
            return self.realspace_value(&labels);
        }
        self.momentum_value(form.anti(), form.lin())
    }
}
