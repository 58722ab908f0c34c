//! Exact realization on the cyclic momentum group `Z_L^d`.
//!
//! Conventions: `f~(u) = sum_x f(x) e^{-2 pi i u.x / L}`, physical momentum
//! `k = 2 pi n / L` with `n` in `[-L/2, L/2)`, and
//! `(a1..am; b1..bn) = lam^{m+n-2} sum_{sum u = sum v} prod conj(G a~(u)) prod G b~(v)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use liefield_core::{FormFactor, Label, Mode};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{KernelSpec, MassFunction, Realization, Space, TestFunctionSpec};
use crate::oracle::{FormOracle, OracleError};
use crate::quadrature::KahanSum;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Index arithmetic on `Z_L^d`; coordinates are stored first axis slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    side: usize,
    dims: usize,
    len: usize,
}

impl Lattice {
    pub fn new(side: usize, dims: usize) -> Lattice {
        assert!(side >= 1 && dims >= 1);
        Lattice {
            side,
            dims,
            len: side.pow(dims as u32),
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        let mut c = vec![0; self.dims];
        for slot in c.iter_mut().rev() {
            *slot = index % self.side;
            index /= self.side;
        }
        c
    }

    pub fn index(&self, coords: &[i64]) -> usize {
        let l = self.side as i64;
        coords
            .iter()
            .fold(0usize, |acc, &c| acc * self.side + c.rem_euclid(l) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.dims {
            out += ((a % self.side + b % self.side) % self.side) * place;
            a /= self.side;
            b /= self.side;
            place *= self.side;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.dims {
            out += ((self.side - a % self.side) % self.side) * place;
            a /= self.side;
            place *= self.side;
        }
        out
    }

    /// Representative of each coordinate in `[-L/2, L/2)`.
    pub fn signed(&self, index: usize) -> Vec<i64> {
        let l = self.side as i64;
        self.coords(index)
            .into_iter()
            .map(|c| {
                let c = c as i64;
                if c >= (l + 1) / 2 {
                    c - l
                } else {
                    c
                }
            })
            .collect()
    }

    pub fn momentum(&self, index: usize) -> Vec<f64> {
        let scale = 2.0 * std::f64::consts::PI / self.side as f64;
        self.signed(index)
            .into_iter()
            .map(|n| n as f64 * scale)
            .collect()
    }

    /// `u.x mod L`.
    fn pairing(&self, u: usize, x: usize) -> usize {
        let (cu, cx) = (self.coords(u), self.coords(x));
        cu.iter().zip(&cx).map(|(a, b)| a * b).sum::<usize>() % self.side
    }

    fn roots(&self, sign: f64) -> Vec<Complex64> {
        (0..self.side)
            .map(|k| {
                Complex64::from_polar(
                    1.0,
                    sign * 2.0 * std::f64::consts::PI * k as f64 / self.side as f64,
                )
            })
            .collect()
    }

    /// `sum_x f(x) e^{-2 pi i u.x/L}`.
    pub fn forward(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.transform(f, -1.0, 1.0)
    }

    /// `(1/N) sum_u g(u) e^{+2 pi i u.x/L}`.
    pub fn inverse(&self, g: &[Complex64]) -> Vec<Complex64> {
        self.transform(g, 1.0, 1.0 / self.len as f64)
    }

    fn transform(&self, f: &[Complex64], sign: f64, scale: f64) -> Vec<Complex64> {
        let roots = self.roots(sign);
        (0..self.len)
            .map(|u| {
                let mut acc = KahanSum::default();
                for (x, fx) in f.iter().enumerate() {
                    if *fx != ZERO {
                        acc.add(fx * roots[self.pairing(u, x)]);
                    }
                }
                acc.value() * scale
            })
            .collect()
    }

    /// Cyclic convolution `(a * b)(s) = sum_u a(u) b(s - u)`; exact zeros
    /// stay exact.
    pub fn convolve(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.len];
        for (u, au) in a.iter().enumerate() {
            if *au == ZERO {
                continue;
            }
            for (v, bv) in b.iter().enumerate() {
                if *bv != ZERO {
                    let s = self.add(u, v);
                    out[s] += au * bv;
                }
            }
        }
        out
    }

    pub fn delta(&self) -> Vec<Complex64> {
        let mut d = vec![ZERO; self.len];
        d[0] = Complex64::new(1.0, 0.0);
        d
    }
}

/// Momentum amplitudes of a test function on the lattice.
pub fn sample(spec: &TestFunctionSpec, lattice: &Lattice) -> Result<Vec<Complex64>, OracleError> {
    let n = lattice.len();
    match spec {
        TestFunctionSpec::Lattice { values, space } => {
            if values.len() != n {
                return Err(OracleError::Model(format!(
                    "lattice function has {} values, expected {n}",
                    values.len()
                )));
            }
            Ok(match space {
                Space::Momentum => values.clone(),
                Space::Position => lattice.forward(values),
            })
        }
        TestFunctionSpec::Gaussian {
            center,
            width,
            carrier,
        } => {
            if center.len() != lattice.dims() {
                return Err(OracleError::Model(
                    "gaussian dimension does not match the lattice".into(),
                ));
            }
            let l = lattice.side() as f64;
            let position: Vec<Complex64> = (0..n)
                .map(|x| {
                    let c = lattice.coords(x);
                    let mut r2 = 0.0;
                    let mut phase = 0.0;
                    for i in 0..c.len() {
                        // minimum-image distance on the torus
                        let mut dx = (c[i] as f64 - center[i]).rem_euclid(l);
                        if dx >= l / 2.0 {
                            dx -= l;
                        }
                        r2 += dx * dx;
                        phase += carrier[i] * c[i] as f64;
                    }
                    Complex64::from_polar((-r2 / (2.0 * width * width)).exp(), phase)
                })
                .collect();
            Ok(lattice.forward(&position))
        }
        TestFunctionSpec::MomentumBox { lo, hi, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut out = vec![ZERO; n];
            for (u, slot) in out.iter_mut().enumerate() {
                let c = lattice.coords(u);
                let inside = c
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .all(|(&x, (&a, &b))| (x as i64) >= a && (x as i64) <= b);
                if inside {
                    // keep amplitudes away from zero so supports are exact
                    let r: f64 = rng.random_range(0.5..1.5);
                    let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    *slot = Complex64::from_polar(r, t);
                }
            }
            Ok(out)
        }
        TestFunctionSpec::Random { seed, scale } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let s = scale / (n as f64).sqrt();
            Ok((0..n)
                .map(|_| {
                    Complex64::new(
                        rng.random_range(-1.0..1.0) * s,
                        rng.random_range(-1.0..1.0) * s,
                    )
                })
                .collect())
        }
    }
}

pub struct LatticeOracle {
    lattice: Lattice,
    lambda: f64,
    mode: Mode,
    mass: MassFunction,
    amplitude: Vec<Complex64>,
    bindings: BTreeMap<String, Arc<Vec<Complex64>>>,
    label_cache: Mutex<HashMap<Label, Arc<Vec<Complex64>>>>,
    form_cache: Mutex<HashMap<FormFactor, Complex64>>,
}

impl std::fmt::Debug for LatticeOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LatticeOracle")
            .field("lattice", &self.lattice)
            .field("lambda", &self.lambda)
            .field("mode", &self.mode)
            .field("labels", &self.bindings.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl LatticeOracle {
    /// Realizes `spec` on its lattice. Classical mode requires
    /// `G(-u) = conj(G(u))` at every lattice momentum.
    pub fn new(
        spec: &KernelSpec,
        bindings: &BTreeMap<String, TestFunctionSpec>,
    ) -> Result<LatticeOracle, OracleError> {
        let Realization::Lattice { side } = spec.realization else {
            return Err(OracleError::Model(
                "lattice oracle needs a lattice realization".into(),
            ));
        };
        let lattice = Lattice::new(side, spec.dims());
        let mut values = BTreeMap::new();
        for (name, f) in bindings {
            f.validate(spec.dims()).map_err(OracleError::Model)?;
            values.insert(name.clone(), Arc::new(sample(f, &lattice)?));
        }
        Self::from_amplitudes(spec, lattice, values)
    }

    pub fn from_amplitudes(
        spec: &KernelSpec,
        lattice: Lattice,
        bindings: BTreeMap<String, Arc<Vec<Complex64>>>,
    ) -> Result<LatticeOracle, OracleError> {
        let amplitude: Vec<Complex64> = (0..lattice.len())
            .map(|u| spec.mass.amplitude(&lattice.momentum(u)))
            .collect();
        let oracle = LatticeOracle {
            lattice,
            lambda: spec.lambda,
            mode: spec.mode,
            mass: spec.mass,
            amplitude,
            bindings,
            label_cache: Mutex::new(HashMap::new()),
            form_cache: Mutex::new(HashMap::new()),
        };
        if oracle.mode == Mode::Classical {
            let r = oracle.classical_symmetry_residual();
            if r > 1e-14 {
                return Err(OracleError::Model(format!(
                    "classical mode needs G(-u) = conj(G(u)); residual {r:e}"
                )));
            }
        }
        for (name, v) in &oracle.bindings {
            if v.len() != oracle.lattice.len() {
                return Err(OracleError::Model(format!(
                    "label `{name}` has the wrong number of amplitudes"
                )));
            }
        }
        Ok(oracle)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn mass(&self) -> &MassFunction {
        &self.mass
    }

    /// `G(u)` at every lattice momentum.
    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    pub fn labels(&self) -> impl Iterator<Item = &String> {
        self.bindings.keys()
    }

    /// Same lattice and amplitudes with a different coupling or mode.
    pub fn rebind(&self, lambda: f64, mode: Mode) -> LatticeOracle {
        LatticeOracle {
            lattice: self.lattice.clone(),
            lambda,
            mode,
            mass: self.mass,
            amplitude: self.amplitude.clone(),
            bindings: self.bindings.clone(),
            label_cache: Mutex::new(HashMap::new()),
            form_cache: Mutex::new(HashMap::new()),
        }
    }

    /// Same model with a perturbed amplitude array (used for negative
    /// controls); skips the classical check.
    pub fn with_amplitude(&self, amplitude: Vec<Complex64>) -> LatticeOracle {
        LatticeOracle {
            amplitude,
            ..self.rebind(self.lambda, self.mode)
        }
    }

    /// `max_u |G(-u) - conj(G(u))|`.
    pub fn classical_symmetry_residual(&self) -> f64 {
        (0..self.lattice.len())
            .map(|u| (self.amplitude[self.lattice.neg(u)] - self.amplitude[u].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Momentum amplitudes of a label: bound symbols, their conjugates
    /// `conj(f~(-u))`, and xi labels computed from their arguments.
    pub fn label_momentum(&self, label: &Label) -> Result<Arc<Vec<Complex64>>, OracleError> {
        if let Some(v) = self.label_cache.lock().unwrap().get(label) {
            return Ok(v.clone());
        }
        let base = if label.is_starred() {
            label.star()
        } else {
            label.clone()
        };
        let plain = match base.xi_args() {
            None => self
                .bindings
                .get(base.name())
                .cloned()
                .ok_or_else(|| OracleError::UnknownLabel(base.name().to_string()))?,
            Some((anti, lin)) => Arc::new(self.xi_momentum(anti, lin)?),
        };
        let value = if label.is_starred() {
            Arc::new(
                (0..self.lattice.len())
                    .map(|u| plain[self.lattice.neg(u)].conj())
                    .collect(),
            )
        } else {
            plain
        };
        self.label_cache
            .lock()
            .unwrap()
            .insert(label.clone(), value.clone());
        Ok(value)
    }

    fn slot_arrays(
        &self,
        anti: &[Label],
        lin: &[Label],
    ) -> Result<(Vec<Complex64>, Vec<Complex64>), OracleError> {
        let mut ca = self.lattice.delta();
        for l in anti {
            let v = self.label_momentum(l)?;
            let w: Vec<Complex64> = v
                .iter()
                .zip(&self.amplitude)
                .map(|(x, g)| (g * x).conj())
                .collect();
            ca = self.lattice.convolve(&ca, &w);
        }
        let mut cb = self.lattice.delta();
        for l in lin {
            let v = self.label_momentum(l)?;
            let w: Vec<Complex64> = v.iter().zip(&self.amplitude).map(|(x, g)| g * x).collect();
            cb = self.lattice.convolve(&cb, &w);
        }
        Ok((ca, cb))
    }

    /// `xi~(A;B)(s) = lam^{m+n-1} / G(s) sum_t cA(t) cB(t + s)`.
    fn xi_momentum(&self, anti: &[Label], lin: &[Label]) -> Result<Vec<Complex64>, OracleError> {
        let (ca, cb) = self.slot_arrays(anti, lin)?;
        let k = (anti.len() + lin.len()) as i32;
        let prefactor = self.lambda.powi(k - 1);
        let mut out = vec![ZERO; self.lattice.len()];
        for (s, slot) in out.iter_mut().enumerate() {
            let mut acc = KahanSum::default();
            for (t, a) in ca.iter().enumerate() {
                if *a != ZERO {
                    acc.add(a * cb[self.lattice.add(t, s)]);
                }
            }
            let sum = acc.value();
            if sum == ZERO {
                continue;
            }
            let g = self.amplitude[s];
            if g == ZERO {
                return Err(OracleError::ZeroDivisor(self.lattice.momentum(s)));
            }
            *slot = sum * prefactor / g;
        }
        Ok(out)
    }

    /// Momentum-conservation route for a form with explicit slot lists.
    pub fn slots_value(&self, anti: &[Label], lin: &[Label]) -> Result<Complex64, OracleError> {
        let (ca, cb) = self.slot_arrays(anti, lin)?;
        let k = (anti.len() + lin.len()) as i32;
        let mut acc = KahanSum::default();
        for (a, b) in ca.iter().zip(&cb) {
            if *a != ZERO && *b != ZERO {
                acc.add(a * b);
            }
        }
        Ok(acc.value() * self.lambda.powi(k - 2))
    }

    /// `f^gimel(x) = (1/N) sum_u G(u) f~(u) e^{2 pi i u.x/L}`.
    pub fn gimel(&self, label: &Label) -> Result<Vec<Complex64>, OracleError> {
        let v = self.label_momentum(label)?;
        let w: Vec<Complex64> = v.iter().zip(&self.amplitude).map(|(x, g)| g * x).collect();
        Ok(self.lattice.inverse(&w))
    }

    /// `(;f1..fn) = lam^{n-2} N^{n-1} sum_x prod f_i^gimel(x)`.
    pub fn realspace_value(&self, labels: &[Label]) -> Result<Complex64, OracleError> {
        let n = labels.len() as i32;
        let mut prod = vec![Complex64::new(1.0, 0.0); self.lattice.len()];
        for l in labels {
            let g = self.gimel(l)?;
            for (p, x) in prod.iter_mut().zip(&g) {
                *p *= x;
            }
        }
        let mut acc = KahanSum::default();
        for p in prod {
            acc.add(p);
        }
        Ok(acc.value() * self.lambda.powi(n - 2) * (self.lattice.len() as f64).powi(n - 1))
    }
}

impl FormOracle for LatticeOracle {
    fn lambda(&self) -> f64 {
        self.lambda
    }

    fn form_value(&self, form: &FormFactor) -> Result<Complex64, OracleError> {
        if let Some(v) = self.form_cache.lock().unwrap().get(form) {
            return Ok(*v);
        }
        let v = self.slots_value(form.anti(), form.lin())?;
        self.form_cache.lock().unwrap().insert(form.clone(), v);
        Ok(v)
    }
}
