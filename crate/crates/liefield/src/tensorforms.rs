//! Vector and bivector test functions: inner products by quadrature and the
//! indexed four-point form on the lattice.

use liefield_core::tensor::{
    bivector_weighted_integrand, metric, metric_pairing_sum, minkowski_dot, q_vacuum_expectation,
    vector_integrand, Bivector, C64, DIM,
};
use num_complex::Complex64;

use crate::lattice::{sample, Lattice};
use crate::model::{MassFunction, TestFunctionSpec};
use crate::oracle::OracleError;
use crate::quadrature::{Box, GaussLegendre, KahanSum};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `U_mu` with lower index; missing components are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VectorFunction {
    pub components: [Option<TestFunctionSpec>; DIM],
}

/// Antisymmetric `F_{mu nu}`; only `mu < nu` is stored, with a sign.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BivectorFunction {
    entries: Vec<((usize, usize), f64, TestFunctionSpec)>,
}

impl BivectorFunction {
    /// Entries may be given in either index order; `(nu, mu)` is stored as
    /// `-F_{mu nu}`. Diagonal entries are rejected.
    pub fn new(
        entries: Vec<((usize, usize), TestFunctionSpec)>,
    ) -> Result<BivectorFunction, String> {
        let mut out = Vec::with_capacity(entries.len());
        for ((a, b), f) in entries {
            if a >= DIM || b >= DIM {
                return Err(format!("index ({a},{b}) out of range"));
            }
            if a == b {
                return Err(format!(
                    "diagonal component ({a},{a}) of an antisymmetric tensor"
                ));
            }
            let (key, sign) = if a < b { ((a, b), 1.0) } else { ((b, a), -1.0) };
            out.push((key, sign, f));
        }
        Ok(BivectorFunction { entries: out })
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64, &TestFunctionSpec)> {
        self.entries.iter().map(|(k, s, f)| (*k, *s, f))
    }
}

fn continuum_transform(f: &TestFunctionSpec, u: &[f64; 4]) -> Result<Complex64, OracleError> {
    match f {
        TestFunctionSpec::Gaussian {
            center,
            width,
            carrier,
        } if center.len() == DIM => Ok(TestFunctionSpec::gaussian_transform(
            center, *width, carrier, u,
        )),
        _ => Err(OracleError::Unsupported(
            "tensor quadrature takes four-dimensional gaussians".into(),
        )),
    }
}

impl VectorFunction {
    pub fn transform(&self, u: &[f64; 4]) -> Result<[C64; 4], OracleError> {
        let mut out = [ZERO; 4];
        for (slot, f) in out.iter_mut().zip(&self.components) {
            if let Some(f) = f {
                *slot = continuum_transform(f, u)?;
            }
        }
        Ok(out)
    }
}

impl BivectorFunction {
    pub fn transform(&self, u: &[f64; 4]) -> Result<Bivector, OracleError> {
        let mut up = [[ZERO; 4]; 4];
        for ((a, b), s, f) in self.entries() {
            up[a][b] += continuum_transform(f, u)? * s;
        }
        Ok(Bivector::from_upper(up))
    }
}

/// Scalar weights supported inside the light cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeWeights {
    pub time: f64,
    pub space: f64,
    pub profile: MassFunction,
}

impl ConeWeights {
    /// `(A_t(u), A_s(u))`, zero unless `u` is timelike.
    pub fn at(&self, u: &[f64; 4]) -> (f64, f64) {
        if minkowski_dot(*u, *u) <= 0.0 {
            return (0.0, 0.0);
        }
        let m = self.profile.weight(u);
        (self.time * m, self.space * m)
    }
}

/// Quadrature settings for the tensor integrals.
#[derive(Debug, Clone)]
pub struct TensorQuadrature {
    pub region: Box,
    pub order: usize,
}

/// `int d^4u h(u)` over the timelike part of `region` whose mass profile
/// is non-negligible. The variables are `sigma = u.u` and the spatial
/// momentum, with `u0 = +-sqrt(sigma + |k|^2)` and `du0 = dsigma / (2 |u0|)`,
/// so the thin profile shell is resolved by panels in `sigma`.
fn shell_integral(
    profile: &MassFunction,
    quad: &TensorQuadrature,
    sigmas: f64,
    mut h: impl FnMut([f64; 4]) -> Complex64,
) -> Complex64 {
    let rule = GaussLegendre::new(quad.order);
    let (m2, w2) = (profile.mass * profile.mass, profile.width * profile.width);
    let (lo, hi) = ((m2 - sigmas * w2).max(0.0), m2 + sigmas * w2);
    let panels = (2.0 * sigmas).ceil() as usize;
    let step = (hi - lo) / panels as f64;
    let spatial = Box {
        lo: quad.region.lo[1..].to_vec(),
        hi: quad.region.hi[1..].to_vec(),
    };
    let (t_lo, t_hi) = (quad.region.lo[0], quad.region.hi[0]);
    let nodes = spatial.nodes(&rule);
    let mut acc = KahanSum::default();
    for i in 0..panels {
        for (sigma, ws) in rule.on(lo + i as f64 * step, lo + (i + 1) as f64 * step) {
            for (k, wk) in &nodes {
                let e = (sigma + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
                for u0 in [e, -e] {
                    if u0 < t_lo || u0 > t_hi {
                        continue;
                    }
                    acc.add(h([u0, k[0], k[1], k[2]]) * (ws * wk / (2.0 * e)));
                }
            }
        }
    }
    acc.value()
}

/// Mass-profile spread, in widths, kept by the shell integrals.
const PROFILE_SIGMAS: f64 = 7.0;

/// `hbar int d^4u conj(U_mu) K^{mu nu} V_nu`. The longitudinal part of `K`
/// carries `1 / u.u`, so the weights must vanish on the light cone.
pub fn vector_inner_product(
    u_fn: &VectorFunction,
    v_fn: &VectorFunction,
    weights: &ConeWeights,
    hbar: f64,
    quad: &TensorQuadrature,
) -> Result<Complex64, OracleError> {
    if weights.time == 0.0 && weights.space == 0.0 {
        return Ok(ZERO);
    }
    if weights.profile.spectral_density(0.0) > 1e-12 {
        return Err(OracleError::Unsupported(
            "vector weights must vanish on the light cone; the longitudinal term diverges there"
                .into(),
        ));
    }
    let mut err = None;
    let v = shell_integral(&weights.profile, quad, PROFILE_SIGMAS, |u| {
        let (at, as_) = weights.at(&u);
        match (u_fn.transform(&u), v_fn.transform(&u)) {
            (Ok(a), Ok(b)) => vector_integrand(a, b, u, at, as_),
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                ZERO
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(v * hbar),
    }
}

/// `conj(U_mu) K V_nu` rebuilt from `<0'_q| U^gimel* V^gimel |0'_q>`.
pub fn vector_integrand_via_q(
    uvec: [C64; 4],
    vvec: [C64; 4],
    u: [f64; 4],
    a_t: f64,
    a_s: f64,
) -> C64 {
    let uu = minkowski_dot(u, u);
    if uu <= 0.0 {
        return ZERO;
    }
    let long = |w: &[C64; 4]| -> C64 {
        (0..4).map(|m| w[m] * u[m]).sum::<C64>() * ((a_t + a_s).sqrt() / uu.sqrt())
    };
    let mut total = long(&uvec).conj() * long(&vvec);
    for m in 0..4 {
        for n in 0..4 {
            let q = q_vacuum_expectation(&[m, n], true) as f64;
            if q != 0.0 {
                total += uvec[m].conj() * vvec[n] * (a_s * q);
            }
        }
    }
    total
}

/// How the bivector weight is distributed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BivectorWeights {
    /// `B = hbar 2 pi delta(u.u) theta(u0) / (2 pi)^4`, `B_d = 0`.
    LightCone,
    /// `B(u) = b * M(u)` and `B_d(u) = dual * M(u)` on non-spacelike `u`.
    Smooth {
        b: f64,
        dual: f64,
        profile: MassFunction,
    },
}

pub fn bivector_inner_product(
    e: &BivectorFunction,
    f: &BivectorFunction,
    weights: &BivectorWeights,
    hbar: f64,
    quad: &TensorQuadrature,
) -> Result<Complex64, OracleError> {
    let rule = GaussLegendre::new(quad.order);
    let err = std::cell::RefCell::new(None);
    let eval = |u: [f64; 4], w: f64, wd: f64| -> Complex64 {
        match (e.transform(&u), f.transform(&u)) {
            (Ok(a), Ok(b)) => bivector_weighted_integrand(&a, &b, u, w, wd),
            (Err(x), _) | (_, Err(x)) => {
                *err.borrow_mut() = Some(x);
                ZERO
            }
        }
    };
    let v = match *weights {
        BivectorWeights::LightCone => {
            // spatial part of the region; u0 = |u|
            let spatial = Box {
                lo: quad.region.lo[1..].to_vec(),
                hi: quad.region.hi[1..].to_vec(),
            };
            let norm = (2.0 * std::f64::consts::PI).powi(-3);
            spatial.integrate(&rule, |p| {
                let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                if r == 0.0 {
                    return ZERO;
                }
                eval([r, p[0], p[1], p[2]], 1.0, 0.0) * (norm / (2.0 * r))
            })
        }
        BivectorWeights::Smooth { b, dual, profile } => {
            if b == 0.0 && dual == 0.0 {
                return Ok(ZERO);
            }
            shell_integral(&profile, quad, PROFILE_SIGMAS, |u| {
                let m = profile.weight(&u);
                eval(u, b * m, dual * m)
            })
        }
    };
    match err.into_inner() {
        Some(x) => Err(x),
        None => Ok(v * hbar),
    }
}

/// Bivector with lattice components, for the indexed four-point form.
#[derive(Debug, Clone)]
pub struct LatticeBivector {
    /// Momentum amplitudes of `F_{mu nu}` for `mu < nu`.
    upper: Vec<((usize, usize), Vec<Complex64>)>,
}

impl LatticeBivector {
    pub fn new(f: &BivectorFunction, lattice: &Lattice) -> Result<LatticeBivector, OracleError> {
        let mut upper: Vec<((usize, usize), Vec<Complex64>)> = Vec::new();
        for (key, sign, spec) in f.entries() {
            let v: Vec<Complex64> = sample(spec, lattice)?
                .into_iter()
                .map(|x| x * sign)
                .collect();
            match upper.iter_mut().find(|(k, _)| *k == key) {
                Some((_, acc)) => acc.iter_mut().zip(&v).for_each(|(a, b)| *a += b),
                None => upper.push((key, v)),
            }
        }
        Ok(LatticeBivector { upper })
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(|(_, v)| v.iter().all(|x| *x == ZERO))
    }

    /// `F^gimel_alpha(y)` for the four values of `alpha`: the inverse
    /// transform of `F_{mu alpha}(u) sqrt(B(u)) u^mu`, with the lattice
    /// momentum embedded in the leading components of a four-vector.
    fn gimel(&self, lattice: &Lattice, weight: &MassFunction) -> [Vec<Complex64>; 4] {
        let n = lattice.len();
        let mut comps: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![ZERO; n]);
        for u in 0..n {
            let k = lattice.momentum(u);
            let mut four = [0.0; 4];
            for (slot, x) in four.iter_mut().zip(&k) {
                *slot = *x;
            }
            let root = weight.weight(&k).sqrt();
            for ((a, b), vals) in &self.upper {
                // F_{a b} u^a contributes to alpha = b; F_{b a} = -F_{a b}
                // with u^b contributes to alpha = a
                comps[*b][u] += vals[u] * four[*a] * root;
                comps[*a][u] -= vals[u] * four[*b] * root;
            }
        }
        comps.map(|c| lattice.inverse(&c))
    }
}

/// `(;F1,F2,F3,F4)` on the lattice by contracting with the metric pairing
/// sum, and by the brute-force loop over all `4^4` index tuples.
pub fn indexed_form_value(
    fs: [&LatticeBivector; 4],
    lattice: &Lattice,
    weight: &MassFunction,
    lambda: f64,
) -> (Complex64, Complex64) {
    let g: Vec<[Vec<Complex64>; 4]> = fs.iter().map(|f| f.gimel(lattice, weight)).collect();
    let n = lattice.len();
    let pairing = metric_pairing_sum(4);
    let mut contracted = ZERO;
    let mut brute = ZERO;
    for y in 0..n {
        let dot = |i: usize, j: usize| -> Complex64 {
            (0..4)
                .map(|a| g[i][a][y] * g[j][a][y] * metric(a, a) as f64)
                .sum()
        };
        for m in &pairing.terms {
            let mut v = Complex64::new(1.0, 0.0);
            for &(i, j) in m {
                v *= dot(i, j);
            }
            contracted += v;
        }
        for idx in 0..256usize {
            let a = [idx & 3, (idx >> 2) & 3, (idx >> 4) & 3, (idx >> 6) & 3];
            let w = pairing.evaluate(&a);
            if w != 0 {
                brute += g[0][a[0]][y] * g[1][a[1]][y] * g[2][a[2]][y] * g[3][a[3]][y] * w as f64;
            }
        }
    }
    let scale = lambda * lambda * (n as f64).powi(3);
    (contracted * scale, brute * scale)
}
