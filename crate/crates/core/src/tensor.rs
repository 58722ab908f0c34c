//! Lorentz index algebra in four dimensions, metric `diag(+,-,-,-)`.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex;

use crate::combinatorics::perfect_matchings;
use crate::expr::Polynomial;
use crate::label::{Label, Mode};
use crate::normal::NormalOrderer;
use crate::vacuum::Vacuum;

pub type C64 = Complex<f64>;

pub const DIM: usize = 4;

/// `g^{ab}` (numerically equal to `g_{ab}`).
pub fn metric(a: usize, b: usize) -> i32 {
    match (a, b) {
        (0, 0) => 1,
        (x, y) if x == y && x < DIM => -1,
        _ => 0,
    }
}

/// `eps_{abcd}` with `eps_{0123} = +1`.
pub fn levi_civita(idx: [usize; 4]) -> i32 {
    let mut p = idx;
    if p.iter().any(|&i| i >= DIM) {
        return 0;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0;
            }
        }
    }
    let mut sign = 1;
    for i in 0..4 {
        while p[i] != i {
            let t = p[i];
            p.swap(i, t);
            sign = -sign;
        }
    }
    sign
}

/// `sum over perfect matchings of prod g^{a_i a_j}` as a list of matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingSum {
    pub order: usize,
    pub terms: Vec<Vec<(usize, usize)>>,
}

impl PairingSum {
    /// Value for a concrete assignment of the `order` indices.
    pub fn evaluate(&self, indices: &[usize]) -> i64 {
        assert_eq!(indices.len(), self.order);
        self.terms
            .iter()
            .map(|m| {
                m.iter()
                    .map(|&(i, j)| metric(indices[i], indices[j]) as i64)
                    .product::<i64>()
            })
            .sum()
    }
}

pub fn metric_pairing_sum(k: usize) -> PairingSum {
    PairingSum {
        order: k,
        terms: perfect_matchings(k),
    }
}

/// `<0_q| Q^{a1}..Q^{ak} |0_q>` obtained by running the operator engine at
/// zero deformation with one label per slot and reading each two-point form
/// as `+g` (or `-g` for the primed vacuum).
pub fn q_vacuum_expectation(indices: &[usize], primed: bool) -> i64 {
    let labels: Vec<Label> = (0..indices.len())
        .map(|i| Label::external(&format!("q{i}")))
        .collect();
    let mut word = Polynomial::one();
    for l in &labels {
        let q = &Polynomial::annihilator(l, Mode::Quantum) + &Polynomial::creator(l, Mode::Quantum);
        word = word.product(&q);
    }
    let free = Vacuum::free_field(Mode::Quantum).vev(&word);
    // cross-check against the rewrite engine
    debug_assert_eq!(
        NormalOrderer::with_mode(Mode::Quantum)
            .normal_order(&word)
            .map(|p| p.filter(|m| m.is_scalar()).truncate_lambda(0))
            .ok(),
        Some(free.clone())
    );
    let sign = if primed { -1 } else { 1 };
    let slot = |l: &Label| labels.iter().position(|x| x == l).unwrap();
    let mut total = 0i64;
    for (m, c) in free.iter() {
        let mut v = c.numer() as i64;
        for form in m.forms() {
            let a = slot(&form.anti()[0]);
            let b = slot(&form.lin()[0]);
            v *= (sign * metric(indices[a], indices[b])) as i64;
        }
        total += v;
    }
    total
}

/// Antisymmetric `F_{mu nu}` with lower indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bivector(pub [[C64; 4]; 4]);

impl Bivector {
    pub fn zero() -> Bivector {
        Bivector([[C64::new(0.0, 0.0); 4]; 4])
    }

    /// Builds `F` from its upper-triangle entries and antisymmetrizes.
    pub fn from_upper(upper: [[C64; 4]; 4]) -> Bivector {
        let mut f = Bivector::zero();
        for a in 0..4 {
            for b in a + 1..4 {
                f.0[a][b] = upper[a][b];
                f.0[b][a] = -upper[a][b];
            }
        }
        f
    }

    /// `F_{0i} = -e_i`, `F_{ij} = -eps_{ijk} b_k`.
    pub fn from_fields(e: [C64; 3], b: [C64; 3]) -> Bivector {
        let mut up = [[C64::new(0.0, 0.0); 4]; 4];
        for i in 0..3 {
            up[0][i + 1] = -e[i];
        }
        up[1][2] = -b[2];
        up[1][3] = b[1];
        up[2][3] = -b[0];
        Bivector::from_upper(up)
    }

    /// Inverse of [`Bivector::from_fields`].
    pub fn fields(&self) -> ([C64; 3], [C64; 3]) {
        let f = &self.0;
        (
            [-f[0][1], -f[0][2], -f[0][3]],
            [-f[2][3], f[1][3], -f[1][2]],
        )
    }

    pub fn raised(&self) -> [[C64; 4]; 4] {
        let mut up = [[C64::new(0.0, 0.0); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                up[a][b] = self.0[a][b] * (metric(a, a) * metric(b, b)) as f64;
            }
        }
        up
    }

    /// `(*F)_{mu nu} = 1/2 eps_{mu nu a b} F^{ab}`.
    pub fn hodge_dual(&self) -> Bivector {
        let up = self.raised();
        let mut out = Bivector::zero();
        for m in 0..4 {
            for n in 0..4 {
                let mut s = C64::new(0.0, 0.0);
                for a in 0..4 {
                    for b in 0..4 {
                        let e = levi_civita([m, n, a, b]);
                        if e != 0 {
                            s += up[a][b] * e as f64;
                        }
                    }
                }
                out.0[m][n] = s * 0.5;
            }
        }
        out
    }

    /// `P_b = u^a F_{ab}`.
    pub fn contract(&self, u: [f64; 4]) -> [C64; 4] {
        let mut p = [C64::new(0.0, 0.0); 4];
        for (b, pb) in p.iter_mut().enumerate() {
            for (a, ua) in u.iter().enumerate() {
                *pb += self.0[a][b] * *ua;
            }
        }
        p
    }

    pub fn max_abs_diff(&self, other: &Bivector) -> f64 {
        let mut m: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                m = m.max((self.0[a][b] - other.0[a][b]).norm());
            }
        }
        m
    }
}

impl core::ops::Neg for Bivector {
    type Output = Bivector;
    fn neg(self) -> Bivector {
        let mut out = self;
        for row in out.0.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        out
    }
}

pub fn minkowski_dot(u: [f64; 4], v: [f64; 4]) -> f64 {
    u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3]
}

/// `sum_{b c} conj(P_b) (-g^{bc}) Q_c` with `P = u.E`, `Q = u.F`.
pub fn bivector_integrand(e: &Bivector, f: &Bivector, u: [f64; 4]) -> C64 {
    let p = e.contract(u);
    let q = f.contract(u);
    (0..4)
        .map(|b| p[b].conj() * q[b] * (-metric(b, b)) as f64)
        .sum()
}

/// `B * integrand(E, F) + B_dual * integrand(*E, *F)` at momentum `u`.
pub fn bivector_weighted_integrand(
    e: &Bivector,
    f: &Bivector,
    u: [f64; 4],
    weight: f64,
    dual_weight: f64,
) -> C64 {
    let mut v = bivector_integrand(e, f, u) * weight;
    if dual_weight != 0.0 {
        v += bivector_integrand(&e.hodge_dual(), &f.hodge_dual(), u) * dual_weight;
    }
    v
}

/// `K^{mu nu} = (A_t + A_s) u^mu u^nu / (u.u) - A_s g^{mu nu}`; zero unless
/// `u` is timelike.
pub fn vector_kernel(u: [f64; 4], a_t: f64, a_s: f64) -> [[f64; 4]; 4] {
    let uu = minkowski_dot(u, u);
    let mut k = [[0.0; 4]; 4];
    if uu <= 0.0 {
        return k;
    }
    for m in 0..4 {
        for n in 0..4 {
            k[m][n] = (a_t + a_s) * u[m] * u[n] / uu - a_s * metric(m, n) as f64;
        }
    }
    k
}

/// `conj(U_mu) K^{mu nu} V_nu`.
pub fn vector_integrand(uvec: [C64; 4], vvec: [C64; 4], u: [f64; 4], a_t: f64, a_s: f64) -> C64 {
    let k = vector_kernel(u, a_t, a_s);
    let mut s = C64::new(0.0, 0.0);
    for m in 0..4 {
        for n in 0..4 {
            s += uvec[m].conj() * k[m][n] * vvec[n];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn epsilon_signs() {
        assert_eq!(levi_civita([0, 1, 2, 3]), 1);
        assert_eq!(levi_civita([1, 0, 2, 3]), -1);
        assert_eq!(levi_civita([3, 2, 1, 0]), 1);
        assert_eq!(levi_civita([0, 0, 2, 3]), 0);
    }

    #[test]
    fn pairing_counts() {
        assert_eq!(metric_pairing_sum(4).terms.len(), 3);
        assert_eq!(metric_pairing_sum(6).terms.len(), 15);
        assert!(metric_pairing_sum(3).terms.is_empty());
    }

    #[test]
    fn q_vacuum_reproduces_pairings() {
        let p = metric_pairing_sum(4);
        for idx in [
            [0, 0, 1, 1],
            [1, 1, 1, 1],
            [0, 1, 0, 1],
            [2, 3, 2, 3],
            [0, 0, 0, 0],
        ] {
            assert_eq!(q_vacuum_expectation(&idx, false), p.evaluate(&idx));
            assert_eq!(q_vacuum_expectation(&idx, true), p.evaluate(&idx));
        }
        // two-point: primed vacuum flips the sign
        assert_eq!(q_vacuum_expectation(&[1, 1], false), -1);
        assert_eq!(q_vacuum_expectation(&[1, 1], true), 1);
    }

    #[test]
    fn double_dual_is_minus_identity() {
        let f = Bivector::from_fields([c(1.0), c(-2.0), c(0.5)], [c(0.3), c(4.0), c(-1.5)]);
        assert!(f.hodge_dual().hodge_dual().max_abs_diff(&-f) < 1e-14);
    }

    #[test]
    fn dual_swaps_electric_and_magnetic() {
        let f = Bivector::from_fields([c(1.0), c(0.0), c(0.0)], [c(0.0); 3]);
        let (e, b) = f.hodge_dual().fields();
        assert!(e.iter().all(|x| x.norm() < 1e-15));
        assert!((b[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lightlike_integrand() {
        let e = [c(0.7), c(-1.1), c(0.4)];
        let b = [c(0.2), c(0.9), c(-0.6)];
        let f = Bivector::from_fields(e, b);
        let u0 = 1.7;
        let v = bivector_integrand(&f, &f, [u0, 0.0, 0.0, u0]);
        let want = u0 * u0 * ((e[0].re + b[1].re).powi(2) + (e[1].re - b[0].re).powi(2));
        assert!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-12);
    }
}
