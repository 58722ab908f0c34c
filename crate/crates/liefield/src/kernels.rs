//! Two-point kernels on the mass shell, integrated over spatial momentum
//! with `k0 = +-sqrt(|k|^2 + m^2)`.

use num_complex::Complex64;

use crate::model::{KernelSpec, TestFunctionSpec};
use crate::quadrature::{GaussLegendre, KahanSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelVariant {
    /// Thermal classical kernel, prefactor `kT / |k0|`.
    Gibbs,
    /// Forward cone only, prefactor `hbar`.
    QuantumForward,
    /// Both cones, prefactor `hbar / 2`.
    QuantumClassical,
    /// Forward cone smeared over masses by the spectral density.
    Generalized,
}

impl KernelVariant {
    pub fn name(&self) -> &'static str {
        match self {
            KernelVariant::Gibbs => "C",
            KernelVariant::QuantumForward => "Q+",
            KernelVariant::QuantumClassical => "QC",
            KernelVariant::Generalized => "gQ+",
        }
    }

    pub fn parse(s: &str) -> Option<KernelVariant> {
        Some(match s {
            "C" | "c" | "gibbs" => KernelVariant::Gibbs,
            "Q+" | "q+" | "qplus" => KernelVariant::QuantumForward,
            "QC" | "qc" => KernelVariant::QuantumClassical,
            "gQ+" | "gq+" | "gqplus" => KernelVariant::Generalized,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    /// `|I(2Q) - I(Q)|`.
    pub error: f64,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("quadrature did not converge: estimate {estimate}, error {error:e}, tolerance {tolerance:e}")]
    NotConverged {
        estimate: Complex64,
        error: f64,
        tolerance: f64,
    },
    #[error("kernels take gaussian test functions")]
    NotGaussian,
    #[error("test function dimension {got} does not match {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("{0}")]
    Parameter(String),
}

#[derive(Debug, Clone)]
struct Gauss<'a> {
    center: &'a [f64],
    width: f64,
    carrier: &'a [f64],
}

fn gaussian(f: &TestFunctionSpec, dims: usize) -> Result<Gauss<'_>, KernelError> {
    match f {
        TestFunctionSpec::Gaussian {
            center,
            width,
            carrier,
        } => {
            if center.len() != dims || carrier.len() != dims {
                return Err(KernelError::Dimension {
                    expected: dims,
                    got: center.len(),
                });
            }
            Ok(Gauss {
                center,
                width: *width,
                carrier,
            })
        }
        _ => Err(KernelError::NotGaussian),
    }
}

impl Gauss<'_> {
    fn transform(&self, k: &[f64]) -> Complex64 {
        TestFunctionSpec::gaussian_transform(self.center, self.width, self.carrier, k)
    }
}

fn check_shape(spec: &KernelSpec) -> Result<(), KernelError> {
    if !(1..=3).contains(&spec.spatial_dims) {
        return Err(KernelError::Parameter(
            "kernels support one to three spatial dimensions".into(),
        ));
    }
    Ok(())
}

/// Kernel evaluator with a fixed quadrature order and relative tolerance.
#[derive(Debug, Clone)]
pub struct Kernels {
    pub order: usize,
    pub tolerance: f64,
    pub sigmas: f64,
}

impl Default for Kernels {
    fn default() -> Self {
        Kernels {
            order: 48,
            tolerance: 1e-9,
            sigmas: 7.0,
        }
    }
}

impl Kernels {
    /// Spatial radius beyond which both packets are negligible on the shell.
    fn radius(&self, g: &Gauss, f: &Gauss) -> f64 {
        let reach = |p: &Gauss| {
            p.carrier[1..].iter().map(|x| x * x).sum::<f64>().sqrt() + self.sigmas / p.width
        };
        reach(g).max(reach(f))
    }

    /// Unit directions in `ds` spatial dimensions with angular weights.
    fn directions(ds: usize, order: usize) -> Vec<(Vec<f64>, f64)> {
        use std::f64::consts::PI;
        match ds {
            1 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
            2 => (0..order)
                .map(|j| {
                    let phi = 2.0 * PI * j as f64 / order as f64;
                    (vec![phi.cos(), phi.sin()], 2.0 * PI / order as f64)
                })
                .collect(),
            _ => {
                let mut out = Vec::new();
                for (c, wc) in GaussLegendre::new(order).on(-1.0, 1.0) {
                    let s = (1.0 - c * c).max(0.0).sqrt();
                    for j in 0..order {
                        let phi = 2.0 * PI * j as f64 / order as f64;
                        out.push((
                            vec![c, s * phi.cos(), s * phi.sin()],
                            wc * 2.0 * PI / order as f64,
                        ));
                    }
                }
                out
            }
        }
    }

    /// `int d^ds k / (2 pi)^ds  conj(g~) f~ (k0, k) / (2 omega) * weight(k0)`
    /// over one cone of the shell with mass squared `sigma`. The radial
    /// variable is `t` with `|k| = sqrt(sigma) sinh t`, so `d|k| / omega = dt`
    /// and the integrand stays analytic.
    #[allow(clippy::too_many_arguments)]
    fn shell(
        &self,
        order: usize,
        radius: f64,
        g: &Gauss,
        f: &Gauss,
        sigma: f64,
        cone: Cone,
        weight: impl Fn(f64) -> f64,
    ) -> Complex64 {
        let ds = g.center.len() - 1;
        let sign = match cone {
            Cone::Forward => 1.0,
            Cone::Backward => -1.0,
        };
        let root = sigma.sqrt();
        // (|k|, omega, radial measure including 1/(2 omega))
        let radial: Vec<(f64, f64, f64)> = if root > 0.0 {
            GaussLegendre::new(order)
                .on(0.0, (radius / root).asinh())
                .into_iter()
                .map(|(t, w)| {
                    let r = root * t.sinh();
                    (r, root * t.cosh(), w * r.powi(ds as i32 - 1) / 2.0)
                })
                .collect()
        } else {
            GaussLegendre::new(order)
                .on(0.0, radius)
                .into_iter()
                .map(|(r, w)| (r, r, w * r.powi(ds as i32 - 2) / 2.0))
                .collect()
        };
        let dirs = Self::directions(ds, order);
        let mut acc = KahanSum::default();
        let mut k = vec![0.0; ds + 1];
        for &(r, omega, wr) in &radial {
            k[0] = sign * omega;
            let wk = wr * weight(k[0]);
            for (dir, wd) in &dirs {
                for (slot, x) in k[1..].iter_mut().zip(dir) {
                    *slot = r * x;
                }
                acc.add(g.transform(&k).conj() * f.transform(&k) * (wk * wd));
            }
        }
        acc.value() * (2.0 * std::f64::consts::PI).powi(-(ds as i32))
    }

    /// Mass-squared nodes for the spectral smearing. A range starting at zero
    /// is split into geometric panels to absorb the logarithmic growth of
    /// the shell integral there.
    fn mass_nodes(&self, lo: f64, hi: f64, order: usize) -> Vec<(f64, f64)> {
        let rule = GaussLegendre::new(order);
        if lo > 0.0 {
            let panels = (2.0 * self.sigmas).ceil().max(1.0) as usize;
            let step = (hi - lo) / panels as f64;
            return (0..panels)
                .flat_map(|i| rule.on(lo + i as f64 * step, lo + (i + 1) as f64 * step))
                .collect();
        }
        let mut out = Vec::new();
        let mut top = hi;
        for _ in 0..48 {
            out.extend(rule.on(top / 2.0, top));
            top /= 2.0;
        }
        out
    }

    fn raw(
        &self,
        variant: KernelVariant,
        g: &Gauss,
        f: &Gauss,
        spec: &KernelSpec,
        order: usize,
    ) -> Complex64 {
        let radius = self.radius(g, f);
        let m2 = spec.mass.mass * spec.mass.mass;
        let shell = |sigma: f64, cone: Cone, weight: &dyn Fn(f64) -> f64| {
            self.shell(order, radius, g, f, sigma, cone, weight)
        };
        match variant {
            KernelVariant::Gibbs => {
                let w = |k0: f64| 1.0 / k0.abs();
                (shell(m2, Cone::Forward, &w) + shell(m2, Cone::Backward, &w)) * spec.kt
            }
            KernelVariant::QuantumForward => shell(m2, Cone::Forward, &|_| 1.0) * spec.hbar,
            KernelVariant::QuantumClassical => {
                (shell(m2, Cone::Forward, &|_| 1.0) + shell(m2, Cone::Backward, &|_| 1.0))
                    * (spec.hbar / 2.0)
            }
            KernelVariant::Generalized => {
                let w2 = spec.mass.width * spec.mass.width;
                let lo = (m2 - self.sigmas * w2).max(0.0);
                let hi = m2 + self.sigmas * w2;
                let mut total = KahanSum::default();
                for (s, ws) in self.mass_nodes(lo, hi, order / 2) {
                    total.add(
                        shell(s, Cone::Forward, &|_| 1.0) * (spec.mass.spectral_density(s) * ws),
                    );
                }
                total.value() * spec.hbar
            }
        }
    }

    /// Value with a convergence check against doubled quadrature order.
    pub fn two_point(
        &self,
        variant: KernelVariant,
        g: &TestFunctionSpec,
        f: &TestFunctionSpec,
        spec: &KernelSpec,
    ) -> Result<KernelValue, KernelError> {
        let dims = spec.dims();
        let (g, f) = (gaussian(g, dims)?, gaussian(f, dims)?);
        check_shape(spec)?;
        if variant == KernelVariant::Gibbs && spec.mass.mass <= 0.0 {
            return Err(KernelError::Parameter(
                "the thermal kernel needs a positive mass".into(),
            ));
        }
        if variant != KernelVariant::Generalized && spec.mass.mass <= 0.0 && spec.spatial_dims == 1
        {
            return Err(KernelError::Parameter(
                "the massless shell diverges in one spatial dimension".into(),
            ));
        }
        let coarse = self.raw(variant, &g, &f, spec, self.order);
        let fine = self.raw(variant, &g, &f, spec, 2 * self.order);
        let error = (fine - coarse).norm();
        let tolerance = self.tolerance * fine.norm().max(f64::MIN_POSITIVE);
        if error > tolerance && error > 1e-300 {
            return Err(KernelError::NotConverged {
                estimate: fine,
                error,
                tolerance,
            });
        }
        Ok(KernelValue {
            value: fine,
            error,
            order: 2 * self.order,
        })
    }

    /// One cone of the plain shell integral (prefactor `hbar`).
    pub fn cone(
        &self,
        g: &TestFunctionSpec,
        f: &TestFunctionSpec,
        spec: &KernelSpec,
        cone: Cone,
    ) -> Result<Complex64, KernelError> {
        let dims = spec.dims();
        let (g, f) = (gaussian(g, dims)?, gaussian(f, dims)?);
        check_shape(spec)?;
        let m2 = spec.mass.mass * spec.mass.mass;
        Ok(self.shell(
            2 * self.order,
            self.radius(&g, &f),
            &g,
            &f,
            m2,
            cone,
            |_| 1.0,
        ) * spec.hbar)
    }
}

pub fn two_point_kernel(
    variant: KernelVariant,
    g: &TestFunctionSpec,
    f: &TestFunctionSpec,
    spec: &KernelSpec,
) -> Result<KernelValue, KernelError> {
    Kernels::default().two_point(variant, g, f, spec)
}
