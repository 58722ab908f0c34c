//! Consistency relations for `F(s, u) = lam G(u + s) / (G(u) G(s))`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::KernelSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FConditionReport {
    pub samples: usize,
    /// Max relative residual of `F(s+u,v) F(s,u) = F(s+v,u) F(s,v)`.
    pub composition_residual: f64,
    /// Max relative residual of `|F(s,u)|^2 = lam^2 M(u+s) / (M(u) M(s))`.
    pub modulus_residual: f64,
}

impl FConditionReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.composition_residual < tolerance && self.modulus_residual < tolerance
    }
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Checks both relations at `samples` seeded momentum triples drawn from
/// `[-extent, extent]^d`. `corruption` adds a constant to the numerator
/// `G(u + s)`, which should break them.
pub fn f_condition_check_with(
    spec: &KernelSpec,
    samples: usize,
    seed: u64,
    extent: f64,
    corruption: f64,
) -> FConditionReport {
    let g = |u: &[f64]| spec.mass.amplitude(u);
    let f = |s: &[f64], u: &[f64]| -> Complex64 {
        (g(&add(u, s)) + corruption) * spec.lambda / (g(u) * g(s))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = spec.dims();
    let mut draw = || -> Vec<f64> { (0..d).map(|_| rng.random_range(-extent..extent)).collect() };
    let mut report = FConditionReport {
        samples,
        composition_residual: 0.0,
        modulus_residual: 0.0,
    };
    for _ in 0..samples {
        let (s, u, v) = (draw(), draw(), draw());
        let lhs = f(&add(&s, &u), &v) * f(&s, &u);
        let rhs = f(&add(&s, &v), &u) * f(&s, &v);
        report.composition_residual = report.composition_residual.max(relative(lhs, rhs));
        let m = |x: &[f64]| spec.mass.weight(x);
        let want = spec.lambda * spec.lambda * m(&add(&u, &s)) / (m(&u) * m(&s));
        let got = f(&s, &u).norm_sqr();
        report.modulus_residual = report.modulus_residual.max(relative(
            Complex64::new(got, 0.0),
            Complex64::new(want, 0.0),
        ));
    }
    report
}

pub fn f_condition_check(spec: &KernelSpec, samples: usize, seed: u64) -> FConditionReport {
    f_condition_check_with(spec, samples, seed, 2.0, 0.0)
}
