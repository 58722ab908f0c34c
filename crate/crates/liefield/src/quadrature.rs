//! Gauss-Legendre rules and tensor-product integration over boxes.

use num_complex::Complex64;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre polynomial from Chebyshev guesses.
    pub fn new(order: usize) -> GaussLegendre {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| (mid + half * x, half * w))
            .collect()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { p0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Axis-aligned box `[lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Box {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Box {
    pub fn around(center: &[f64], half_width: f64) -> Box {
        Box {
            lo: center.iter().map(|c| c - half_width).collect(),
            hi: center.iter().map(|c| c + half_width).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l >= h)
    }

    pub fn intersect(&self, other: &Box) -> Box {
        Box {
            lo: self
                .lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| a.max(*b))
                .collect(),
            hi: self
                .hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| a.min(*b))
                .collect(),
        }
    }

    /// Minkowski sum.
    pub fn plus(&self, other: &Box) -> Box {
        Box {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn negated(&self) -> Box {
        Box {
            lo: self.hi.iter().map(|x| -x).collect(),
            hi: self.lo.iter().map(|x| -x).collect(),
        }
    }

    pub fn shifted(&self, s: &[f64]) -> Box {
        Box {
            lo: self.lo.iter().zip(s).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(s).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn hull(&self, other: &Box) -> Box {
        Box {
            lo: self
                .lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| a.min(*b))
                .collect(),
            hi: self
                .hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| a.max(*b))
                .collect(),
        }
    }

    /// Tensor-product nodes `(point, weight)`.
    pub fn nodes(&self, rule: &GaussLegendre) -> Vec<(Vec<f64>, f64)> {
        let mut out = vec![(Vec::with_capacity(self.dim()), 1.0)];
        for (a, b) in self.lo.iter().zip(&self.hi) {
            let axis = rule.on(*a, *b);
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for (p, w) in &out {
                for (x, wx) in &axis {
                    let mut q = p.clone();
                    q.push(*x);
                    next.push((q, w * wx));
                }
            }
            out = next;
        }
        out
    }

    pub fn integrate(&self, rule: &GaussLegendre, f: impl Fn(&[f64]) -> Complex64) -> Complex64 {
        if self.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = KahanSum::default();
        for (p, w) in self.nodes(rule) {
            acc.add(f(&p) * w);
        }
        acc.value()
    }
}

/// Compensated complex summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: Complex64,
    carry: Complex64,
}

impl KahanSum {
    pub fn add(&mut self, x: Complex64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}
