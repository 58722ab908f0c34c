//! Model parameters: mass function, phase profile, test functions.

use liefield_core::Mode;
use num_complex::Complex64;

/// Kallen-Lehmann-type weight `M(u) = exp(-(u.u - m^2)^2 / w^4)` with the
/// Minkowski square `u.u = u0^2 - |u_s|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassFunction {
    pub mass: f64,
    pub width: f64,
    pub phase: Phase,
}

/// Phase profile of `G = sqrt(M) e^{i theta}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Phase {
    #[default]
    Zero,
    /// `theta = amplitude * sin(u0)`, odd in `u`.
    OddSine(f64),
    /// `theta = amplitude * cos(u0)`, even in `u`; breaks classicality.
    EvenCosine(f64),
}

impl Phase {
    pub fn angle(&self, u: &[f64]) -> f64 {
        match *self {
            Phase::Zero => 0.0,
            Phase::OddSine(a) => a * u[0].sin(),
            Phase::EvenCosine(a) => a * u[0].cos(),
        }
    }

    /// Whether `G(-u) = conj(G(u))` holds by construction.
    pub fn is_classical(&self) -> bool {
        match *self {
            Phase::Zero | Phase::OddSine(_) => true,
            Phase::EvenCosine(a) => a == 0.0,
        }
    }
}

pub fn minkowski_square(u: &[f64]) -> f64 {
    u[0] * u[0] - u[1..].iter().map(|x| x * x).sum::<f64>()
}

impl MassFunction {
    pub fn new(mass: f64, width: f64) -> MassFunction {
        MassFunction {
            mass,
            width,
            phase: Phase::Zero,
        }
    }

    pub fn with_phase(self, phase: Phase) -> MassFunction {
        MassFunction { phase, ..self }
    }

    /// `M(u)`.
    pub fn weight(&self, u: &[f64]) -> f64 {
        let d = minkowski_square(u) - self.mass * self.mass;
        (-(d * d) / self.width.powi(4)).exp()
    }

    /// Spectral density in `sigma = u.u`, the same profile as `M`.
    pub fn spectral_density(&self, sigma: f64) -> f64 {
        let d = sigma - self.mass * self.mass;
        (-(d * d) / self.width.powi(4)).exp()
    }

    /// `G(u) = sqrt(M(u)) e^{i theta(u)}`.
    pub fn amplitude(&self, u: &[f64]) -> Complex64 {
        Complex64::from_polar(self.weight(u).sqrt(), self.phase.angle(u))
    }
}

/// Where the forms are realized.
#[derive(Debug, Clone, PartialEq)]
pub enum Realization {
    /// Cyclic momentum group `Z_L^d`.
    Lattice { side: usize },
    /// Gauss-Legendre quadrature: `order` nodes per axis for momentum
    /// integrals and `position_order` for the real-space route.
    Continuum {
        order: usize,
        position_order: usize,
        sigmas: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub mode: Mode,
    /// Spatial dimension; the total dimension is one more.
    pub spatial_dims: usize,
    pub lambda: f64,
    pub hbar: f64,
    pub kt: f64,
    pub mass: MassFunction,
    pub realization: Realization,
}

impl KernelSpec {
    pub fn dims(&self) -> usize {
        self.spatial_dims + 1
    }

    pub fn with_lambda(&self, lambda: f64) -> KernelSpec {
        KernelSpec {
            lambda,
            ..self.clone()
        }
    }
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec {
            mode: Mode::Classical,
            spatial_dims: 1,
            lambda: 1.0,
            hbar: 1.0,
            kt: 1.0,
            mass: MassFunction::new(1.0, 1.0),
            realization: Realization::Lattice { side: 8 },
        }
    }
}

/// Where a lattice function's values live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Space {
    #[default]
    Position,
    Momentum,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestFunctionSpec {
    /// `f(x) = exp(-|x - c|^2 / (2 w^2)) e^{i k_c . x}`.
    Gaussian {
        center: Vec<f64>,
        width: f64,
        carrier: Vec<f64>,
    },
    /// Values on `Z_L^d` in row order (first axis slowest).
    Lattice {
        values: Vec<Complex64>,
        space: Space,
    },
    /// Seeded random momentum amplitudes on a box of lattice momentum
    /// indices `lo..=hi` per axis.
    MomentumBox {
        lo: Vec<i64>,
        hi: Vec<i64>,
        seed: u64,
    },
    /// Seeded random momentum amplitudes everywhere, scaled by
    /// `scale / sqrt(N)`.
    Random { seed: u64, scale: f64 },
}

impl TestFunctionSpec {
    pub fn gaussian(center: &[f64], width: f64, carrier: &[f64]) -> TestFunctionSpec {
        TestFunctionSpec::Gaussian {
            center: center.to_vec(),
            width,
            carrier: carrier.to_vec(),
        }
    }

    /// Continuous Fourier transform `int f(x) e^{-i k.x} dx` of a Gaussian.
    pub fn gaussian_transform(center: &[f64], width: f64, carrier: &[f64], k: &[f64]) -> Complex64 {
        let d = k.len() as i32;
        let mut dist2 = 0.0;
        let mut phase = 0.0;
        for i in 0..k.len() {
            let dk = k[i] - carrier[i];
            dist2 += dk * dk;
            phase -= dk * center[i];
        }
        let norm = ((2.0 * std::f64::consts::PI).sqrt() * width).powi(d);
        Complex64::from_polar(norm * (-0.5 * width * width * dist2).exp(), phase)
    }

    pub fn validate(&self, dims: usize) -> Result<(), String> {
        match self {
            TestFunctionSpec::Gaussian {
                center,
                width,
                carrier,
            } => {
                if center.len() != dims || carrier.len() != dims {
                    return Err(format!(
                        "gaussian center and carrier need {dims} components"
                    ));
                }
                if !(*width > 0.0) || !width.is_finite() {
                    return Err("gaussian width must be positive".into());
                }
                if center.iter().chain(carrier).any(|x| !x.is_finite()) {
                    return Err("gaussian parameters must be finite".into());
                }
            }
            TestFunctionSpec::Lattice { values, .. } => {
                if values
                    .iter()
                    .any(|v| !v.re.is_finite() || !v.im.is_finite())
                {
                    return Err("lattice values must be finite".into());
                }
            }
            TestFunctionSpec::MomentumBox { lo, hi, .. } => {
                if lo.len() != dims || hi.len() != dims {
                    return Err(format!("momentum box needs {dims} intervals"));
                }
                if lo.iter().zip(hi).any(|(a, b)| a > b) {
                    return Err("momentum box has an empty interval".into());
                }
            }
            TestFunctionSpec::Random { scale, .. } => {
                if !scale.is_finite() {
                    return Err("random scale must be finite".into());
                }
            }
        }
        Ok(())
    }
}
