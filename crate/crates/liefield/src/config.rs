//! TOML model configuration.

use std::collections::BTreeMap;
use std::path::Path;

use liefield_core::Mode;
use num_complex::Complex64;
use serde::Deserialize;

use crate::model::{KernelSpec, MassFunction, Phase, Realization, Space, TestFunctionSpec};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    mode: Option<String>,
    #[serde(default = "default_dims")]
    dims: usize,
    #[serde(default = "one")]
    lambda: f64,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default = "one", rename = "kT")]
    kt: f64,
    #[serde(default)]
    mass: RawMass,
    #[serde(default)]
    realization: RawRealization,
    #[serde(default)]
    functions: BTreeMap<String, RawFunction>,
}

fn default_dims() -> usize {
    1
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMass {
    #[serde(default = "default_family")]
    family: String,
    #[serde(default = "one")]
    m: f64,
    #[serde(default = "one")]
    w: f64,
    #[serde(default = "default_phase")]
    phase: String,
    #[serde(default)]
    phase_amplitude: f64,
}

fn default_family() -> String {
    "gaussian-shell".into()
}

fn default_phase() -> String {
    "zero".into()
}

impl Default for RawMass {
    fn default() -> Self {
        RawMass {
            family: default_family(),
            m: 1.0,
            w: 1.0,
            phase: default_phase(),
            phase_amplitude: 0.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawRealization {
    Lattice {
        #[serde(rename = "L")]
        side: usize,
    },
    Continuum {
        #[serde(default = "default_order")]
        order: usize,
        #[serde(default = "default_position_order")]
        position_order: usize,
        #[serde(default = "default_sigmas")]
        sigmas: f64,
    },
}

fn default_order() -> usize {
    48
}

fn default_position_order() -> usize {
    40
}

fn default_sigmas() -> f64 {
    6.0
}

impl Default for RawRealization {
    fn default() -> Self {
        RawRealization::Lattice { side: 8 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawFunction {
    Gaussian {
        center: Vec<f64>,
        width: f64,
        #[serde(default)]
        carrier: Option<Vec<f64>>,
    },
    Lattice {
        #[serde(default)]
        space: Option<String>,
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
    Box {
        lo: Vec<i64>,
        hi: Vec<i64>,
        seed: u64,
    },
    Random {
        seed: u64,
        #[serde(default = "one")]
        scale: f64,
    },
}

/// A realized model description: kernel parameters plus named test
/// functions.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub spec: KernelSpec,
    pub functions: BTreeMap<String, TestFunctionSpec>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Config::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Config, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        raw.build()
    }
}

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "classical" => Ok(Mode::Classical),
        "quantum" => Ok(Mode::Quantum),
        other => Err(format!(
            "unknown mode `{other}` (expected classical or quantum)"
        )),
    }
}

impl RawConfig {
    fn build(self) -> Result<Config, ConfigError> {
        let invalid = ConfigError::Invalid;
        let mode = match self.mode.as_deref() {
            None => Mode::Classical,
            Some(s) => parse_mode(s).map_err(invalid)?,
        };
        if self.dims == 0 {
            return Err(invalid(
                "dims (spatial dimension) must be at least 1".into(),
            ));
        }
        if self.mass.family != "gaussian-shell" {
            return Err(invalid(format!(
                "unknown mass family `{}`",
                self.mass.family
            )));
        }
        if !(self.mass.w > 0.0) {
            return Err(invalid("mass.w must be positive".into()));
        }
        let phase = match self.mass.phase.as_str() {
            "zero" => Phase::Zero,
            "odd-sine" => Phase::OddSine(self.mass.phase_amplitude),
            "even-cosine" => Phase::EvenCosine(self.mass.phase_amplitude),
            other => return Err(invalid(format!("unknown phase profile `{other}`"))),
        };
        if mode == Mode::Classical && !phase.is_classical() {
            return Err(invalid(
                "classical mode needs an odd (or zero) phase profile".into(),
            ));
        }
        let realization = match self.realization {
            RawRealization::Lattice { side } => {
                if side < 2 {
                    return Err(invalid("lattice side L must be at least 2".into()));
                }
                Realization::Lattice { side }
            }
            RawRealization::Continuum {
                order,
                position_order,
                sigmas,
            } => {
                if order == 0 || position_order == 0 || !(sigmas > 0.0) {
                    return Err(invalid(
                        "continuum orders and sigmas must be positive".into(),
                    ));
                }
                Realization::Continuum {
                    order,
                    position_order,
                    sigmas,
                }
            }
        };
        let spec = KernelSpec {
            mode,
            spatial_dims: self.dims,
            lambda: self.lambda,
            hbar: self.hbar,
            kt: self.kt,
            mass: MassFunction::new(self.mass.m, self.mass.w).with_phase(phase),
            realization,
        };
        let d = spec.dims();
        let mut functions = BTreeMap::new();
        for (name, f) in self.functions {
            if liefield_core::parse::parse_label(&name, Mode::Classical)
                .map(|l| l.is_xi() || l.is_starred())
                .unwrap_or(true)
            {
                return Err(invalid(format!("`{name}` is not a usable label name")));
            }
            let spec_f = match f {
                RawFunction::Gaussian {
                    center,
                    width,
                    carrier,
                } => TestFunctionSpec::Gaussian {
                    carrier: carrier.unwrap_or_else(|| vec![0.0; center.len()]),
                    center,
                    width,
                },
                RawFunction::Lattice { space, re, im } => {
                    let space = match space.as_deref() {
                        None | Some("position") => Space::Position,
                        Some("momentum") => Space::Momentum,
                        Some(other) => return Err(invalid(format!("unknown space `{other}`"))),
                    };
                    let im = im.unwrap_or_else(|| vec![0.0; re.len()]);
                    if im.len() != re.len() {
                        return Err(invalid(format!("`{name}`: re and im differ in length")));
                    }
                    TestFunctionSpec::Lattice {
                        values: re
                            .iter()
                            .zip(&im)
                            .map(|(a, b)| Complex64::new(*a, *b))
                            .collect(),
                        space,
                    }
                }
                RawFunction::Box { lo, hi, seed } => TestFunctionSpec::MomentumBox { lo, hi, seed },
                RawFunction::Random { seed, scale } => TestFunctionSpec::Random { seed, scale },
            };
            spec_f
                .validate(d)
                .map_err(|e| invalid(format!("`{name}`: {e}")))?;
            functions.insert(name, spec_f);
        }
        Ok(Config { spec, functions })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lattice_config() {
        let c = Config::from_toml(
            r#"
            lambda = 0.5
            [mass]
            m = 1.0
            w = 2.0
            phase = "odd-sine"
            phase_amplitude = 0.3
            [realization]
            kind = "lattice"
            L = 4
            [functions.f]
            kind = "random"
            seed = 3
            [functions.g]
            kind = "gaussian"
            center = [0.0, 1.0]
            width = 1.5
            "#,
        )
        .unwrap();
        assert_eq!(c.spec.realization, Realization::Lattice { side: 4 });
        assert_eq!(c.spec.mass.phase, Phase::OddSine(0.3));
        assert_eq!(c.functions.len(), 2);
    }

    #[test]
    fn rejects_even_phase_in_classical_mode() {
        let e = Config::from_toml("[mass]\nphase = \"even-cosine\"\nphase_amplitude = 0.2\n")
            .unwrap_err();
        assert!(e.to_string().contains("odd"));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Config::from_toml("lambda = 1\nbogus = 2\n").is_err());
    }
}
