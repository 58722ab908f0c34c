//! Subcommands that need a realized model.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use liefield::config::Config;
use liefield::continuum::ContinuumOracle;
use liefield::kernels::{KernelVariant, Kernels};
use liefield::lattice::LatticeOracle;
use liefield::machine::{complex as json_complex, numeric, polynomial};
use liefield::overlap::{momentum_overlap, momentum_overlap_grid, MomentumBox};
use liefield::psd::{partition_sums, psd_check};
use liefield::scattering::scattering_report;
use liefield::{FormOracle, KernelSpec, Realization, TestFunctionSpec};
use liefield_core::combinatorics::{double_factorial, partitions_with_multiplicities};
use liefield_core::tensor::{bivector_integrand, metric_pairing_sum, Bivector, C64};
use liefield_core::{to_human, Label, Mode, Polynomial};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::output::{complex, numeric_line, pass_word, CliError, Report, Status};
use crate::symbolic::{label, labels, vev_of};

/// Global overrides applied on top of a config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub lambda: Option<f64>,
}

pub fn load(path: Option<&Path>, overrides: Overrides) -> Result<Config, CliError> {
    let mut cfg = match path {
        Some(p) => Config::load(p).map_err(|e| CliError::Usage(e.to_string()))?,
        None => Config {
            spec: KernelSpec::default(),
            functions: BTreeMap::new(),
        },
    };
    if let Some(m) = overrides.mode {
        cfg.spec.mode = m;
    }
    if let Some(l) = overrides.lambda {
        cfg.spec.lambda = l;
    }
    Ok(cfg)
}

pub fn realize(cfg: &Config) -> Result<Box<dyn FormOracle>, CliError> {
    Ok(match cfg.spec.realization {
        Realization::Lattice { .. } => Box::new(LatticeOracle::new(&cfg.spec, &cfg.functions)?),
        Realization::Continuum { .. } => Box::new(ContinuumOracle::new(&cfg.spec, &cfg.functions)?),
    })
}

fn lattice_oracle(cfg: &Config, what: &str) -> Result<LatticeOracle, CliError> {
    match cfg.spec.realization {
        Realization::Lattice { .. } => Ok(LatticeOracle::new(&cfg.spec, &cfg.functions)?),
        Realization::Continuum { .. } => Err(CliError::Usage(format!(
            "{what} needs a lattice realization"
        ))),
    }
}

/// The same model at lower quadrature order, for an error estimate.
fn coarse_continuum(cfg: &Config) -> Result<Option<ContinuumOracle>, CliError> {
    let Realization::Continuum {
        order,
        position_order,
        sigmas,
    } = cfg.spec.realization
    else {
        return Ok(None);
    };
    let mut spec = cfg.spec.clone();
    spec.realization = Realization::Continuum {
        order: (order * 3 / 4).max(2),
        position_order: (position_order * 3 / 4).max(2),
        sigmas,
    };
    Ok(Some(ContinuumOracle::new(&spec, &cfg.functions)?))
}

fn evaluate_with_error(
    cfg: &Config,
    oracle: &dyn FormOracle,
    p: &Polynomial,
) -> Result<(Complex64, f64), CliError> {
    let value = oracle.evaluate(p)?;
    let error = match coarse_continuum(cfg)? {
        Some(c) => (c.evaluate(p)? - value).norm(),
        None => 0.0,
    };
    Ok((value, error))
}

pub fn vev(expr: &str, mode: Mode, cfg: Option<&Config>) -> Result<Report, CliError> {
    let p = vev_of(expr, mode)?;
    let mut human = to_human(&p);
    let mut doc = json!({ "result": polynomial(&p), "termCount": p.len() });
    if let Some(cfg) = cfg {
        let oracle = realize(cfg)?;
        let (value, error) = evaluate_with_error(cfg, oracle.as_ref(), &p)?;
        human.push('\n');
        numeric_line(&mut human, "value", value, error);
        doc["numeric"] = numeric(value, error);
    }
    Ok(Report::new(human, doc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Route {
    Momentum,
    Realspace,
    Both,
}

/// Labels of a lone classical form `(; f1..fn)`.
fn realspace_labels(p: &Polynomial) -> Result<Vec<Label>, CliError> {
    let err = || CliError::Usage("the real-space route takes a single form(;f1,..,fn)".into());
    let mut terms = p.iter();
    let (m, c) = terms.next().ok_or_else(err)?;
    if terms.next().is_some()
        || !c.is_one()
        || m.explicit_lambda() != 0
        || !m.ops().is_empty()
        || m.forms().len() != 1
    {
        return Err(err());
    }
    let form = &m.forms()[0];
    if !form.anti().is_empty() {
        return Err(err());
    }
    Ok(form.lin().to_vec())
}

pub fn eval_form(expr: &str, route: Route, cfg: &Config) -> Result<Report, CliError> {
    let mode = cfg.spec.mode;
    let p = liefield_core::parse(expr, mode)?;
    let mut human = String::new();
    let mut doc = json!({ "expression": polynomial(&p) });
    let oracle = realize(cfg)?;
    let mut momentum = None;
    if route != Route::Realspace {
        let (value, error) = evaluate_with_error(cfg, oracle.as_ref(), &p)?;
        numeric_line(&mut human, "momentum", value, error);
        doc["momentum"] = numeric(value, error);
        momentum = Some(value);
    }
    if route != Route::Momentum {
        let ls = realspace_labels(&p)?;
        let value = match cfg.spec.realization {
            Realization::Lattice { .. } => {
                LatticeOracle::new(&cfg.spec, &cfg.functions)?.realspace_value(&ls)?
            }
            Realization::Continuum { .. } => {
                ContinuumOracle::new(&cfg.spec, &cfg.functions)?.realspace_value(&ls)?
            }
        };
        let error = match momentum {
            Some(m) => (m - value).norm(),
            None => 0.0,
        };
        numeric_line(&mut human, "realspace", value, error);
        doc["realspace"] = numeric(value, error);
        if let Some(m) = momentum {
            let gap = (m - value).norm() / m.norm().max(value.norm()).max(f64::MIN_POSITIVE);
            let _ = writeln!(human, "relative route gap = {gap:.3e}");
            doc["routeGap"] = json!(gap);
        }
    }
    Ok(Report::new(human, doc))
}

fn default_gaussian(dims: usize) -> TestFunctionSpec {
    TestFunctionSpec::gaussian(&vec![0.0; dims], 1.0, &vec![0.0; dims])
}

fn function(cfg: &Config, name: &str) -> Result<TestFunctionSpec, CliError> {
    match cfg.functions.get(name) {
        Some(f) => Ok(f.clone()),
        None if cfg.functions.is_empty() => Ok(default_gaussian(cfg.spec.dims())),
        None => Err(CliError::Usage(format!(
            "no test function named `{name}` in the config"
        ))),
    }
}

pub struct KernelArgs<'a> {
    pub variant: &'a str,
    pub g: &'a str,
    pub f: &'a str,
    pub order: usize,
    pub tolerance: f64,
    pub sigmas: f64,
}

pub fn kernel(cfg: &Config, args: &KernelArgs) -> Result<Report, CliError> {
    let variant = KernelVariant::parse(args.variant).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown kernel `{}` (expected C, Q+, QC or gQ+)",
            args.variant
        ))
    })?;
    let (g, f) = (function(cfg, args.g)?, function(cfg, args.f)?);
    let k = Kernels {
        order: args.order,
        tolerance: args.tolerance,
        sigmas: args.sigmas,
    };
    let v = k.two_point(variant, &g, &f, &cfg.spec)?;
    let mut human = String::new();
    numeric_line(
        &mut human,
        &format!("{}({};{})", variant.name(), args.g, args.f),
        v.value,
        v.error,
    );
    let mut doc = numeric(v.value, v.error);
    doc["variant"] = json!(variant.name());
    doc["order"] = json!(v.order);
    Ok(Report::new(human, doc))
}

pub fn scattering(cfg: &Config, g: &str, f: &str) -> Result<Report, CliError> {
    let mode = cfg.spec.mode;
    if mode != Mode::Classical {
        return Err(CliError::Usage(
            "scattering is computed in classical mode".into(),
        ));
    }
    let oracle = realize(cfg)?;
    let r = scattering_report(&label(g, mode)?, &label(f, mode)?, oracle.as_ref())?;
    let gap = r.route_gap();
    let names = ["mean", "connected2", "connected3"];
    let mut human = format!("<g|g> = {}\n", complex(r.norm));
    let mut doc = json!({ "norm": json_complex(r.norm), "routeGap": gap });
    for (i, name) in names.iter().enumerate() {
        let _ = writeln!(
            human,
            "{name:<10} = {}  (closed form {})",
            complex(r.connected[i]),
            complex(r.closed_form[i])
        );
        doc[*name] = json!({
            "value": json_complex(r.connected[i]),
            "closedForm": json_complex(r.closed_form[i]),
            "error": (r.connected[i] - r.closed_form[i]).norm(),
        });
    }
    let _ = writeln!(human, "relative route gap = {gap:.3e}");
    Ok(Report::new(human, doc))
}

fn seed_mix(run: u64, own: u64) -> u64 {
    own ^ run.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Applies the run seed: random and box functions are reseeded, and an
/// empty config gets three random functions `r1..r3`.
fn seeded(mut cfg: Config, seed: u64) -> Config {
    if cfg.functions.is_empty() {
        for i in 1..=3u64 {
            cfg.functions.insert(
                format!("r{i}"),
                TestFunctionSpec::Random {
                    seed: seed_mix(seed, i),
                    scale: 1.0,
                },
            );
        }
    } else {
        for f in cfg.functions.values_mut() {
            match f {
                TestFunctionSpec::Random { seed: s, .. }
                | TestFunctionSpec::MomentumBox { seed: s, .. } => *s = seed_mix(seed, *s),
                _ => {}
            }
        }
    }
    cfg
}

pub struct PsdArgs<'a> {
    pub labels: Option<&'a [String]>,
    pub max_particles: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub partition_tolerance: f64,
}

pub fn psd(cfg: Config, args: &PsdArgs) -> Result<Report, CliError> {
    let cfg = seeded(cfg, args.seed);
    if cfg.spec.mode != Mode::Classical {
        return Err(CliError::Usage("psd-check runs in classical mode".into()));
    }
    let oracle = lattice_oracle(&cfg, "psd-check")?;
    let names: Vec<String> = match args.labels {
        Some(ls) => ls.to_vec(),
        None => cfg.functions.keys().cloned().collect(),
    };
    if names.is_empty() {
        return Err(CliError::Usage("psd-check needs at least one label".into()));
    }
    let pool = labels(&names, Mode::Classical)?;
    let report = psd_check(&oracle, &pool, args.max_particles, args.tolerance)?;
    let mut human = format!(
        "gram size {}: min eigenvalue {:.6e}, norm {:.6e}, hermiticity {:.2e}: {}\n",
        report.size,
        report.min_eigenvalue,
        report.matrix_norm,
        report.hermiticity,
        pass_word(report.pass)
    );
    let mut partitions = Vec::new();
    let mut partitions_ok = true;
    for n in 1..=args.max_particles {
        let f: Vec<Label> = (0..n).map(|i| pool[i % pool.len()].clone()).collect();
        let sums = partition_sums(&oracle, &f, &f)?;
        let records =
            partitions_with_multiplicities(n).map_err(|e| CliError::Usage(e.to_string()))?;
        for (s, rec) in sums.iter().zip(&records) {
            let ok = s.value.re >= -args.partition_tolerance * s.value.norm().max(1.0);
            partitions_ok &= ok;
            let _ = writeln!(
                human,
                "  n={n} partition {:?}: coefficient {}, {} terms, S = {}: {}",
                rec.parts,
                rec.coefficient(),
                rec.term_count(),
                complex(s.value),
                pass_word(ok)
            );
            partitions.push(json!({
                "n": n,
                "partition": rec.parts,
                "coefficient": rec.coefficient() as u64,
                "termCount": rec.term_count() as u64,
                "value": json_complex(s.value),
                "pass": ok,
            }));
        }
    }
    let ok = report.pass && partitions_ok;
    let doc = json!({
        "labels": names,
        "seed": args.seed,
        "maxParticles": args.max_particles,
        "size": report.size,
        "minEigenvalue": report.min_eigenvalue,
        "maxEigenvalue": report.max_eigenvalue,
        "matrixNorm": report.matrix_norm,
        "hermiticity": report.hermiticity,
        "tolerance": report.tolerance,
        "partitions": partitions,
        "pass": ok,
    });
    Ok(Report::new(human, doc).with_status(Status::from_bool(ok)))
}

fn parse_box(text: &str) -> Result<MomentumBox, CliError> {
    let err = || {
        CliError::Usage(format!(
            "box `{text}`: expected lo:hi per axis, comma separated"
        ))
    };
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for axis in text.split(',') {
        let (a, b) = axis.split_once(':').ok_or_else(err)?;
        let a: f64 = a.trim().parse().map_err(|_| err())?;
        let b: f64 = b.trim().parse().map_err(|_| err())?;
        if !(a <= b) {
            return Err(err());
        }
        lo.push(a);
        hi.push(b);
    }
    Ok(MomentumBox::new(lo, hi))
}

fn integer_axes(b: &MomentumBox) -> Option<Vec<(i64, i64)>> {
    b.lo.iter()
        .zip(&b.hi)
        .map(|(a, c)| {
            (a.fract() == 0.0 && c.fract() == 0.0 && a.abs() < 1e6 && c.abs() < 1e6)
                .then_some((*a as i64, *c as i64))
        })
        .collect()
}

pub fn overlap(s: &str, s1: &str, s2: &str) -> Result<Report, CliError> {
    let boxes = [parse_box(s)?, parse_box(s1)?, parse_box(s2)?];
    if boxes.iter().any(|b| b.lo.len() != boxes[0].lo.len()) {
        return Err(CliError::Usage("boxes differ in dimension".into()));
    }
    let o = momentum_overlap(&boxes[0], &boxes[1], &boxes[2]);
    let mut human = format!("pairwise = {}\nsum = {}\n", o.pairwise, o.sum);
    let mut doc = json!({ "pairwise": o.pairwise, "sum": o.sum });
    let mut status = Status::Passed;
    if let [Some(a), Some(b), Some(c)] = boxes.each_ref().map(integer_axes) {
        let grid = momentum_overlap_grid(&a, &b, &c);
        let agree = grid == o;
        let _ = writeln!(human, "grid enumeration agrees: {agree}");
        doc["gridAgrees"] = json!(agree);
        status = Status::from_bool(agree);
    }
    Ok(Report::new(human, doc).with_status(status))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TensorCheck {
    /// Term count of the metric pairing sum.
    Pairing,
    /// Double Hodge dual against `-F`.
    Hodge,
    /// Lightlike field-strength integrand against its closed form.
    Em,
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn tensor(check: TensorCheck, k: usize, samples: usize, seed: u64) -> Result<Report, CliError> {
    let tol = 1e-12;
    match check {
        TensorCheck::Pairing => {
            if k > 12 {
                return Err(CliError::Usage(
                    "pairing sums are enumerated for k <= 12".into(),
                ));
            }
            let count = metric_pairing_sum(k).terms.len();
            let expected = if k % 2 == 1 {
                0
            } else {
                double_factorial(k as i64 - 1) as usize
            };
            let ok = count == expected;
            Ok(Report::new(
                format!(
                    "k={k}: {count} pairings, (k-1)!! = {expected}: {}\n",
                    pass_word(ok)
                ),
                json!({ "k": k, "termCount": count, "expected": expected, "pass": ok }),
            )
            .with_status(Status::from_bool(ok)))
        }
        TensorCheck::Hodge | TensorCheck::Em => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                let e = [(); 3].map(|_| random_c64(&mut rng));
                let b = [(); 3].map(|_| random_c64(&mut rng));
                let f = Bivector::from_fields(e, b);
                let r = if check == TensorCheck::Hodge {
                    f.hodge_dual().hodge_dual().max_abs_diff(&-f)
                } else {
                    let u0: f64 = rng.random_range(0.1..5.0);
                    let got = bivector_integrand(&f, &f, [u0, 0.0, 0.0, u0]);
                    let want = u0 * u0 * ((e[0] + b[1]).norm_sqr() + (e[1] - b[0]).norm_sqr());
                    (got - want).norm() / want.max(1.0)
                };
                worst = worst.max(r);
            }
            let ok = worst < tol;
            Ok(Report::new(
                format!(
                    "{samples} samples, max residual {worst:.3e}: {}\n",
                    pass_word(ok)
                ),
                json!({ "samples": samples, "seed": seed, "residual": worst, "pass": ok }),
            )
            .with_status(Status::from_bool(ok)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boxes_parse() {
        let b = parse_box("1:2, -3:4").unwrap();
        assert_eq!(b.lo, vec![1.0, -3.0]);
        assert!(parse_box("2:1").is_err());
        assert!(parse_box("1").is_err());
    }

    #[test]
    fn seeding_is_deterministic() {
        let cfg = Config {
            spec: KernelSpec::default(),
            functions: BTreeMap::new(),
        };
        assert_eq!(seeded(cfg.clone(), 4), seeded(cfg, 4));
    }

    #[test]
    fn rejects_compound_realspace() {
        let p = liefield_core::parse("form(;f,g) + form(;g,g)", Mode::Classical).unwrap();
        assert!(realspace_labels(&p).is_err());
        let p = liefield_core::parse("form(;f,g,h)", Mode::Classical).unwrap();
        assert_eq!(realspace_labels(&p).unwrap().len(), 3);
    }
}
