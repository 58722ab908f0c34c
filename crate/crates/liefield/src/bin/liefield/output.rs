use std::fmt::Write;

use liefield::kernels::KernelError;
use liefield::machine;
use liefield::psd::PsdError;
use liefield::scattering::ScatteringError;
use liefield::OracleError;
use num_complex::Complex64;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed,
    Failed,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Passed
        } else {
            Status::Failed
        }
    }
}

/// What a subcommand produced: a human rendering, a machine document body,
/// and whether its check passed.
pub struct Report {
    pub human: String,
    pub machine: Value,
    pub status: Status,
}

impl Report {
    pub fn new(human: String, machine: Value) -> Report {
        Report {
            human,
            machine,
            status: Status::Passed,
        }
    }

    pub fn with_status(mut self, status: Status) -> Report {
        self.status = status;
        self
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, inputs or configuration (exit 2).
    Usage(String),
    /// A computation could not produce a trustworthy number (exit 3).
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        match e {
            OracleError::ZeroDivisor(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> CliError {
        match e {
            KernelError::NotConverged { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<PsdError> for CliError {
    fn from(e: PsdError) -> CliError {
        match e {
            PsdError::Oracle(o) => o.into(),
            PsdError::Inconsistent { .. } => CliError::Numeric(e.to_string()),
            PsdError::Parameter(m) => CliError::Usage(m),
        }
    }
}

impl From<ScatteringError> for CliError {
    fn from(e: ScatteringError) -> CliError {
        match e {
            ScatteringError::Oracle(o) => o.into(),
            ScatteringError::ZeroNorm => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<liefield_core::ParseError> for CliError {
    fn from(e: liefield_core::ParseError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<liefield_core::NormalOrderError> for CliError {
    fn from(e: liefield_core::NormalOrderError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

pub fn complex(z: Complex64) -> String {
    format!("{:.15e} {:+.15e}i", z.re, z.im)
}

pub fn numeric_line(out: &mut String, name: &str, value: Complex64, error: f64) {
    let _ = writeln!(out, "{name} = {}  (error {error:.3e})", complex(value));
}

pub fn pass_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn render(command: &str, report: &Report, machine_format: bool) -> String {
    if machine_format {
        let mut s = machine::render(&machine::envelope(command, report.machine.clone()));
        s.push('\n');
        s
    } else {
        let mut s = report.human.clone();
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s
    }
}
