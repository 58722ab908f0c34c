//! Printers. The human format re-parses to the same polynomial; the machine
//! format is JSON with a versioned schema.

use alloc::string::String;
use core::fmt::Write;

use crate::expr::{FormFactor, Generator, Monomial, Polynomial};
use crate::label::write_list;
use crate::rational::Rational;

struct FormDisplay<'a>(&'a FormFactor);

impl core::fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("form(")?;
        write_list(f, self.0.anti())?;
        f.write_str(";")?;
        write_list(f, self.0.lin())?;
        f.write_str(")")
    }
}

pub fn form_to_string(form: &FormFactor) -> String {
    alloc::format!("{}", FormDisplay(form))
}

pub fn generator_to_string(g: &Generator) -> String {
    match g {
        Generator::Creator(l) => alloc::format!("ad({l})"),
        Generator::Annihilator(l) => alloc::format!("a({l})"),
    }
}

fn push_grouped<T: PartialEq>(
    out: &mut alloc::vec::Vec<String>,
    items: &[T],
    show: impl Fn(&T) -> String,
) {
    let mut i = 0;
    while i < items.len() {
        let mut j = i + 1;
        while j < items.len() && items[j] == items[i] {
            j += 1;
        }
        let s = show(&items[i]);
        if j - i > 1 {
            out.push(alloc::format!("{s}^{}", j - i));
        } else {
            out.push(s);
        }
        i = j;
    }
}

/// The factors of a monomial joined by `*`, or empty for the unit.
pub fn monomial_to_string(m: &Monomial) -> String {
    let mut parts = alloc::vec::Vec::new();
    match m.explicit_lambda() {
        0 => {}
        1 => parts.push(String::from("lam")),
        k => parts.push(alloc::format!("lam^{k}")),
    }
    push_grouped(&mut parts, m.forms(), form_to_string);
    push_grouped(&mut parts, m.ops(), generator_to_string);
    parts.join("*")
}

fn write_term(out: &mut String, c: Rational, body: &str, first: bool) {
    let neg = c.is_negative();
    let mag = c.abs();
    match (first, neg) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    if body.is_empty() {
        let _ = write!(out, "{mag}");
    } else if mag.is_one() {
        out.push_str(body);
    } else {
        let _ = write!(out, "{mag}*{body}");
    }
}

/// Deterministic text in canonical term order; `"0"` for the zero polynomial.
pub fn to_human(p: &Polynomial) -> String {
    if p.is_zero() {
        return String::from("0");
    }
    let mut out = String::new();
    for (i, (m, c)) in p.iter().enumerate() {
        write_term(&mut out, *c, &monomial_to_string(m), i == 0);
    }
    out
}

/// Version of the machine format.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

pub fn print(p: &Polynomial, fmt: Format) -> String {
    match fmt {
        Format::Human => to_human(p),
        Format::Machine => to_machine(p),
    }
}

fn json_str(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn json_labels(out: &mut String, labels: &[crate::label::Label]) {
    out.push('[');
    for (i, l) in labels.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        json_str(out, &alloc::format!("{l}"));
    }
    out.push(']');
}

/// JSON object of the term list, in canonical order:
/// `{"schemaVersion":1,"terms":[{"coeff":"p/q","lambdaPow":k,"forms":[{"anti":[..],"lin":[..]}],"ops":[{"kind":"creator","label":".."}]}]}`.
/// `lambdaPow` is the explicit power, as in the human format.
pub fn to_machine(p: &Polynomial) -> String {
    let mut out = alloc::format!("{{\"schemaVersion\":{SCHEMA_VERSION},\"terms\":[");
    for (i, (m, c)) in p.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("{\"coeff\":");
        json_str(&mut out, &alloc::format!("{c}"));
        let _ = write!(out, ",\"lambdaPow\":{},\"forms\":[", m.explicit_lambda());
        for (j, f) in m.forms().iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str("{\"anti\":");
            json_labels(&mut out, f.anti());
            out.push_str(",\"lin\":");
            json_labels(&mut out, f.lin());
            out.push('}');
        }
        out.push_str("],\"ops\":[");
        for (j, g) in m.ops().iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let kind = if g.is_creator() {
                "creator"
            } else {
                "annihilator"
            };
            let _ = write!(out, "{{\"kind\":\"{kind}\",\"label\":");
            json_str(&mut out, &alloc::format!("{}", g.label()));
            out.push('}');
        }
        out.push_str("]}");
    }
    out.push_str("]}");
    out
}

impl core::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&to_human(self))
    }
}

impl core::fmt::Display for FormFactor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        core::fmt::Display::fmt(&FormDisplay(self), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Mode;
    use crate::parse::parse;

    #[test]
    fn zero_prints_zero() {
        assert_eq!(to_human(&Polynomial::zero()), "0");
    }

    #[test]
    fn round_trips() {
        for s in [
            "1",
            "-3/2",
            "form(f*;f,f) + form(f*,f*;f)",
            "lam^2*form(g;f)^2*ad(f)^2*a(g)",
            "ad(xi(g;f))*a(h*) - 2*a(xi(g;f)*)",
        ] {
            let p = parse(s, Mode::Quantum).unwrap();
            let q = parse(&to_human(&p), Mode::Quantum).unwrap();
            assert_eq!(p, q, "{s}");
        }
    }

    #[test]
    fn explicit_lambda_only() {
        let p = parse("lam*form(g;f,h)", Mode::Quantum).unwrap();
        assert_eq!(to_human(&p), "lam*form(g;f,h)");
    }

    #[test]
    fn machine_format_fields() {
        let p = parse("-1/2*lam*form(g;f,h)*ad(f)*a(xi(g;f))", Mode::Quantum).unwrap();
        assert_eq!(
            to_machine(&p),
            "{\"schemaVersion\":1,\"terms\":[{\"coeff\":\"-1/2\",\"lambdaPow\":1,\"forms\":[{\"anti\":[\"g\"],\"lin\":[\"f\",\"h\"]}],\"ops\":[{\"kind\":\"creator\",\"label\":\"f\"},{\"kind\":\"annihilator\",\"label\":\"xi(g;f)\"}]}]}"
        );
        assert_eq!(
            to_machine(&Polynomial::zero()),
            "{\"schemaVersion\":1,\"terms\":[]}"
        );
    }
}
