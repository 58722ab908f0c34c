//! Subcommands that work on symbolic expressions only.

use std::fmt::Write;

use liefield::machine::polynomial;
use liefield_core::combinatorics::{eulerian, factorial, partitions_with_multiplicities};
use liefield_core::normal::{jacobi_check, Options};
use liefield_core::parse::parse_label;
use liefield_core::states::{classify_terms, gsip_formula, state_inner_product, GramSchmidt};
use liefield_core::vacuum::{connected_correlator, cumulants, moments, vev, CumulantMismatch};
use liefield_core::{to_human, Label, Mode, NormalOrderer, Polynomial, Strategy};
use serde_json::json;

use crate::output::{pass_word, CliError, Report, Status};

pub fn label(text: &str, mode: Mode) -> Result<Label, CliError> {
    parse_label(text, mode).map_err(|e| CliError::Usage(format!("label `{text}`: {e}")))
}

pub fn labels(texts: &[String], mode: Mode) -> Result<Vec<Label>, CliError> {
    texts.iter().map(|t| label(t, mode)).collect()
}

fn poly_report(p: &Polynomial) -> Report {
    Report::new(
        to_human(p),
        json!({ "result": polynomial(p), "termCount": p.len() }),
    )
}

pub fn parse(expr: &str, mode: Mode) -> Result<Report, CliError> {
    Ok(poly_report(&liefield_core::parse(expr, mode)?))
}

fn orderer(mode: Mode, strategy: Strategy, max_degree: usize) -> NormalOrderer {
    let mut opts = Options::new(mode);
    opts.strategy = strategy;
    opts.max_degree = max_degree;
    NormalOrderer::new(opts)
}

pub fn normal_order(
    expr: &str,
    mode: Mode,
    strategy: Strategy,
    max_degree: usize,
) -> Result<Report, CliError> {
    let p = liefield_core::parse(expr, mode)?;
    Ok(poly_report(
        &orderer(mode, strategy, max_degree).normal_order(&p)?,
    ))
}

pub fn commutator(lhs: &str, rhs: &str, mode: Mode, max_degree: usize) -> Result<Report, CliError> {
    let a = liefield_core::parse(lhs, mode)?;
    let b = liefield_core::parse(rhs, mode)?;
    Ok(poly_report(
        &orderer(mode, Strategy::Leftmost, max_degree).commutator(&a, &b)?,
    ))
}

pub fn vev_of(expr: &str, mode: Mode) -> Result<Polynomial, CliError> {
    Ok(vev(&liefield_core::parse(expr, mode)?, mode))
}

pub fn moments_report(f: &str, n: usize, mode: Mode) -> Result<Report, CliError> {
    let f = label(f, mode)?;
    let ms = moments(&f, n, mode);
    let mut human = String::new();
    for (k, m) in ms.iter().enumerate() {
        let _ = writeln!(human, "<phi^{}> = {}", k + 1, to_human(m));
    }
    let list: Vec<_> = ms
        .iter()
        .enumerate()
        .map(|(k, m)| json!({ "n": k + 1, "result": polynomial(m) }))
        .collect();
    Ok(Report::new(human, json!({ "moments": list })))
}

/// Both routes agree or the command fails with the first mismatch.
pub fn cumulants_report(f: &str, n: usize, mode: Mode) -> Result<Report, CliError> {
    let f = label(f, mode)?;
    match cumulants(&f, n, mode) {
        Ok(cs) => {
            let mut human = String::new();
            let mut list = Vec::new();
            for (k, c) in cs.iter().enumerate() {
                let order = k + 1;
                let weights: Vec<u128> = (1..order).map(|j| eulerian(order as u32 - 1, j as u32 - 1)).collect();
                let shown: Vec<String> = weights.iter().map(u128::to_string).collect();
                let _ = writeln!(human, "C_{order} = {}    [weights {}]", to_human(c), shown.join(" "));
                list.push(json!({
                    "n": order,
                    "result": polynomial(c),
                    "weights": weights.iter().map(|w| *w as u64).collect::<Vec<_>>(),
                }));
            }
            Ok(Report::new(human, json!({ "cumulants": list, "pass": true })))
        }
        Err(CumulantMismatch { order, from_moments, closed_form }) => Ok(Report::new(
            format!(
                "cumulant routes disagree at order {order}\n  from moments: {}\n  closed form:  {}\n",
                to_human(&from_moments),
                to_human(&closed_form)
            ),
            json!({
                "pass": false,
                "order": order,
                "fromMoments": polynomial(&from_moments),
                "closedForm": polynomial(&closed_form),
            }),
        )
        .with_status(Status::Failed)),
    }
}

pub fn connected(texts: &[String], mode: Mode) -> Result<Report, CliError> {
    let ls = labels(texts, mode)?;
    if ls.is_empty() {
        return Err(CliError::Usage("connected needs at least one label".into()));
    }
    Ok(poly_report(&connected_correlator(&ls, mode)))
}

pub fn jacobi(
    texts: &[String],
    degree: usize,
    mode: Mode,
    strategy: Strategy,
) -> Result<Report, CliError> {
    let ls = labels(texts, mode)?;
    let mut opts = Options::new(mode);
    opts.strategy = strategy;
    let report = jacobi_check(&ls, degree, opts)?;
    let ok = report.passed();
    let mut human = format!(
        "jacobi: {} triples, {} violations: {}\n",
        report.triples_checked,
        report.violations.len(),
        pass_word(ok)
    );
    for v in report.violations.iter().take(5) {
        let _ = writeln!(
            human,
            "  [{}, {}, {}] -> {}",
            to_human(&v.triple[0]),
            to_human(&v.triple[1]),
            to_human(&v.triple[2]),
            to_human(&v.residual)
        );
    }
    let violations: Vec<_> = report
        .violations
        .iter()
        .map(|v| json!({ "triple": v.triple.iter().map(polynomial).collect::<Vec<_>>(), "residual": polynomial(&v.residual) }))
        .collect();
    Ok(Report::new(
        human,
        json!({ "triplesChecked": report.triples_checked, "violations": violations, "pass": ok }),
    )
    .with_status(Status::from_bool(ok)))
}

fn need_classical(mode: Mode, what: &str) -> Result<(), CliError> {
    if mode != Mode::Classical {
        return Err(CliError::Usage(format!(
            "{what} is defined in classical mode only"
        )));
    }
    Ok(())
}

pub fn gs_state(texts: &[String], mode: Mode) -> Result<Report, CliError> {
    need_classical(mode, "gs-state")?;
    let ls = labels(texts, mode)?;
    let state = GramSchmidt::new()
        .state(&ls, mode)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut r = poly_report(&state.poly);
    r.human = format!("{}|0>", r.human);
    r.machine["n"] = json!(state.n());
    Ok(r)
}

fn indexed(prefix: &str, n: usize) -> Vec<Label> {
    (1..=n)
        .map(|i| Label::external(&format!("{prefix}{i}")))
        .collect()
}

/// Compares the orthogonalized inner product with the partition formula for
/// symbolic labels `f1..fm`, `g1..gn`.
pub fn gsip_verify(m: usize, n: usize, mode: Mode) -> Result<Report, CliError> {
    need_classical(mode, "gsip-verify")?;
    if !(1..=5).contains(&m) || !(1..=5).contains(&n) {
        return Err(CliError::Usage("gsip-verify covers 1..=5 particles".into()));
    }
    let (f, g) = (indexed("f", m), indexed("g", n));
    let mut gs = GramSchmidt::new();
    let a = gs
        .state(&f, mode)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let b = gs
        .state(&g, mode)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let ip = state_inner_product(&a, &b, mode);
    let formula = gsip_formula(&f, &g, mode);
    let agree = ip == formula;
    let mut human = format!(
        "m={m} n={n}: {} terms, formula {}\n",
        ip.len(),
        if agree { "agrees" } else { "DIFFERS" }
    );
    let classes: Vec<_> = classify_terms(&ip)
        .into_iter()
        .map(|c| {
            let coeffs: Vec<String> = c.coefficients.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                human,
                "  partition {:?}: {} terms, coefficient {}",
                c.shape,
                c.terms,
                coeffs.join(",")
            );
            json!({ "partition": c.shape, "termCount": c.terms, "coefficients": coeffs })
        })
        .collect();
    let mut identity_ok = true;
    let mut records = Vec::new();
    if m == n {
        let recs = partitions_with_multiplicities(n).map_err(|e| CliError::Usage(e.to_string()))?;
        // every class contributes termCount * coefficient = M2 * n! products
        let total: u128 = recs.iter().map(|r| r.term_count() * r.coefficient()).sum();
        let nf = factorial(n as u32);
        identity_ok = total == nf * nf;
        let _ = writeln!(
            human,
            "  sum termCount*coefficient = {total}, (n!)^2 = {}: {}",
            nf * nf,
            pass_word(identity_ok)
        );
        for r in recs {
            records.push(json!({
                "partition": r.parts,
                "m1": r.m1 as u64,
                "m2": r.m2 as u64,
                "m3": r.m3 as u64,
                "termCount": r.term_count() as u64,
                "coefficient": r.coefficient() as u64,
            }));
        }
    }
    let ok = agree && identity_ok;
    Ok(Report::new(
        human,
        json!({
            "m": m,
            "n": n,
            "termCount": ip.len(),
            "classes": classes,
            "partitions": records,
            "formulaAgrees": agree,
            "pass": ok,
        }),
    )
    .with_status(Status::from_bool(ok)))
}
