//! `transform`, `reduce` and `verify`.

use heun_core::identities::{apply, format_transform, symbolic_template};
use heun_core::numerics::heun_series;
use heun_core::reduction::{detect_cases, ReducedForm, ReductionEntry};
use heun_core::scalar::TOL_CONDITION;
use heun_core::verification::{verify_identity, verify_reduction, verify_solution};
use heun_core::{GridSpec, HeunParams, IdentityId, TransformResult, VerificationReport};
use serde::Serialize;

use crate::input::{parse_form, parse_grid, parse_params};
use crate::{CliError, Config, Verdict};

/// Prints `value` as pretty JSON or the text rendering.
pub fn emit<T: Serialize>(config: &Config, value: &T, text: impl FnOnce() -> String) -> Result<(), CliError> {
    if config.json {
        let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Invalid(format!("serializing output: {e}")))?;
        println!("{s}");
    } else {
        print!("{}", text());
    }
    Ok(())
}

pub fn default_grid(config: &Config) -> GridSpec {
    GridSpec::with_points(config.grid_points as usize)
}

pub fn summary(r: &VerificationReport) -> String {
    let mut s = format!(
        "{} max_rel_err = {:.3e} (tol {:.0e}, {} points)",
        if r.pass { "PASS" } else { "FAIL" },
        r.max_rel_err,
        r.tolerance,
        r.grid.len()
    );
    if r.truncation_estimate > 0.0 {
        s.push_str(&format!(", series tail ≤ {:.1e}", r.truncation_estimate));
    }
    s
}

pub fn params_line(p: &HeunParams) -> String {
    use heun_core::scalar::fmt_c64;
    format!(
        "d = {}, q = {}, a = {}, b = {}, Γ = {}, Δ = {}, ε = {}",
        fmt_c64(p.d()),
        fmt_c64(p.q()),
        fmt_c64(p.a()),
        fmt_c64(p.b()),
        fmt_c64(p.gamma()),
        fmt_c64(p.delta()),
        fmt_c64(p.epsilon())
    )
}

#[derive(Serialize)]
struct TransformOutput<'a> {
    identity: IdentityId,
    template: &'static str,
    input: HeunParams,
    #[serde(flatten)]
    result: &'a TransformResult,
    text: String,
}

pub fn transform(config: &Config, params: &str, id: IdentityId) -> Result<Verdict, CliError> {
    let p = parse_params(params)?;
    let t = apply(id, &p)?;
    let text = format_transform(&p, &t);
    let out = TransformOutput { identity: id, template: symbolic_template(id), input: p, result: &t, text: text.clone() };
    emit(config, &out, || {
        let n = &t.params;
        format!(
            "{id}: {}\n{text}\ntransformed: {}\nFuchsian residual: {:.1e}\n",
            symbolic_template(id),
            params_line(n),
            n.fuchsian_residual()
        )
    })?;
    Ok(Verdict::Ok)
}

#[derive(Serialize)]
struct ReduceEntryOutput<'a> {
    #[serde(flatten)]
    entry: &'a ReductionEntry,
    formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification_error: Option<String>,
}

#[derive(Serialize)]
struct ReduceOutput<'a> {
    params: HeunParams,
    found: bool,
    cases: Vec<ReduceEntryOutput<'a>>,
}

pub fn reduce(config: &Config, params: &str) -> Result<Verdict, CliError> {
    let p = parse_params(params)?;
    let report = detect_cases(&p, TOL_CONDITION);
    let grid = default_grid(config);
    let cases: Vec<ReduceEntryOutput> = report
        .entries
        .iter()
        .map(|entry| {
            let (formula, check) = match &entry.form {
                ReducedForm::Hypergeometric(f) if !f.degenerate => {
                    (f.to_string(), Some(verify_reduction(&p, f, &grid, config.tol, config.order)))
                }
                ReducedForm::Hypergeometric(f) => (f.to_string(), None),
                ReducedForm::Quadrature(q) => (q.to_string(), None),
            };
            let (verification, verification_error) = match check {
                Some(Ok(r)) => (Some(r), None),
                Some(Err(e)) => (None, Some(e.to_string())),
                None => (None, None),
            };
            ReduceEntryOutput { entry, formula, verification, verification_error }
        })
        .collect();
    let found = !cases.is_empty();
    let out = ReduceOutput { params: p, found, cases };
    emit(config, &out, || {
        let mut s = format!("{}\n", params_line(&p));
        if !found {
            s.push_str("no reduction: every case condition fails\n");
        }
        for c in &out.cases {
            s.push_str(&format!("{}: {}\n", c.entry.case, c.formula));
            s.push_str(&format!("  conditions: {}\n", c.entry.conditions.join(", ")));
            for n in &c.entry.notes {
                s.push_str(&format!("  note: {n}\n"));
            }
            if let Some(r) = &c.verification {
                s.push_str(&format!("  {}\n", summary(r)));
            }
            if let Some(e) = &c.verification_error {
                s.push_str(&format!("  not verified: {e}\n"));
            }
        }
        s
    })?;
    Ok(if found { Verdict::Ok } else { Verdict::Failed })
}

#[derive(Serialize)]
struct VerifyOutput {
    kind: &'static str,
    params: HeunParams,
    #[serde(flatten)]
    report: VerificationReport,
}

pub fn verify(
    config: &Config,
    params: &str,
    form: Option<&str>,
    identity: Option<IdentityId>,
    grid: Option<&str>,
) -> Result<Verdict, CliError> {
    let p = parse_params(params)?;
    let grid = match grid {
        Some(g) => parse_grid(g)?,
        None => default_grid(config),
    };
    let (kind, report) = match (form, identity) {
        (Some(f), _) => {
            let f = parse_form(f)?;
            ("reduction", verify_reduction(&p, &f, &grid, config.tol, config.order)?)
        }
        (None, Some(id)) => ("identity", verify_identity(&p, id, &grid, config.tol, config.order)?),
        (None, None) => {
            let series = heun_series(&p, config.order)?;
            ("solution", verify_solution(&p, &series, &grid, config.tol)?)
        }
    };
    let pass = report.pass;
    let out = VerifyOutput { kind, params: p, report };
    emit(config, &out, || {
        let mut s = format!("{kind}: {}\n", summary(&out.report));
        for n in &out.report.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
        s
    })?;
    Ok(if pass { Verdict::Ok } else { Verdict::Failed })
}
