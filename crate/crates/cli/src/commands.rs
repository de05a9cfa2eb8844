use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Value};

use fqdist::asymptotics::reports::{
    fill_error_exponents, t33_report, t34_report, t41_report, t42_report, t54_report, t55_report, t56_report,
};
use fqdist::asymptotics::{
    coeffs_a, coeffs_a_hat, gamma_ratio_check, residue_omega_counts, AsymptoticContext, AsymptoticReport, Convention, KappaRef,
};
use fqdist::character::lpoly::grh_certify;
use fqdist::character::{characters, l_polynomial, ModulusCtx};
use fqdist::divisor::variance_sums;
use fqdist::irreducible::mobius_count;
use fqdist::json::{complex_value, rational_text};
use fqdist::series::OmegaCountTable;
use fqdist::verify::{run_suite, Suite, VerifyConfig};
use fqdist::{FieldSpec, IrreducibleTable, Poly, PrimeCounts};

use crate::output::{cell, Output};
use crate::CliError;

/// Radius of the coefficient-extraction circle for the A_r.
const A_RADIUS: f64 = 0.5;
/// Same for the Â_r, whose generating function has a nearer singularity.
const A_HAT_RADIUS: f64 = 0.45;

fn samples(r_max: usize) -> usize {
    (4 * r_max).max(64)
}

/// Rejects enumerations of A_n beyond the budget before any work starts.
fn check_budget(k: &FieldSpec, n: usize, budget: u64) -> Result<(), CliError> {
    match (k.q() as u64).checked_pow(n as u32) {
        Some(size) if size <= budget => Ok(()),
        _ => Err(CliError::Usage(format!("enumerating {}^{n} polynomials exceeds the budget {budget}", k.q()))),
    }
}

pub struct Census {
    pub output: Output,
    pub agree: bool,
}

pub fn census(k: &FieldSpec, max_deg: usize, budget: u64, inject_fault: Option<usize>) -> Result<Census, CliError> {
    if max_deg == 0 {
        return Err(CliError::Usage("--max-deg must be at least 1".into()));
    }
    let mut table = IrreducibleTable::build_with_budget(k, max_deg, budget)?;
    if let Some(d) = inject_fault {
        if d == 0 || d > max_deg {
            return Err(CliError::Usage(format!("fault degree {d} outside 1..={max_deg}")));
        }
        table.corrupt_for_testing(d);
    }
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut agree = table.check_against_mobius().is_ok();
    for d in 1..=max_deg {
        let sieve = table.count(d).to_string();
        let mobius = mobius_count(k.q(), d).to_string();
        agree &= sieve == mobius;
        json_rows.push(json!({"d": d, "count": sieve, "mobius": mobius}));
        rows.push(vec![d.to_string(), sieve, mobius]);
    }
    let json = json!({"q": k.q(), "max_deg": max_deg, "agree": agree, "rows": json_rows});
    Ok(Census { output: Output { json, headers: vec!["d", "count", "mobius"], rows }, agree })
}

pub fn count(k: &FieldSpec, ns: &[usize], t: Option<usize>, predict: bool) -> Result<Output, CliError> {
    let n_max = *ns.iter().max().expect("at least one degree");
    if predict && ns.iter().any(|&n| n < 3) {
        return Err(CliError::Usage("--predict needs n ≥ 3".into()));
    }
    if predict && t == Some(0) {
        return Err(CliError::Usage("--predict needs t ≥ 1".into()));
    }
    let counts = PrimeCounts::mobius(k.q(), n_max.max(60));
    let tbl = OmegaCountTable::from_prime_counts(&counts, n_max)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &n in ns {
        let ts: Vec<usize> = match t {
            Some(t) => vec![t],
            None => (0..=n).collect(),
        };
        let r_max = ts.iter().copied().max().unwrap_or(1).max(1);
        let coeffs = if predict { Some(coeffs_a(&counts, KappaRef::AtN(n as u64), r_max, A_RADIUS, samples(r_max))?) } else { None };
        for &t in &ts {
            let exact = if t <= n { tbl.get(n, t) } else { 0u32.into() };
            let report = match &coeffs {
                Some(c) if t >= 1 => Some(t34_report(&tbl, n, t, c)?),
                _ => None,
            };
            let predicted = report.as_ref().map(|r| r.main_term.re);
            let deviation = report.as_ref().and_then(|r| r.relative_deviation);
            json_rows.push(json!({"n": n, "t": t, "count": exact.to_string(), "predicted": predicted, "relative_deviation": deviation}));
            rows.push(vec![n.to_string(), t.to_string(), exact.to_string(), cell(predicted), cell(deviation)]);
        }
    }
    let json = json!({"q": k.q(), "rows": json_rows});
    Ok(Output { json, headers: vec!["n", "t", "count", "predicted", "relative_deviation"], rows })
}

pub struct ResidueArgs<'a> {
    pub ctx: &'a Arc<ModulusCtx>,
    pub h: &'a str,
    pub ns: &'a [usize],
    pub t: Option<usize>,
    pub predict: bool,
    pub budget: u64,
}

pub fn residue_count(k: &FieldSpec, a: ResidueArgs) -> Result<Output, CliError> {
    let h = Poly::parse(a.h, k)?;
    let unit = a.ctx.unit_id(&h).ok_or_else(|| CliError::Usage(format!("h = {} is not coprime to Q", a.h)))?;
    let n_max = *a.ns.iter().max().expect("at least one degree");
    check_budget(k, n_max, a.budget)?;
    if a.predict && (a.ns.iter().any(|&n| n < 3) || a.t == Some(0)) {
        return Err(CliError::Usage("--predict needs n ≥ 3 and t ≥ 1".into()));
    }
    let table = IrreducibleTable::build_with_budget(k, n_max, a.budget)?;
    let counts = PrimeCounts::mobius(k.q(), 60);
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &n in a.ns {
        let by = residue_omega_counts(n, a.ctx, &table, a.budget)?;
        let ts: Vec<usize> = match a.t {
            Some(t) => vec![t],
            None => (0..=n).collect(),
        };
        let r_max = ts.iter().copied().max().unwrap_or(1).max(1);
        let coeffs = if a.predict { Some(coeffs_a(&counts, KappaRef::AtN(n as u64), r_max, A_RADIUS, samples(r_max))?) } else { None };
        for &t in &ts {
            let exact = if t <= n { by.count(unit, t) } else { 0 };
            let (mut disp, mut der) = (None, None);
            if let Some(c) = coeffs.as_ref().filter(|_| t >= 1) {
                disp = Some(t42_report(&by, unit, t, c, a.ctx, Convention::Displayed)?.main_term.re);
                der = Some(t42_report(&by, unit, t, c, a.ctx, Convention::Derived)?.main_term.re);
            }
            json_rows.push(json!({"n": n, "t": t, "count": exact.to_string(), "predicted_displayed": disp, "predicted_derived": der}));
            rows.push(vec![n.to_string(), t.to_string(), exact.to_string(), cell(disp), cell(der)]);
        }
    }
    let json = json!({
        "q": k.q(),
        "modulus": a.ctx.modulus().to_text(k),
        "h": h.to_text(k),
        "rows": json_rows,
    });
    Ok(Output { json, headers: vec!["n", "t", "count", "predicted_displayed", "predicted_derived"], rows })
}

pub struct Verified {
    pub output: Output,
    pub all_passed: bool,
}

pub fn verify(suite: Option<Suite>, cfg: &VerifyConfig) -> Verified {
    let outcomes = run_suite(suite, cfg);
    let all_passed = outcomes.iter().all(|o| o.passed);
    let rows = outcomes
        .iter()
        .map(|o| vec![o.id.to_string(), format!("{:?}", o.suite).to_lowercase(), o.name.to_string(), o.passed.to_string(), o.detail.clone()])
        .collect();
    // timings are left out so that repeated runs print identical output
    let json = Value::Array(
        outcomes
            .iter()
            .map(|o| json!({"id": o.id, "suite": o.suite, "name": o.name, "passed": o.passed, "detail": o.detail}))
            .collect(),
    );
    Verified { output: Output { json, headers: vec!["id", "suite", "name", "passed", "detail"], rows }, all_passed }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Theorem {
    L33,
    T33,
    T34,
    T41,
    T42,
    T54,
    T55,
    T56,
}

pub struct AsymptoticArgs<'a> {
    pub theorem: Theorem,
    pub ctx: Option<&'a Arc<ModulusCtx>>,
    pub h: Option<&'a str>,
    pub ns: &'a [usize],
    pub y: Option<Complex64>,
    pub t: Option<usize>,
    pub conventions: &'a [Convention],
    pub trunc: usize,
    pub budget: u64,
}

fn need<T>(v: Option<T>, flag: &str, theorem: Theorem) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{theorem:?} needs {flag}")))
}

pub fn asymptotics(k: &FieldSpec, a: AsymptoticArgs) -> Result<Output, CliError> {
    use Theorem::*;
    let th = a.theorem;
    let n_max = *a.ns.iter().max().expect("at least one degree");
    if a.ns.iter().any(|&n| n < 3) {
        return Err(CliError::Usage("asymptotic reports need n ≥ 3".into()));
    }
    let needs_modulus = matches!(th, T41 | T42 | T54 | T55 | T56);
    let ctx = if needs_modulus { Some(need(a.ctx, "--Q", th)?) } else { None };
    if matches!(th, T41 | T42 | T54 | T55 | T56) {
        check_budget(k, n_max, a.budget)?;
    }
    let y = if matches!(th, L33 | T33 | T41 | T55) { Some(need(a.y, "--y", th)?) } else { None };
    let t = if matches!(th, T34 | T42 | T56) { Some(need(a.t, "--t", th)?) } else { None };
    if t == Some(0) {
        return Err(CliError::Usage("--t must be at least 1".into()));
    }
    let unit = match (th, ctx) {
        (T41 | T42, Some(ctx)) => {
            let h = Poly::parse(need(a.h, "--h", th)?, k)?;
            Some(ctx.unit_id(&h).ok_or_else(|| CliError::Usage("h is not coprime to Q".into()))?)
        }
        _ => None,
    };
    let mut actx = AsymptoticContext::new(k.q());
    if let Some(ctx) = ctx {
        actx = actx.with_modulus(ctx, a.trunc)?;
    }
    let mut reports: Vec<AsymptoticReport> = Vec::new();
    match th {
        L33 => {
            for &n in a.ns {
                reports.push(gamma_ratio_check(n as u64, y.unwrap())?);
            }
        }
        T33 | T34 => {
            let tbl = OmegaCountTable::from_prime_counts(&actx.counts, n_max)?;
            for &n in a.ns {
                reports.push(match th {
                    T33 => t33_report(&tbl, &actx, n, y.unwrap())?,
                    _ => {
                        let t = t.unwrap();
                        t34_report(&tbl, n, t, &coeffs_a(&actx.counts, KappaRef::AtN(n as u64), t, A_RADIUS, samples(t))?)?
                    }
                });
            }
        }
        T41 | T42 => {
            let ctx = ctx.unwrap();
            let table = IrreducibleTable::build_with_budget(k, n_max, a.budget)?;
            for &n in a.ns {
                let by = residue_omega_counts(n, ctx, &table, a.budget)?;
                for &conv in a.conventions {
                    reports.push(if th == T41 {
                        t41_report(&by, unit.unwrap(), &actx, y.unwrap(), conv)?
                    } else {
                        let t = t.unwrap();
                        let c = coeffs_a(&actx.counts, KappaRef::AtN(n as u64), t, A_RADIUS, samples(t))?;
                        t42_report(&by, unit.unwrap(), t, &c, ctx, conv)?
                    });
                }
            }
        }
        T54 | T55 | T56 => {
            let ctx = ctx.unwrap();
            let table = IrreducibleTable::build_with_budget(k, n_max, a.budget)?;
            for &n in a.ns {
                let sums = variance_sums(n, ctx, &table, a.budget)?;
                match th {
                    T54 => {
                        for &conv in a.conventions {
                            reports.push(t54_report(&sums, &actx, conv)?);
                        }
                    }
                    T55 => {
                        for &conv in a.conventions {
                            reports.push(t55_report(&sums, &actx, y.unwrap(), conv)?);
                        }
                    }
                    _ => {
                        let t = t.unwrap();
                        let classes = actx.classes.as_ref().expect("modulus attached above");
                        for &conv in a.conventions {
                            let c = coeffs_a_hat(
                                classes,
                                &actx.counts,
                                KappaRef::AtN(n as u64),
                                conv,
                                t,
                                A_HAT_RADIUS,
                                samples(t),
                                actx.depth,
                            )?;
                            let mut r = t56_report(&sums, t, &c, k.q())?;
                            r.convention = Some(conv);
                            reports.push(r);
                        }
                    }
                }
            }
        }
    }
    // exponent estimates compare consecutive degrees within one convention
    for conv in [None, Some(Convention::Displayed), Some(Convention::Derived)] {
        let mut group: Vec<AsymptoticReport> = reports.iter().filter(|r| r.convention == conv).cloned().collect();
        fill_error_exponents(&mut group);
        let mut it = group.into_iter();
        for r in reports.iter_mut().filter(|r| r.convention == conv) {
            *r = it.next().expect("same filter");
        }
    }
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.theorem.clone(),
                r.n.to_string(),
                r.y.map(|y| format!("{},{}", y.re, y.im)).unwrap_or_default(),
                cell(r.t),
                r.convention.map(|c| format!("{c:?}").to_lowercase()).unwrap_or_default(),
                format!("{},{}", r.exact_value.re, r.exact_value.im),
                format!("{},{}", r.main_term.re, r.main_term.im),
                cell(r.relative_deviation),
                cell(r.scaled_error),
                cell(r.error_exponent_estimate),
            ]
        })
        .collect();
    let json = serde_json::to_value(&reports).expect("reports serialize");
    let headers = vec![
        "theorem",
        "n",
        "y",
        "t",
        "convention",
        "exact_value",
        "main_term",
        "relative_deviation",
        "scaled_error",
        "error_exponent_estimate",
    ];
    Ok(Output { json, headers, rows })
}

pub fn constants(k: &FieldSpec, ctx: Option<&Arc<ModulusCtx>>, y: Complex64, n_ref: Option<u64>, r_max: usize, trunc: usize) -> Result<Output, CliError> {
    if r_max == 0 {
        return Err(CliError::Usage("--t (number of coefficients) must be at least 1".into()));
    }
    let mut actx = AsymptoticContext::new(k.q());
    if let Some(ctx) = ctx {
        actx = actx.with_modulus(ctx, trunc)?;
    }
    let rep = fqdist::asymptotics::reports::constants_report(&actx, y, n_ref, r_max)?;
    let json = serde_json::to_value(&rep).expect("report serializes");
    let mut rows = Vec::new();
    if let Value::Object(map) = &json {
        for (key, v) in map {
            rows.push(vec![key.clone(), flat(v)]);
        }
    }
    Ok(Output { json, headers: vec!["name", "value"], rows })
}

/// One-cell rendering of a JSON value for CSV.
fn flat(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("re") => format!("{},{}", m["re"], m["im"]),
        Value::Array(xs) => xs.iter().map(flat).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

pub fn lpoly(k: &FieldSpec, ctx: &Arc<ModulusCtx>, tol: f64) -> Result<Output, CliError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Usage(format!("--tol {tol} must lie in (0, 1)")));
    }
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for chi in characters(ctx).skip(1) {
        let lp = l_polynomial(&chi)?;
        let roots = grh_certify(&lp, tol)?;
        let coeffs: Vec<Value> = lp.coeffs().iter().map(|&c| complex_value(c)).collect();
        let jr: Vec<Value> = roots
            .iter()
            .map(|r| json!({"alpha": complex_value(r.alpha), "modulus": r.alpha.norm(), "class": r.class}))
            .collect();
        let moduli: Vec<String> = roots.iter().map(|r| format!("{:.12}", r.alpha.norm())).collect();
        rows.push(vec![chi.label(), chi.order().to_string(), lp.degree().to_string(), moduli.join(";")]);
        json_rows.push(json!({"character": chi.label(), "order": chi.order(), "degree": lp.degree(), "coeffs": coeffs, "inverse_roots": jr}));
    }
    let json = json!({"q": k.q(), "modulus": ctx.modulus().to_text(k), "phi": ctx.phi(), "characters": json_rows});
    Ok(Output { json, headers: vec!["character", "order", "degree", "root_moduli"], rows })
}

pub fn variance(k: &FieldSpec, ctx: &Arc<ModulusCtx>, ns: &[usize], budget: u64) -> Result<Output, CliError> {
    let n_max = *ns.iter().max().expect("at least one degree");
    check_budget(k, n_max, budget)?;
    let table = IrreducibleTable::build_with_budget(k, n_max.max(1), budget)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &n in ns {
        let sums = variance_sums(n, ctx, &table, budget)?;
        let phi_sq = num_rational::BigRational::from_integer((sums.phi * sums.phi).into());
        let by_omega: Vec<String> = sums
            .by_omega
            .iter()
            .map(|c| rational_text(&(num_rational::BigRational::from_integer(c.clone()) / &phi_sq)))
            .collect();
        let total = rational_text(&sums.total());
        for (t, v) in by_omega.iter().enumerate() {
            rows.push(vec![n.to_string(), t.to_string(), v.clone()]);
        }
        json_rows.push(json!({"n": n, "total": total, "by_omega": by_omega}));
    }
    let json = json!({"q": k.q(), "modulus": ctx.modulus().to_text(k), "phi": ctx.phi(), "rows": json_rows});
    Ok(Output { json, headers: vec!["n", "t", "variance_sum"], rows })
}
