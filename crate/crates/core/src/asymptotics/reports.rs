//! Paired (exact, predicted) records for the deviation study.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use super::constants::{coeffs_a, coeffs_a_hat, constants_aq_bq, euler_constant_c, h1_at_inverse_q, Convention, KappaRef};
use super::gamma::{kappa, log_gamma};
use super::{main_term, predicted_count, AsymptoticContext, CauchyCoeffs, CountTheorem, MainTheorem};
use crate::character::ModulusCtx;
use crate::divisor::VarianceSums;
use crate::error::{ensure, Result};
use crate::factor::factorize;
use crate::irreducible::IrreducibleTable;
use crate::poly::enumerate_monic;
use crate::series::{rational_to_f64, OmegaCountTable};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub theorem: String,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "crate::json::opt_complex")]
    pub y: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub convention: Option<Convention>,
    #[serde(serialize_with = "crate::json::complex")]
    pub exact_value: Complex64,
    #[serde(serialize_with = "crate::json::complex")]
    pub main_term: Complex64,
    /// |exact − main|/|main|, absent when the main term vanishes.
    pub relative_deviation: Option<f64>,
    /// |exact − main| times the theorem's normalising power of n or q.
    pub scaled_error: Option<f64>,
    /// Local slope of log|exact − main| against log n, from the previous
    /// record of the same series.
    pub error_exponent_estimate: Option<f64>,
}

impl AsymptoticReport {
    pub fn new(theorem: &str, n: u64, exact_value: Complex64, main_term: Complex64) -> Self {
        let relative_deviation = (main_term.norm() > 0.0).then(|| (exact_value - main_term).norm() / main_term.norm());
        AsymptoticReport {
            theorem: theorem.to_string(),
            n,
            y: None,
            t: None,
            convention: None,
            exact_value,
            main_term,
            relative_deviation,
            scaled_error: None,
            error_exponent_estimate: None,
        }
    }

    fn with_y(mut self, y: Complex64) -> Self {
        self.y = Some(y);
        self
    }

    fn with_t(mut self, t: usize) -> Self {
        self.t = Some(t);
        self
    }

    fn with_convention(mut self, c: Convention) -> Self {
        self.convention = Some(c);
        self
    }

    pub fn abs_error(&self) -> f64 {
        (self.exact_value - self.main_term).norm()
    }
}

/// Fills `error_exponent_estimate` for each record from its predecessor.
pub fn fill_error_exponents(reports: &mut [AsymptoticReport]) {
    for i in 1..reports.len() {
        let (a, b) = (&reports[i - 1], &reports[i]);
        let (ea, eb) = (a.abs_error(), b.abs_error());
        reports[i].error_exponent_estimate = (ea > 0.0 && eb > 0.0 && a.n != b.n && a.n > 0)
            .then(|| (eb / ea).ln() / (b.n as f64 / a.n as f64).ln());
    }
}

/// Γ(n−1+y)/Γ(n) against κ(y,n)/n^{1−y}; `scaled_error` is the error times
/// n^{2−Re y}.
pub fn gamma_ratio_check(n: u64, y: Complex64) -> Result<AsymptoticReport> {
    ensure!(n >= 3, Precondition, "the ratio check needs n ≥ 3, got {n}");
    let nf = n as f64;
    let exact = if y == Complex64::new(1.0, 0.0) {
        Complex64::new(1.0, 0.0)
    } else {
        (log_gamma(y + (nf - 1.0))? - log_gamma(Complex64::new(nf, 0.0))?).exp()
    };
    let predicted = kappa(y, n)? * Complex64::new(nf, 0.0).powc(y - 1.0);
    let mut r = AsymptoticReport::new("L3.3", n, exact, predicted).with_y(y);
    r.scaled_error = Some((exact - predicted).norm() * nf.powf(2.0 - y.re));
    Ok(r)
}

/// Exact Σ_{f∈A_n} y^{Ω(f)} from the Ω table against the T3.3 main term.
pub fn t33_report(tbl: &OmegaCountTable, actx: &AsymptoticContext, n: usize, y: Complex64) -> Result<AsymptoticReport> {
    ensure!(n <= tbl.n_max(), Precondition, "Ω table stops at degree {}", tbl.n_max());
    let exact = tbl.weighted_sum_complex(n, y);
    let m = main_term(MainTheorem::T33, n as u64, y, Convention::Displayed, actx)?;
    let mut r = AsymptoticReport::new("T3.3", n as u64, exact, m.value).with_y(y);
    r.scaled_error = Some((exact - m.value).norm() * (n as f64).powf(2.0 - y.re) / (tbl.q() as f64).powi(n as i32));
    Ok(r)
}

/// Monic polynomials of degree n coprime to Q, by residue class and Ω.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueOmegaCounts {
    pub n: usize,
    /// by_unit[id][t], ids as in [`ModulusCtx::unit_id`].
    pub by_unit: Vec<Vec<u64>>,
}

impl ResidueOmegaCounts {
    pub fn count(&self, unit: u32, t: usize) -> u64 {
        self.by_unit[unit as usize].get(t).copied().unwrap_or(0)
    }

    pub fn weighted(&self, unit: u32, y: Complex64) -> Complex64 {
        self.by_unit[unit as usize].iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * y + c as f64)
    }
}

/// Enumerates A_n; fails when q^n exceeds `budget`.
pub fn residue_omega_counts(n: usize, ctx: &ModulusCtx, table: &IrreducibleTable, budget: u64) -> Result<ResidueOmegaCounts> {
    let q = ctx.field().q() as u64;
    let size = q.checked_pow(n as u32).filter(|&s| s <= budget);
    ensure!(size.is_some(), Resource, "enumerating {q}^{n} polynomials exceeds the budget {budget}");
    let mut by_unit = vec![vec![0u64; n + 1]; ctx.phi() as usize];
    for f in enumerate_monic(ctx.field(), n) {
        if let Some(id) = ctx.unit_id(f.as_poly()) {
            let t = factorize(&f, table)?.omega() as usize;
            by_unit[id as usize][t] += 1;
        }
    }
    Ok(ResidueOmegaCounts { n, by_unit })
}

pub fn t41_report(
    counts: &ResidueOmegaCounts,
    unit: u32,
    actx: &AsymptoticContext,
    y: Complex64,
    conv: Convention,
) -> Result<AsymptoticReport> {
    let exact = counts.weighted(unit, y);
    let m = main_term(MainTheorem::T41, counts.n as u64, y, conv, actx)?;
    Ok(AsymptoticReport::new("T4.1", counts.n as u64, exact, m.value).with_y(y).with_convention(conv))
}

/// N_t(n) against the T3.4 finite sum.
pub fn t34_report(tbl: &OmegaCountTable, n: usize, t: usize, coeffs: &CauchyCoeffs) -> Result<AsymptoticReport> {
    ensure!(n <= tbl.n_max(), Precondition, "Ω table stops at degree {}", tbl.n_max());
    let exact = if t <= n { rational_to_f64(&BigRational::from_integer(BigInt::from(tbl.get(n, t)))) } else { 0.0 };
    let p = predicted_count(CountTheorem::T34, n as u64, t, coeffs, tbl.q(), None, Convention::Displayed)?;
    Ok(AsymptoticReport::new("T3.4", n as u64, exact.into(), p.into()).with_t(t))
}

pub fn t42_report(
    counts: &ResidueOmegaCounts,
    unit: u32,
    t: usize,
    coeffs: &CauchyCoeffs,
    ctx: &ModulusCtx,
    conv: Convention,
) -> Result<AsymptoticReport> {
    let exact = counts.count(unit, t) as f64;
    let p = predicted_count(CountTheorem::T42, counts.n as u64, t, coeffs, ctx.field().q(), Some(ctx), conv)?;
    Ok(AsymptoticReport::new("T4.2", counts.n as u64, exact.into(), p.into()).with_t(t).with_convention(conv))
}

/// Σ_{f∈A_n} 𝕍 against (A_Q(n+1) + B_Q)q^{n+1}; `scaled_error` is the
/// residual times q^{−0.6n}.
pub fn t54_report(sums: &VarianceSums, actx: &AsymptoticContext, conv: Convention) -> Result<AsymptoticReport> {
    let k = constants_aq_bq(actx.classes()?)?;
    let q = actx.q() as f64;
    let n = sums.n;
    let exact = rational_to_f64(&sums.total());
    let main = (k.a_q * (n + 1) as f64 + k.b_q(conv)) * q.powi(n as i32 + 1);
    let mut r = AsymptoticReport::new("T5.4", n as u64, exact.into(), main.into()).with_convention(conv);
    r.scaled_error = Some((exact - main) * q.powf(-0.6 * n as f64));
    Ok(r)
}

/// Σ y^{Ω} 𝕍 against the branch-point main term (Re y < 1/2) or, at y = 1/2,
/// against the simple-pole term.
pub fn t55_report(sums: &VarianceSums, actx: &AsymptoticContext, y: Complex64, conv: Convention) -> Result<AsymptoticReport> {
    let theorem = if y == Complex64::new(0.5, 0.0) { MainTheorem::T55Half } else { MainTheorem::T55 };
    let exact = if theorem == MainTheorem::T55Half {
        rational_to_f64(&sums.weighted_exact(&BigRational::new(1.into(), 2.into()))).into()
    } else {
        sums.weighted_complex(y)
    };
    let m = main_term(theorem, sums.n as u64, y, conv, actx)?;
    Ok(AsymptoticReport::new(theorem.id(), sums.n as u64, exact, m.value).with_y(y).with_convention(conv))
}

/// Σ_{Ω(f)=t} 𝕍 against the T5.6 finite sum with Â_r.
pub fn t56_report(sums: &VarianceSums, t: usize, coeffs: &CauchyCoeffs, q: u32) -> Result<AsymptoticReport> {
    let exact = sums.by_omega.get(t).map_or(0.0, |c| {
        rational_to_f64(&BigRational::new(c.clone(), BigInt::from(sums.phi * sums.phi)))
    });
    let p = predicted_count(CountTheorem::T56, sums.n as u64, t, coeffs, q, None, Convention::Displayed)?;
    Ok(AsymptoticReport::new("T5.6", sums.n as u64, exact.into(), p.into()).with_t(t))
}

/// Every constant entering the main terms at one y.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub q: u32,
    pub modulus: Option<String>,
    #[serde(serialize_with = "crate::json::complex")]
    pub y: Complex64,
    pub n_ref: Option<u64>,
    pub truncation_deg: usize,
    #[serde(serialize_with = "crate::json::complex")]
    pub c_y: Complex64,
    pub c_y_tail: f64,
    #[serde(serialize_with = "crate::json::opt_complex")]
    pub kappa: Option<Complex64>,
    /// A_1..A_{r_max}.
    #[serde(serialize_with = "crate::json::vec_complex")]
    pub a_r: Vec<Complex64>,
    /// Â_1..Â_{r_max}, when a modulus is given.
    #[serde(serialize_with = "crate::json::vec_complex")]
    pub a_hat_r: Vec<Complex64>,
    pub a_q: Option<f64>,
    pub b_q: Option<f64>,
    pub b_q_derived: Option<f64>,
    #[serde(serialize_with = "crate::json::opt_complex")]
    pub h1: Option<Complex64>,
    #[serde(serialize_with = "crate::json::opt_complex")]
    pub h1_derived: Option<Complex64>,
    pub h1_tail: Option<f64>,
}

/// Assembles a [`ConstantsReport`]. With `n_ref = None` the coefficients use
/// the large-n convention κ ≡ 1.
pub fn constants_report(actx: &AsymptoticContext, y: Complex64, n_ref: Option<u64>, r_max: usize) -> Result<ConstantsReport> {
    let kref = n_ref.map_or(KappaRef::LargeN, KappaRef::AtN);
    let (c_y, c_y_tail) = euler_constant_c(y, &actx.counts, actx.depth.euler)?;
    let samples = (4 * r_max).max(64);
    let a = coeffs_a(&actx.counts, kref, r_max, 0.5, samples)?;
    let mut rep = ConstantsReport {
        q: actx.q(),
        modulus: actx.modulus().map(|m| m.modulus().to_text(m.field())),
        y,
        n_ref,
        truncation_deg: actx.depth.euler,
        c_y,
        c_y_tail,
        kappa: n_ref.map(|n| kappa(y, n)).transpose()?,
        a_r: a.coeffs[1..].to_vec(),
        a_hat_r: Vec::new(),
        a_q: None,
        b_q: None,
        b_q_derived: None,
        h1: None,
        h1_derived: None,
        h1_tail: None,
    };
    if let Some(classes) = &actx.classes {
        let k = constants_aq_bq(classes)?;
        rep.a_q = Some(k.a_q);
        rep.b_q = Some(k.b_q_displayed);
        rep.b_q_derived = Some(k.b_q_derived);
        let (h, t1) = h1_at_inverse_q(classes, &actx.counts, y, Convention::Displayed, actx.depth)?;
        let (hd, t2) = h1_at_inverse_q(classes, &actx.counts, y, Convention::Derived, actx.depth)?;
        rep.h1 = Some(h);
        rep.h1_derived = Some(hd);
        rep.h1_tail = Some(t1.max(t2));
        let ah = coeffs_a_hat(classes, &actx.counts, kref, Convention::Displayed, r_max, 0.45, samples, actx.depth)?;
        rep.a_hat_r = ah.coeffs[1..].to_vec();
    }
    Ok(rep)
}
