//! Main terms of the asymptotic formulas and the transcendental functions
//! they are built from.

pub mod constants;
pub mod gamma;
pub mod reports;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::character::{ClassPrimeCounts, ModulusCtx};
use crate::error::{ensure, Result};
use crate::irreducible::PrimeCounts;

pub use constants::{
    coeffs_a, coeffs_a_hat, constants_aq_bq, euler_constant_c, fit_aq_bq, h1_at_inverse_q, CauchyCoeffs, Convention, KappaRef,
    LinearFit, SeriesDepth, VarianceConstants, DEFAULT_EULER_DEPTH,
};
pub use gamma::{beta, kappa, lanczos_log_gamma, log_gamma, log_gamma_checked, log_gamma_with, recip_gamma, GammaConfig};
pub use reports::{gamma_ratio_check, residue_omega_counts, AsymptoticReport, ConstantsReport, ResidueOmegaCounts};

/// Generating-function main terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MainTheorem {
    /// Σ_{f∈A_n} y^{Ω(f)}.
    #[serde(rename = "T3.3")]
    T33,
    /// Σ_{f∈A_n, f≡h} y^{Ω(f)}.
    #[serde(rename = "T4.1")]
    T41,
    /// Σ_{f∈A_n} y^{Ω(f)} 𝕍[τ(f;∘,Q)] for Re y < 1/2.
    #[serde(rename = "T5.5")]
    T55,
    /// The same sum at y = 1/2, where the singularity is a simple pole.
    #[serde(rename = "T5.5-half")]
    T55Half,
}

impl MainTheorem {
    pub fn id(self) -> &'static str {
        match self {
            MainTheorem::T33 => "T3.3",
            MainTheorem::T41 => "T4.1",
            MainTheorem::T55 => "T5.5",
            MainTheorem::T55Half => "T5.5-half",
        }
    }
}

/// Finite sums over r predicting counts with a fixed Ω.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountTheorem {
    #[serde(rename = "T3.4")]
    T34,
    #[serde(rename = "T4.2")]
    T42,
    #[serde(rename = "T5.6")]
    T56,
}

impl CountTheorem {
    pub fn id(self) -> &'static str {
        match self {
            CountTheorem::T34 => "T3.4",
            CountTheorem::T42 => "T4.2",
            CountTheorem::T56 => "T5.6",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MainTerm {
    #[serde(serialize_with = "crate::json::complex")]
    pub value: Complex64,
    /// Bound on the error from truncated products and series.
    pub tail: f64,
    /// 1/Γ vanished, so the displayed main term carries no information.
    pub degenerate: bool,
}

/// Prime counts, optional modulus data and truncation depths shared by every
/// main-term evaluation.
#[derive(Clone, Debug)]
pub struct AsymptoticContext {
    pub counts: PrimeCounts,
    pub classes: Option<ClassPrimeCounts>,
    pub depth: SeriesDepth,
}

impl AsymptoticContext {
    /// Prime counts to degree 60 and no modulus.
    pub fn new(q: u32) -> Self {
        AsymptoticContext { counts: PrimeCounts::mobius(q, 60), classes: None, depth: SeriesDepth { trunc: 0, euler: DEFAULT_EULER_DEPTH } }
    }

    /// Adds class prime counts for `ctx` up to degree `trunc`.
    pub fn with_modulus(mut self, ctx: &std::sync::Arc<ModulusCtx>, trunc: usize) -> Result<Self> {
        ensure!(ctx.field().q() == self.counts.q(), Precondition, "modulus lives over a different field");
        self.classes = Some(ClassPrimeCounts::build(ctx, trunc)?);
        self.depth.trunc = trunc;
        Ok(self)
    }

    pub fn q(&self) -> u32 {
        self.counts.q()
    }

    fn classes(&self) -> Result<&ClassPrimeCounts> {
        self.classes.as_ref().ok_or_else(|| crate::Error::Precondition("this main term needs a modulus".into()))
    }

    pub fn modulus(&self) -> Option<&ModulusCtx> {
        self.classes.as_ref().map(|c| c.ctx().as_ref())
    }
}

/// Π_{P|Q} over the distinct prime factors of the modulus.
fn local_product(ctx: &ModulusCtx, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let q = ctx.field().q() as f64;
    ctx.factorization().factors().iter().map(|(p, _)| f(q.powi(p.deg() as i32))).product()
}

/// Main term at degree n. For T4.1 the displayed prefactor is
/// Π_{P|Q}(1 − 1/|P|)^{−1}/Φ(Q); the derived one is Π_{P|Q}(1 − y/|P|)/Φ(Q),
/// from removing the primes of Q from the Euler product. For T5.5 and
/// T5.5-half the convention selects the H_1 variant, and T5.5-half displayed
/// carries q^{n+1} where the simple pole gives q^n.
pub fn main_term(theorem: MainTheorem, n: u64, y: Complex64, conv: Convention, actx: &AsymptoticContext) -> Result<MainTerm> {
    ensure!(n >= 2, Precondition, "main terms need n ≥ 2, got {n}");
    let q = actx.q() as f64;
    let qn = q.powi(n as i32);
    let nf = n as f64;
    match theorem {
        MainTheorem::T33 | MainTheorem::T41 => {
            let rg = recip_gamma(y)?;
            if rg.is_zero() {
                return Ok(MainTerm { value: Complex64::zero(), tail: 0.0, degenerate: true });
            }
            let (c, c_tail) = euler_constant_c(y, &actx.counts, actx.depth.euler)?;
            let scale = kappa(y, n)? * rg * qn * Complex64::new(nf, 0.0).powc(y - 1.0);
            let mut value = c * scale;
            let mut tail = c_tail * scale.norm();
            if theorem == MainTheorem::T41 {
                let ctx = actx.classes()?.ctx();
                let pre = match conv {
                    Convention::Displayed => local_product(ctx, |norm| Complex64::new(1.0 / (1.0 - 1.0 / norm), 0.0)),
                    Convention::Derived => local_product(ctx, |norm| Complex64::one() - y / norm),
                } / ctx.phi() as f64;
                value *= pre;
                tail *= pre.norm();
            }
            Ok(MainTerm { value, tail, degenerate: false })
        }
        MainTheorem::T55 => {
            ensure!(y.re < 0.5, Precondition, "the branch-point main term needs Re y < 1/2, got {y}");
            let rg = recip_gamma(2.0 * y)?;
            if rg.is_zero() {
                return Ok(MainTerm { value: Complex64::zero(), tail: 0.0, degenerate: true });
            }
            let (h1, h1_tail) = h1_at_inverse_q(actx.classes()?, &actx.counts, y, conv, actx.depth)?;
            let scale = kappa(2.0 * y, n)? * rg * qn * Complex64::new(nf, 0.0).powc(2.0 * y - 1.0);
            Ok(MainTerm { value: h1 * scale, tail: h1_tail * scale.norm(), degenerate: false })
        }
        MainTheorem::T55Half => {
            let half = Complex64::new(0.5, 0.0);
            let (h1, h1_tail) = h1_at_inverse_q(actx.classes()?, &actx.counts, half, conv, actx.depth)?;
            let scale = match conv {
                Convention::Displayed => qn * q,
                Convention::Derived => qn,
            };
            Ok(MainTerm { value: h1 * scale, tail: h1_tail * scale, degenerate: false })
        }
    }
}

/// The finite sum Σ_{r=1}^{t} c_r L^{t−r}/(t−r)! · q^n/n with L = log n
/// (T3.4, T4.2) or 2 log n (T5.6). T4.2 takes the A_r of T3.4 and applies the
/// modulus prefactor of the chosen convention; the derived prefactor is the
/// polynomial Π_{P|Q}(1 − y/|P|), which mixes the coefficients.
pub fn predicted_count(
    theorem: CountTheorem,
    n: u64,
    t: usize,
    coeffs: &CauchyCoeffs,
    q: u32,
    modulus: Option<&ModulusCtx>,
    conv: Convention,
) -> Result<f64> {
    ensure!(n >= 3, Precondition, "predictions need n ≥ 3, got {n}");
    ensure!(t >= 1, Precondition, "predictions need t ≥ 1");
    ensure!(t <= coeffs.r_max(), Precondition, "t = {t} exceeds the {} available coefficients", coeffs.r_max());
    let nf = n as f64;
    let log_n = match theorem {
        CountTheorem::T56 => 2.0 * nf.ln(),
        _ => nf.ln(),
    };
    let mut pre = 1.0;
    let mut cs = coeffs.clone();
    if theorem == CountTheorem::T42 {
        let ctx = modulus.ok_or_else(|| crate::Error::Precondition("the residue-class count needs a modulus".into()))?;
        ensure!(ctx.field().q() == q, Precondition, "modulus lives over a different field");
        pre /= ctx.phi() as f64;
        match conv {
            Convention::Displayed => pre *= local_product(ctx, |norm| Complex64::new(1.0 / (1.0 - 1.0 / norm), 0.0)).re,
            Convention::Derived => {
                let mut poly = vec![Complex64::one()];
                let qf = q as f64;
                for (p, _) in ctx.factorization().factors() {
                    let c = -1.0 / qf.powi(p.deg() as i32);
                    let mut next = vec![Complex64::zero(); poly.len() + 1];
                    for (i, a) in poly.iter().enumerate() {
                        next[i] += a;
                        next[i + 1] += a * c;
                    }
                    poly = next;
                }
                cs = cs.times_polynomial(&poly);
            }
        }
    }
    let mut sum = 0.0;
    let mut fact = 1.0;
    // r runs down from t so that (t−r)! builds up incrementally
    for (k, r) in (1..=t).rev().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        sum += cs.coeff(r).re * log_n.powi(k as i32) / fact;
    }
    Ok(pre * (q as f64).powi(n as i32) / nf * sum)
}
