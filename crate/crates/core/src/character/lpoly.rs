//! L-polynomials 𝓛(u,χ) = Σ_f χ(f) u^{deg f}, the principal-character
//! identity, special values at u = 1/q and root-modulus certification.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::classes::ClassPrimeCounts;
use super::cyclotomic::CycloSum;
use super::dirichlet::DirichletChar;
use super::modulus::ModulusCtx;
use super::weighted::l_weighted_series;
use crate::error::{ensure, Error, Result};
use crate::poly::enumerate_monic;
use crate::roots::{merge_clusters, poly_roots};
use crate::series::eval_measured;

/// Enumeration limit for the direct side of [`l_principal_check`].
const PRINCIPAL_ENUM_LIMIT: u64 = 1 << 16;

/// 𝓛(u,χ) for a non-principal χ, with exact cyclotomic coefficients.
#[derive(Clone, Debug)]
pub struct LPoly {
    chi: DirichletChar,
    exact: Vec<CycloSum>,
    coeffs: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    Unit,
    SqrtQ,
}

/// An inverse root α = 1/u of 𝓛 with its modulus band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedRoot {
    pub alpha: Complex64,
    pub class: RootClass,
}

/// Coefficients Σ_{f ∈ A_n} χ(f) for n < deg Q; higher ones vanish for
/// non-principal χ because every residue class is hit equally often.
pub fn l_polynomial(chi: &DirichletChar) -> Result<LPoly> {
    ensure!(!chi.is_principal(), Precondition, "the principal character is covered by l_principal_check");
    let ctx = chi.ctx();
    let k = ctx.field();
    let phi_e = ctx.cyclotomic();
    let mut exact: Vec<CycloSum> = (0..ctx.deg())
        .map(|n| {
            let mut s = CycloSum::zero(ctx.exponent());
            for f in enumerate_monic(k, n) {
                s.add_value(chi.eval(&f), 1);
            }
            s
        })
        .collect();
    while exact.last().is_some_and(|s| s.is_zero(phi_e)) {
        exact.pop();
    }
    let coeffs = exact.iter().map(CycloSum::to_complex).collect();
    Ok(LPoly { chi: chi.clone(), exact, coeffs })
}

impl LPoly {
    pub fn chi(&self) -> &DirichletChar {
        &self.chi
    }

    pub fn exact(&self) -> &[CycloSum] {
        &self.exact
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Observed degree m(χ).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, u: Complex64) -> Complex64 {
        crate::roots::horner(&self.coeffs, u).0
    }

    pub fn eval_deriv(&self, u: Complex64) -> Complex64 {
        crate::roots::horner(&self.coeffs, u).1
    }

    /// α_i = 1/u_i over the roots u_i of 𝓛.
    pub fn inverse_roots(&self, tol: f64) -> Result<Vec<Complex64>> {
        Ok(poly_roots(&self.coeffs, tol.min(1e-9))?.into_iter().map(|u| u.inv()).collect())
    }

    /// [`grh_certify`] on this polynomial.
    pub fn certify(&self, tol: f64) -> Result<Vec<CertifiedRoot>> {
        grh_certify(self, tol)
    }
}

fn classify(alpha: Complex64, sqrt_q: f64, tol: f64) -> Option<RootClass> {
    let r = alpha.norm();
    if (r - 1.0).abs() <= tol {
        Some(RootClass::Unit)
    } else if (r - sqrt_q).abs() <= tol {
        Some(RootClass::SqrtQ)
    } else {
        None
    }
}

/// Every inverse root must have modulus 1 or √q within `tol`. Multiple roots
/// come back from the eigenvalue solver as clusters; a failing root set is
/// retried once with clusters replaced by their means.
pub fn grh_certify(lp: &LPoly, tol: f64) -> Result<Vec<CertifiedRoot>> {
    ensure!(!lp.chi.is_principal(), Precondition, "GRH certification applies to non-principal characters");
    let sqrt_q = (lp.chi.ctx().field().q() as f64).sqrt();
    let roots = poly_roots(&lp.coeffs, tol.min(1e-9))?;
    let attempt = |us: &[Complex64]| -> Option<Vec<CertifiedRoot>> {
        us.iter().map(|u| classify(u.inv(), sqrt_q, tol).map(|class| CertifiedRoot { alpha: u.inv(), class })).collect()
    };
    if let Some(ok) = attempt(&roots) {
        return Ok(ok);
    }
    if let Some(ok) = attempt(&merge_clusters(&roots, 1e-3)) {
        return Ok(ok);
    }
    let bad: Vec<f64> = roots.iter().map(|u| u.inv().norm()).filter(|r| classify(Complex64::new(*r, 0.0), sqrt_q, tol).is_none()).collect();
    Err(Error::Certification(format!(
        "{} mod {}: inverse root moduli {bad:?} are neither 1 nor sqrt(q) = {sqrt_q}",
        lp.chi.label(),
        lp.chi.ctx().modulus().to_text(lp.chi.ctx().field())
    )))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalRow {
    pub n: usize,
    /// #{f ∈ A_n : gcd(f, Q) = 1}
    pub coprime_count: BigInt,
    /// u^n coefficient of Π_{P|Q}(1 − u^{deg P}) / (1 − qu)
    pub identity_coeff: BigInt,
    /// whether the direct side came from enumeration
    pub enumerated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalCheck {
    pub rows: Vec<PrincipalRow>,
    pub holds: bool,
}

/// 𝓛(u,χ_0) = Π_{P|Q}(1 − u^{deg P})·ζ(u), coefficient by coefficient.
/// The direct side enumerates A_n while q^n is small and otherwise uses that
/// the q^n polynomials of degree n ≥ deg Q cover each residue q^{n − deg Q}
/// times.
pub fn l_principal_check(ctx: &Arc<ModulusCtx>, trunc: usize) -> Result<PrincipalCheck> {
    ensure!(trunc >= ctx.deg(), Precondition, "trunc {trunc} must be at least deg Q = {}", ctx.deg());
    let k = ctx.field();
    let q = BigInt::from(k.q());
    // Π_{P|Q} (1 − u^{deg P}), truncated
    let mut numer = vec![BigInt::zero(); trunc + 1];
    numer[0] = BigInt::one();
    for (p, _) in ctx.factorization().factors() {
        let d = p.deg();
        for n in (d..=trunc).rev() {
            let prev = numer[n - d].clone();
            numer[n] -= prev;
        }
    }
    let mut rows = Vec::with_capacity(trunc + 1);
    let mut acc = BigInt::zero();
    for n in 0..=trunc {
        acc = acc * &q + &numer[n];
        let size = (k.q() as u64).checked_pow(n as u32);
        let (coprime_count, enumerated) = match size {
            Some(s) if s <= PRINCIPAL_ENUM_LIMIT => {
                let c = enumerate_monic(k, n).filter(|f| ctx.unit_id(f.as_poly()).is_some()).count();
                (BigInt::from(c), true)
            }
            _ => {
                let c = if n >= ctx.deg() {
                    BigInt::from(ctx.phi()) * q.pow((n - ctx.deg()) as u32)
                } else {
                    return Err(Error::Resource(format!("cannot enumerate A_{n} over F_{}", k.q())));
                };
                (c, false)
            }
        };
        rows.push(PrincipalRow { n, coprime_count, identity_coeff: acc.clone(), enumerated });
    }
    let holds = rows.iter().all(|r| r.coprime_count == r.identity_coeff);
    Ok(PrincipalCheck { rows, holds })
}

/// L(1,χ) = 𝓛(1/q, χ, y) and the logarithmic derivative in s at s = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialValues {
    pub l_at_1: Complex64,
    pub logderiv_at_1: Complex64,
    pub tail: f64,
}

/// Special values at s = 1. For y = 1 the polynomial 𝓛(u,χ) is evaluated
/// exactly (no tail); otherwise the weighted series is summed to `trunc` and a
/// tail bound is attached. With 𝓛' the u-derivative,
/// L'(1)/L(1) = −(log q / q)·𝓛'(1/q)/𝓛(1/q).
pub fn l_special_values(chi: &DirichletChar, y: Complex64, classes: &ClassPrimeCounts, trunc: usize) -> Result<SpecialValues> {
    ensure!(!chi.is_principal(), Precondition, "special values are taken for non-principal characters");
    let q = chi.ctx().field().q() as f64;
    let u0 = Complex64::new(1.0 / q, 0.0);
    let (l, dl, tail) = if y == Complex64::one() {
        let lp = l_polynomial(chi)?;
        (lp.eval(u0), lp.eval_deriv(u0), 0.0)
    } else {
        let s = l_weighted_series(chi, y, classes, trunc)?;
        let (l, t1) = eval_measured(&s, u0)?;
        let (dl, t2) = eval_measured(&s.derivative(), u0)?;
        (l, dl, t1.max(t2))
    };
    if l.norm() <= 1e-12 {
        return Err(Error::Pole(format!("L(1, {}) vanishes; no log-derivative", chi.label())));
    }
    Ok(SpecialValues { l_at_1: l, logderiv_at_1: -(q.ln() / q) * dl / l, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::dirichlet::characters;
    use crate::field::FieldSpec;
    use crate::poly::MonicPoly;

    fn ctx(q: u32, modulus: &str) -> Arc<ModulusCtx> {
        let k = FieldSpec::prime(q).unwrap();
        Arc::new(ModulusCtx::new(&k, &MonicPoly::parse(modulus, &k).unwrap()).unwrap())
    }

    #[test]
    fn cubic_character_l_polynomial() {
        let c = ctx(2, "1,1,1");
        for chi in characters(&c).skip(1) {
            let lp = l_polynomial(&chi).unwrap();
            assert_eq!(lp.degree(), 1);
            assert!((lp.coeffs()[0] - 1.0).norm() < 1e-15);
            assert!((lp.coeffs()[1] + 1.0).norm() < 1e-15);
            let roots = grh_certify(&lp, 1e-9).unwrap();
            assert_eq!(roots.len(), 1);
            assert_eq!(roots[0].class, RootClass::Unit);
            let classes = ClassPrimeCounts::build(&c, 4).unwrap();
            let sv = l_special_values(&chi, Complex64::one(), &classes, 4).unwrap();
            assert!((sv.l_at_1 - 0.5).norm() < 1e-15);
            assert!((sv.logderiv_at_1 - 2f64.ln()).norm() < 1e-15);
        }
        assert!(l_polynomial(&characters(&c).next().unwrap()).is_err());
    }

    #[test]
    fn principal_identity_examples() {
        let c = ctx(2, "0,1");
        let chk = l_principal_check(&c, 20).unwrap();
        assert!(chk.holds);
        for r in &chk.rows[1..] {
            assert_eq!(r.coprime_count, BigInt::from(2u64.pow(r.n as u32 - 1)));
        }
        assert_eq!(chk.rows[0].identity_coeff, BigInt::one());
        let c = ctx(2, "0,1,1");
        let chk = l_principal_check(&c, 20).unwrap();
        assert!(chk.holds);
        assert_eq!(chk.rows[2].coprime_count, BigInt::one());
        assert!(l_principal_check(&c, 1).is_err());
    }

    #[test]
    fn degree_bound_and_grh_for_all_small_moduli() {
        for q in [2u32, 3] {
            let k = FieldSpec::prime(q).unwrap();
            for m in 1..=4 {
                for modulus in enumerate_monic(&k, m) {
                    let c = Arc::new(ModulusCtx::new(&k, &modulus).unwrap());
                    for chi in characters(&c).skip(1) {
                        let lp = l_polynomial(&chi).unwrap();
                        assert!(lp.degree() < m);
                        grh_certify(&lp, 1e-6).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn linear_modulus_gives_constant_l() {
        let c = ctx(3, "0,1");
        let chi = characters(&c).nth(1).unwrap();
        let lp = l_polynomial(&chi).unwrap();
        assert_eq!(lp.degree(), 0);
        let classes = ClassPrimeCounts::build(&c, 3).unwrap();
        let sv = l_special_values(&chi, Complex64::one(), &classes, 3).unwrap();
        assert!((sv.l_at_1 - 1.0).norm() < 1e-15 && sv.logderiv_at_1.norm() < 1e-15);
    }
}
