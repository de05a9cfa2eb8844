//! Divisors of f in residue classes modulo Q: σ_a(f,χ), τ(f;h,Q), the
//! variance 𝕍[τ(f;∘,Q)] by two routes, enumeration sums, the generating
//! series that predicts them, and the rational identity for the local factors.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::character::{characters, l_weighted_series, ClassPrimeCounts, CycloSum, DirichletChar, ModulusCtx};
use crate::error::{ensure, Result};
use crate::factor::{factorize, Factorization};
use crate::irreducible::IrreducibleTable;
use crate::poly::{enumerate_monic, MonicPoly, Poly};
use crate::series::{ComplexSeries, OmegaCountTable};

/// Largest |a| accepted by [`sigma_a_chi`].
pub const MAX_SHIFT: i32 = 3;

/// σ_0(f,χ) = Σ_{d|f} χ(d) as an exact element of Z[ζ_E].
pub fn sigma0_exact(fac: &Factorization, chi: &DirichletChar) -> CycloSum {
    let ctx = chi.ctx();
    let mut s = CycloSum::zero(ctx.exponent());
    for (id, count) in class_counts(fac, ctx).into_iter().enumerate() {
        if count > 0 {
            s.add_exponent(chi.unit_exponent(id as u32), count as i64);
        }
    }
    s
}

/// σ_a(f,χ) = Σ_{d|f} χ(d)|d|^a.
pub fn sigma_a_chi(fac: &Factorization, chi: &DirichletChar, a: i32) -> Result<Complex64> {
    ensure!(a.abs() <= MAX_SHIFT, Precondition, "|a| = {} exceeds {MAX_SHIFT}", a.abs());
    if a == 0 {
        return Ok(sigma0_exact(fac, chi).to_complex());
    }
    let k = chi.ctx().field();
    let q = k.q() as f64;
    Ok(fac.divisors(k).map(|d| chi.eval(&d).to_complex() * q.powi(a * d.deg() as i32)).sum())
}

/// Number of divisors of f in each unit class (indexed by unit id); divisors
/// sharing a factor with Q are dropped.
fn class_counts(fac: &Factorization, ctx: &ModulusCtx) -> Vec<u64> {
    let mut counts = vec![0u64; ctx.phi() as usize];
    let one = ctx.unit_id(&Poly::one()).expect("1 is a unit");
    // only primes coprime to Q contribute; each divisor is Π P_i^{a_i}
    let units: Vec<(u32, u32)> =
        fac.factors().iter().filter_map(|(p, e)| ctx.unit_id(p.as_poly()).map(|id| (id, *e))).collect();
    let mut ids = vec![one];
    for (id, e) in units {
        let mut next = Vec::with_capacity(ids.len() * (e as usize + 1));
        for &base in &ids {
            let mut cur = base;
            next.push(cur);
            for _ in 0..e {
                cur = ctx.unit_mul(cur, id);
                next.push(cur);
            }
        }
        ids = next;
    }
    for id in ids {
        counts[id as usize] += 1;
    }
    counts
}

/// τ(f;h,Q) for every reduced residue h and τ(f;Q).
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorProfile {
    pub f: MonicPoly,
    /// indexed by unit id of the modulus context
    pub per_class: Vec<u64>,
    pub tau_coprime: u64,
}

impl DivisorProfile {
    /// (residue, count) pairs in canonical residue order, zero counts included.
    pub fn entries(&self, ctx: &ModulusCtx) -> Vec<(Poly, u64)> {
        let mut v: Vec<(Poly, u64)> = self.per_class.iter().enumerate().map(|(id, &c)| (ctx.unit_residue(id as u32), c)).collect();
        v.sort();
        v
    }
}

pub fn divisor_profile(fac: &Factorization, ctx: &ModulusCtx) -> DivisorProfile {
    let per_class = class_counts(fac, ctx);
    let tau_coprime = per_class.iter().sum();
    DivisorProfile { f: fac.product(ctx.field()), per_class, tau_coprime }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceRecord {
    pub f: MonicPoly,
    pub variance_direct: BigRational,
    pub variance_character: Complex64,
    pub agreement: f64,
}

/// Tolerance between the two variance routes.
pub const VARIANCE_TOL: f64 = 1e-9;

/// 𝕍[τ(f;∘,Q)] = (1/Φ)Σ_h (τ_h − τ/Φ)² exactly, and through characters as
/// (1/Φ²)Σ_{χ≠χ_0} σ_0(f,χ)σ_0(f,χ̄).
pub fn variance(fac: &Factorization, ctx: &Arc<ModulusCtx>) -> Result<VarianceRecord> {
    let counts = class_counts(fac, ctx);
    let phi = ctx.phi() as usize;
    let mean = BigRational::new(counts.iter().sum::<u64>().into(), BigInt::from(phi));
    let variance_direct = counts
        .iter()
        .map(|&c| {
            let d = BigRational::from_integer(c.into()) - &mean;
            &d * &d
        })
        .sum::<BigRational>()
        / BigRational::from_integer(phi.into());
    let mut acc = Complex64::zero();
    for chi in characters(ctx).skip(1) {
        let mut s = CycloSum::zero(ctx.exponent());
        for (id, &c) in counts.iter().enumerate() {
            if c > 0 {
                s.add_exponent(chi.unit_exponent(id as u32), c as i64);
            }
        }
        let conj = s.conj();
        acc += s.to_complex() * conj.to_complex();
    }
    let variance_character = acc / (phi * phi) as f64;
    let direct_f = crate::series::rational_to_f64(&variance_direct);
    let agreement = (variance_character - direct_f).norm();
    ensure!(variance_direct >= BigRational::zero(), Internal, "negative variance");
    ensure!(agreement <= VARIANCE_TOL, Internal, "variance routes disagree by {agreement:e}");
    Ok(VarianceRecord { f: fac.product(ctx.field()), variance_direct, variance_character, agreement })
}

/// For each Ω = t, Σ_{f ∈ A_n, Ω(f)=t} Φ²·𝕍[τ(f;∘,Q)], by enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct VarianceSums {
    pub n: usize,
    pub phi: u64,
    pub by_omega: Vec<BigInt>,
}

impl VarianceSums {
    /// Σ_f y^{Ω(f)} 𝕍 for rational y.
    pub fn weighted_exact(&self, y: &BigRational) -> BigRational {
        let num = self
            .by_omega
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * y + BigRational::from_integer(c.clone()));
        num / BigRational::from_integer(BigInt::from(self.phi * self.phi))
    }

    pub fn weighted_complex(&self, y: Complex64) -> Complex64 {
        let num = self.by_omega.iter().rev().fold(Complex64::zero(), |acc, c| acc * y + crate::series::rational_to_f64(&BigRational::from_integer(c.clone())));
        num / (self.phi * self.phi) as f64
    }

    /// Σ_f 𝕍 (y = 1).
    pub fn total(&self) -> BigRational {
        self.weighted_exact(&BigRational::one())
    }
}

/// Enumerates A_n; fails when q^n exceeds `budget`.
pub fn variance_sums(n: usize, ctx: &ModulusCtx, table: &IrreducibleTable, budget: u64) -> Result<VarianceSums> {
    let q = ctx.field().q() as u64;
    let size = q.checked_pow(n as u32).filter(|&s| s <= budget);
    ensure!(size.is_some(), Resource, "enumerating {q}^{n} polynomials exceeds the budget {budget}");
    let mut by_omega = vec![BigInt::zero(); n + 1];
    // the numerator stays below Φ·τ² ≤ Φ·2^{2n}, so i128 per class of Ω is safe
    let mut acc = vec![0i128; n + 1];
    for f in enumerate_monic(ctx.field(), n) {
        let fac = factorize(&f, table)?;
        let counts = class_counts(&fac, ctx);
        // Φ²·𝕍 = Φ Σ_h τ_h² − τ², an integer
        let phi = counts.len() as i128;
        let sq: i128 = counts.iter().map(|&c| c as i128 * c as i128).sum();
        let tau: i128 = counts.iter().map(|&c| c as i128).sum();
        acc[fac.omega() as usize] += phi * sq - tau * tau;
    }
    for (slot, v) in by_omega.iter_mut().zip(acc) {
        *slot = BigInt::from(v);
    }
    Ok(VarianceSums { n, phi: ctx.phi(), by_omega })
}

/// Σ_{f ∈ A_n} 𝕍[τ(f;∘,Q)], exact.
pub fn sum_variance_exact(n: usize, ctx: &ModulusCtx, table: &IrreducibleTable, budget: u64) -> Result<BigRational> {
    Ok(variance_sums(n, ctx, table, budget)?.total())
}

/// Which weight the ζ(u²,·) denominator carries in the variance series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DenominatorWeight {
    /// ζ(u², y²): what the local factors force.
    YSquared,
    /// ζ(u², y): as displayed in the source statement.
    Y,
}

/// ĝ_Q(u) = Π_{P|Q} (1 + y u^{deg P})^{−1}.
pub fn g_hat_series(ctx: &ModulusCtx, y: Complex64, trunc: usize) -> ComplexSeries {
    let mut s = vec![Complex64::zero(); trunc + 1];
    s[0] = Complex64::one();
    for (p, _) in ctx.factorization().factors() {
        let d = p.deg();
        for n in d..=trunc {
            let prev = s[n - d];
            s[n] -= y * prev;
        }
    }
    ComplexSeries::new(s)
}

/// Σ_{χ≠χ_0} 𝓛(u,χ,y)𝓛(u,χ̄,y).
pub fn character_pair_sum(classes: &ClassPrimeCounts, y: Complex64, trunc: usize) -> Result<ComplexSeries> {
    let ctx = classes.ctx();
    let mut acc = ComplexSeries::zero(trunc);
    for chi in characters(ctx).skip(1) {
        let a = l_weighted_series(&chi, y, classes, trunc)?;
        let b = l_weighted_series(&chi.conj(), y, classes, trunc)?;
        acc = acc.add(&a.mul(&b));
    }
    Ok(acc)
}

/// ĝ_Q(u)/Φ² · ζ(u,y)²/ζ(u²,w) · Σ_{χ≠χ_0} 𝓛(u,χ,y)𝓛(u,χ̄,y) with w = y² or
/// w = y. The u^n coefficient predicts Σ_{f∈A_n} y^{Ω(f)} 𝕍[τ(f;∘,Q)] when
/// w = y².
pub fn weighted_variance_series(
    classes: &ClassPrimeCounts,
    tbl: &OmegaCountTable,
    y: Complex64,
    trunc: usize,
    denom: DenominatorWeight,
) -> Result<ComplexSeries> {
    let ctx = classes.ctx();
    ensure!(tbl.q() == ctx.field().q(), Precondition, "Ω table and modulus live over different fields");
    ensure!(trunc <= tbl.n_max() && trunc <= classes.max_deg(), Precondition, "trunc {trunc} exceeds the available tables");
    let phi = ctx.phi() as f64;
    if ctx.phi() == 1 {
        return Ok(ComplexSeries::zero(trunc));
    }
    let zeta = tbl.zeta_series(y, trunc)?;
    let w = match denom {
        DenominatorWeight::YSquared => y * y,
        DenominatorWeight::Y => y,
    };
    let zeta2 = tbl.zeta_series(w, trunc)?.substitute_power(2);
    let prefactor = g_hat_series(ctx, y, trunc).mul(&zeta).mul(&zeta).mul(&zeta2.inverse()?);
    Ok(prefactor.mul(&character_pair_sum(classes, y, trunc)?).scale(Complex64::new(1.0 / (phi * phi), 0.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityRow {
    pub n: usize,
    pub enumerated: Complex64,
    pub series: Complex64,
    pub abs_diff: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
    pub holds: bool,
}

/// Compares Σ_{f∈A_n} y^{Ω(f)} σ_a(f,χ_1) σ_b(f,χ_2) against the u^n
/// coefficient of ζ(u,y)𝓛(q^a u,χ_1,y)𝓛(q^b u,χ_2,y)𝓛(q^{a+b}u,χ_1χ_2,y) /
/// 𝓛(q^{a+b}u²,χ_1χ_2,y²) for n ≤ n_check. Tolerance is `rel_tol` times
/// q^{n(1+max(a,0)+max(b,0))}.
#[allow(clippy::too_many_arguments)]
pub fn general_sigma_identity_check(
    a: i32,
    b: i32,
    chi1: &DirichletChar,
    chi2: &DirichletChar,
    y: Complex64,
    n_check: usize,
    classes: &ClassPrimeCounts,
    tbl: &OmegaCountTable,
    table: &IrreducibleTable,
    rel_tol: f64,
) -> Result<IdentityReport> {
    ensure!(a.abs() <= MAX_SHIFT && b.abs() <= MAX_SHIFT, Precondition, "shifts must satisfy |a|, |b| ≤ {MAX_SHIFT}");
    ensure!(n_check <= tbl.n_max() && n_check <= classes.max_deg(), Precondition, "n_check exceeds the tables");
    ensure!(Arc::ptr_eq(chi1.ctx(), classes.ctx()) && Arc::ptr_eq(chi2.ctx(), classes.ctx()), Precondition, "moduli differ");
    let k = classes.ctx().field();
    let q = k.q() as f64;
    let chi12 = chi1.mul(chi2);
    let qa = Complex64::new(q.powi(a), 0.0);
    let qb = Complex64::new(q.powi(b), 0.0);
    let qab = Complex64::new(q.powi(a + b), 0.0);
    let t = n_check;
    let denom = l_weighted_series(&chi12, y * y, classes, t)?.scale_var(qab).substitute_power(2);
    let series = tbl
        .zeta_series(y, t)?
        .mul(&l_weighted_series(chi1, y, classes, t)?.scale_var(qa))
        .mul(&l_weighted_series(chi2, y, classes, t)?.scale_var(qb))
        .mul(&l_weighted_series(&chi12, y, classes, t)?.scale_var(qab))
        .mul(&denom.inverse()?);
    let mut rows = Vec::new();
    for n in 0..=n_check {
        let mut brute = Complex64::zero();
        for f in enumerate_monic(k, n) {
            let fac = factorize(&f, table)?;
            brute += y.powu(fac.omega()) * sigma_a_chi(&fac, chi1, a)? * sigma_a_chi(&fac, chi2, b)?;
        }
        let scale = q.powi(n as i32 * (1 + a.max(0) + b.max(0)));
        let s = series.coeff(n);
        let abs_diff = (s - brute).norm();
        rows.push(IdentityRow { n, enumerated: brute, series: s, abs_diff, tol: rel_tol * scale });
    }
    let holds = rows.iter().all(|r| r.abs_diff <= r.tol);
    Ok(IdentityReport { rows, holds })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HallReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub diff: f64,
    /// bound on the omitted terms v > v_max
    pub tail: f64,
}

/// Σ_v u^v (Σ_{j≤v} p^j)(Σ_{j≤v} q^j) against
/// (1 − pqu²)/((1 − upq)(1 − up)(1 − uq)(1 − u)).
pub fn hall_rational_identity(u: Complex64, p: Complex64, q: Complex64, v_max: usize) -> Result<HallReport> {
    let r = u.norm() * p.norm().max(1.0) * q.norm().max(1.0);
    ensure!(r < 1.0, Precondition, "|u|·max(1,|p|)·max(1,|q|) = {r} is not below 1");
    let mut lhs = Complex64::zero();
    let (mut sp, mut sq) = (Complex64::zero(), Complex64::zero());
    let (mut pj, mut qj, mut uv) = (Complex64::one(), Complex64::one(), Complex64::one());
    for _ in 0..=v_max {
        sp += pj;
        sq += qj;
        lhs += uv * sp * sq;
        pj *= p;
        qj *= q;
        uv *= u;
    }
    let one = Complex64::one();
    let rhs = (one - p * q * u * u) / ((one - u * p * q) * (one - u * p) * (one - u * q) * (one - u));
    // |term v| ≤ (v+1)² r^v; Σ_{v>V} (v+1)² r^v ≤ (V+2)² r^{V+1}/(1−r)³
    let vm = v_max as f64;
    let tail = (vm + 2.0).powi(2) * r.powf(vm + 1.0) / (1.0 - r).powi(3);
    Ok(HallReport { lhs, rhs, diff: (lhs - rhs).norm(), tail })
}

/// Exact sign check used by reports: a rational is nonnegative.
pub fn is_nonnegative(r: &BigRational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::CharValue;
    use crate::field::FieldSpec;
    use crate::irreducible::PrimeCounts;
    use proptest::prelude::*;

    fn setup(modulus: &str) -> (Arc<ModulusCtx>, IrreducibleTable) {
        let k = FieldSpec::prime(2).unwrap();
        let c = Arc::new(ModulusCtx::new(&k, &MonicPoly::parse(modulus, &k).unwrap()).unwrap());
        (c, IrreducibleTable::build(&k, 8).unwrap())
    }

    fn fac(s: &str, t: &IrreducibleTable) -> Factorization {
        factorize(&MonicPoly::parse(s, t.field()).unwrap(), t).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let (c, t) = setup("1,1,1");
        let chi = characters(&c).find(|x| x.eval(&MonicPoly::t()) == CharValue::root(1, 3)).unwrap();
        let s = sigma0_exact(&fac("0,1,1", &t), &chi);
        assert!(s.equals_integer(1, c.cyclotomic()));
        assert!(sigma0_exact(&Factorization::one(), &chi).equals_integer(1, c.cyclotomic()));
        let chi0 = characters(&c).next().unwrap();
        assert!((sigma_a_chi(&fac("0,0,1,1", &t), &chi0, 0).unwrap() - 6.0).norm() < 1e-12);
        // σ_1 with χ_0 and f = T: 1 + |T|
        assert!((sigma_a_chi(&fac("0,1", &t), &chi0, 1).unwrap() - 3.0).norm() < 1e-12);
    }

    #[test]
    fn profile_examples() {
        let (c, t) = setup("1,1,1");
        let p = divisor_profile(&fac("0,1,1", &t), &c);
        let e = p.entries(&c);
        let k = c.field();
        let named: Vec<(String, u64)> = e.iter().map(|(r, n)| (r.pretty(k), *n)).collect();
        assert_eq!(named, [("1".to_string(), 2), ("T".to_string(), 1), ("T+1".to_string(), 1)]);
        assert_eq!(p.tau_coprime, 4);
        let one = divisor_profile(&Factorization::one(), &c);
        assert_eq!(one.tau_coprime, 1);
        let (ct, _) = setup("0,1");
        assert_eq!(divisor_profile(&fac("0,1", &t), &ct).tau_coprime, 1);
    }

    #[test]
    fn variance_examples() {
        let (c, t) = setup("1,1,1");
        let nine = BigRational::new(2.into(), 9.into());
        assert_eq!(variance(&Factorization::one(), &c).unwrap().variance_direct, nine);
        assert_eq!(variance(&fac("0,1,1", &t), &c).unwrap().variance_direct, nine);
        let (ct, _) = setup("0,1");
        assert!(variance(&fac("1,1,1", &t), &ct).unwrap().variance_direct.is_zero());
        assert_eq!(sum_variance_exact(0, &c, &t, 1 << 20).unwrap(), nine);
        assert!(sum_variance_exact(6, &ct, &t, 1 << 20).unwrap().is_zero());
        assert!(sum_variance_exact(12, &c, &t, 100).is_err());
    }

    #[test]
    fn series_matches_enumeration() {
        for m in ["1,1,1", "0,1,1", "1,1,0,1"] {
            let (c, t) = setup(m);
            let classes = ClassPrimeCounts::build(&c, 8).unwrap();
            let tbl = OmegaCountTable::from_prime_counts(&PrimeCounts::mobius(2, 8), 8).unwrap();
            for y in [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.2)] {
                let s = weighted_variance_series(&classes, &tbl, y, 8, DenominatorWeight::YSquared).unwrap();
                for n in 0..=8 {
                    let exact = variance_sums(n, &c, &t, 1 << 20).unwrap().weighted_complex(y);
                    assert!((s.coeff(n) - exact).norm() < 1e-8 * 2f64.powi(n as i32), "Q={m} y={y} n={n}");
                }
            }
        }
    }

    #[test]
    fn linear_denominator_weight_disagrees_away_from_one() {
        let (c, t) = setup("1,1,1");
        let classes = ClassPrimeCounts::build(&c, 8).unwrap();
        let tbl = OmegaCountTable::from_prime_counts(&PrimeCounts::mobius(2, 8), 8).unwrap();
        let gap = |y: Complex64, n: usize| {
            let s = weighted_variance_series(&classes, &tbl, y, 8, DenominatorWeight::Y).unwrap();
            (s.coeff(n) - variance_sums(n, &c, &t, 1 << 20).unwrap().weighted_complex(y)).norm()
        };
        assert!(gap(Complex64::new(1.0, 0.0), 6) < 1e-9);
        assert!(gap(Complex64::new(0.5, 0.0), 6) > 1e-3);
    }

    #[test]
    fn general_identity_examples() {
        let (c, t) = setup("1,1,1");
        let classes = ClassPrimeCounts::build(&c, 6).unwrap();
        let tbl = OmegaCountTable::from_prime_counts(&PrimeCounts::mobius(2, 6), 6).unwrap();
        let chars: Vec<_> = characters(&c).collect();
        let r = general_sigma_identity_check(0, 0, &chars[1], &chars[1].conj(), Complex64::new(0.5, 0.0), 6, &classes, &tbl, &t, 1e-9).unwrap();
        assert!(r.holds, "{r:?}");
        let r = general_sigma_identity_check(1, -1, &chars[1], &chars[2], Complex64::new(0.3, 0.4), 6, &classes, &tbl, &t, 1e-9).unwrap();
        assert!(r.holds, "{r:?}");
        let r = general_sigma_identity_check(0, 0, &chars[0], &chars[1], Complex64::new(0.0, 0.0), 6, &classes, &tbl, &t, 1e-12).unwrap();
        assert!(r.holds && (r.rows[0].series - 1.0).norm() < 1e-15);
    }

    #[test]
    fn hall_examples() {
        let z = Complex64::zero();
        let u = Complex64::new(0.3, 0.1);
        let r = hall_rational_identity(u, z, z, 200).unwrap();
        assert!((r.rhs - (Complex64::one() - u).inv()).norm() < 1e-14 && r.diff < 1e-12);
        let one = Complex64::one();
        let r = hall_rational_identity(u, one, one, 200).unwrap();
        assert!((r.rhs - (one + u) / ((one - u) * (one - u) * (one - u))).norm() < 1e-12 && r.diff < 1e-12);
        assert!(hall_rational_identity(Complex64::new(0.6, 0.0), Complex64::new(2.0, 0.0), one, 10).is_err());
    }

    proptest! {
        #[test]
        fn sigma_is_multiplicative_on_coprime_parts(i in 0u64..64, j in 0u64..32, which in 0usize..7) {
            let (c, t) = setup("1,1,0,1");
            let k = c.field().clone();
            let f = MonicPoly::from_lower_index(2, 6, i);
            let g = MonicPoly::from_lower_index(2, 5, j);
            prop_assume!(f.as_poly().gcd(g.as_poly(), &k) == Poly::one());
            let chi = characters(&c).nth(which).unwrap();
            let fg = factorize(&f.mul(&g, &k), &t).unwrap();
            let lhs = sigma0_exact(&fg, &chi);
            let rhs = sigma0_exact(&factorize(&f, &t).unwrap(), &chi).mul(&sigma0_exact(&factorize(&g, &t).unwrap(), &chi));
            prop_assert_eq!(lhs.reduce(c.cyclotomic()), rhs.reduce(c.cyclotomic()));
        }

        #[test]
        fn class_totals_and_nonnegativity(i in 0u64..256) {
            let (c, t) = setup("0,1,1");
            let f = factorize(&MonicPoly::from_lower_index(2, 8, i), &t).unwrap();
            let p = divisor_profile(&f, &c);
            prop_assert_eq!(p.per_class.iter().sum::<u64>(), p.tau_coprime);
            let v = variance(&f, &c).unwrap();
            prop_assert!(is_nonnegative(&v.variance_direct));
            prop_assert_eq!(v.variance_direct.is_zero(), p.per_class.iter().all(|&x| x == p.per_class[0]));
        }
    }
}
