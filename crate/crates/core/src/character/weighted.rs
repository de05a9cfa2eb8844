//! The Ω-weighted series 𝓛(u,χ,y) = Π_P (1 − yχ(P)u^{deg P})^{−1}.

use num_complex::Complex64;

use super::classes::ClassPrimeCounts;
use super::cyclotomic::root_of_unity;
use super::dirichlet::DirichletChar;
use crate::error::{ensure, Result};
use crate::irreducible::IrreducibleTable;
use crate::series::ComplexSeries;

/// 𝓛(u,χ,y) from class-resolved prime counts:
/// log 𝓛 = Σ_{d,h} π(d;h) Σ_k (yχ(h))^k u^{dk}/k. Works to any degree the
/// class table reaches.
pub fn l_weighted_series(chi: &DirichletChar, y: Complex64, classes: &ClassPrimeCounts, trunc: usize) -> Result<ComplexSeries> {
    ensure!(trunc <= classes.max_deg(), Precondition, "class counts stop at degree {}, need {trunc}", classes.max_deg());
    ensure!(
        std::sync::Arc::ptr_eq(chi.ctx(), classes.ctx()),
        Precondition,
        "character and class counts belong to different moduli"
    );
    let big_e = chi.ctx().exponent();
    let expo = chi.unit_exponents();
    let mut log = vec![Complex64::new(0.0, 0.0); trunc + 1];
    for d in 1..=trunc {
        // exact weight of each exponent class before going to floating point
        let mut w = vec![0i128; big_e as usize];
        for (id, &c) in classes.row(d).iter().enumerate() {
            w[expo[id] as usize] += c;
        }
        let mut yk = Complex64::new(1.0, 0.0);
        for k in 1..=trunc / d {
            yk *= y;
            let s: Complex64 = w
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(e, &c)| root_of_unity((e as u64 * k as u64) % big_e, big_e) * c as f64)
                .sum();
            log[d * k] += s * yk / k as f64;
        }
    }
    Ok(ComplexSeries::new(log).exp())
}

/// 𝓛(u,χ,y) as the literal product over the irreducibles of a sieved table.
pub fn l_weighted_series_direct(chi: &DirichletChar, y: Complex64, table: &IrreducibleTable, trunc: usize) -> Result<ComplexSeries> {
    ensure!(table.max_deg() >= trunc, Precondition, "table stops at degree {}, need {trunc}", table.max_deg());
    let mut s = vec![Complex64::new(0.0, 0.0); trunc + 1];
    s[0] = Complex64::new(1.0, 0.0);
    for p in table.iter().filter(|p| p.deg() <= trunc) {
        let a = y * chi.eval(p).to_complex();
        if a.norm() == 0.0 {
            continue;
        }
        let d = p.deg();
        // multiply by 1/(1 − a u^d) in place
        for n in d..=trunc {
            let prev = s[n - d];
            s[n] += a * prev;
        }
    }
    Ok(ComplexSeries::new(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::dirichlet::characters;
    use crate::character::lpoly::l_polynomial;
    use crate::character::modulus::ModulusCtx;
    use crate::factor::factorize;
    use crate::field::FieldSpec;
    use crate::poly::{enumerate_monic, MonicPoly};
    use std::sync::Arc;

    fn setup(q: u32, modulus: &str, deg: usize) -> (Arc<ModulusCtx>, ClassPrimeCounts, IrreducibleTable) {
        let k = FieldSpec::prime(q).unwrap();
        let c = Arc::new(ModulusCtx::new(&k, &MonicPoly::parse(modulus, &k).unwrap()).unwrap());
        let cc = ClassPrimeCounts::build(&c, deg).unwrap();
        let t = IrreducibleTable::build(&k, deg).unwrap();
        (c, cc, t)
    }

    #[test]
    fn routes_agree_and_match_brute_force() {
        let (c, cc, t) = setup(2, "1,1,0,1", 8);
        let y = Complex64::new(0.3, 0.2);
        for chi in characters(&c) {
            let a = l_weighted_series(&chi, y, &cc, 8).unwrap();
            let b = l_weighted_series_direct(&chi, y, &t, 8).unwrap();
            for n in 0..=6 {
                let brute: Complex64 = enumerate_monic(c.field(), n)
                    .map(|f| chi.eval(&f).to_complex() * y.powu(factorize(&f, &t).unwrap().omega()))
                    .sum();
                let scale = 1e-9 * 2f64.powi(n as i32);
                assert!((a.coeff(n) - brute).norm() < scale, "{} n={n}", chi.label());
                assert!((b.coeff(n) - brute).norm() < scale);
            }
            for n in 0..=8 {
                assert!((a.coeff(n) - b.coeff(n)).norm() < 1e-9 * 2f64.powi(n as i32));
            }
        }
    }

    #[test]
    fn y_one_recovers_l_polynomial() {
        let (c, cc, _) = setup(3, "1,0,1,1", 10);
        for chi in characters(&c).skip(1) {
            let lp = l_polynomial(&chi).unwrap();
            let s = l_weighted_series(&chi, Complex64::new(1.0, 0.0), &cc, 10).unwrap();
            for n in 0..=10 {
                let want = lp.coeffs().get(n).copied().unwrap_or_default();
                assert!((s.coeff(n) - want).norm() < 1e-10 * 3f64.powi(n as i32), "n={n}");
            }
        }
    }

    #[test]
    fn principal_mod_t_counts_coprime() {
        let (c, cc, _) = setup(2, "0,1", 12);
        let chi0 = characters(&c).next().unwrap();
        let s = l_weighted_series(&chi0, Complex64::new(1.0, 0.0), &cc, 12).unwrap();
        assert!((s.coeff(0) - 1.0).norm() < 1e-15);
        for n in 1..=12 {
            assert!((s.coeff(n) - 2f64.powi(n as i32 - 1)).norm() < 1e-9);
        }
    }
}
