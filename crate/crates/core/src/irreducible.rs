//! Census of monic irreducible polynomials.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{ensure, Error, Result};
use crate::field::FieldSpec;
use crate::poly::{enumerate_monic, MonicPoly};

/// Default upper bound on the number of polynomials a sieve or an
/// enumeration may touch.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

pub fn mobius(mut n: u64) -> i64 {
    if n == 1 {
        return 1;
    }
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub fn divisors_of(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `(1/n) Σ_{d|n} μ(d) q^{n/d}`, the number of monic irreducibles of degree n.
pub fn mobius_count(q: u32, n: usize) -> BigUint {
    assert!(n >= 1);
    let mut acc = BigInt::zero();
    for d in divisors_of(n as u64) {
        let mu = mobius(d);
        if mu != 0 {
            acc += BigInt::from(mu) * BigInt::from(q).pow((n as u64 / d) as u32);
        }
    }
    let (quot, rem) = (acc.clone() / BigInt::from(n), acc % BigInt::from(n));
    assert!(rem.is_zero(), "Möbius sum not divisible by n");
    quot.to_biguint().expect("count is nonnegative")
}

/// Exact counts π(d) for 1 ≤ d ≤ max_deg, index 0 unused (zero).
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeCounts {
    q: u32,
    counts: Vec<BigUint>,
}

impl PrimeCounts {
    pub fn mobius(q: u32, max_deg: usize) -> Self {
        let mut counts = vec![BigUint::zero()];
        counts.extend((1..=max_deg).map(|d| mobius_count(q, d)));
        PrimeCounts { q, counts }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn max_deg(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, d: usize) -> &BigUint {
        &self.counts[d]
    }

    pub fn get_f64(&self, d: usize) -> f64 {
        self.counts[d].to_f64().expect("finite")
    }
}

/// Monic irreducibles of every degree up to `max_deg`, found by sieving.
#[derive(Clone, Debug)]
pub struct IrreducibleTable {
    field: FieldSpec,
    by_degree: Vec<Vec<MonicPoly>>,
}

impl IrreducibleTable {
    pub fn build(field: &FieldSpec, max_deg: usize) -> Result<Self> {
        Self::build_with_budget(field, max_deg, DEFAULT_BUDGET)
    }

    /// Sieves degree by degree: every product of a lower-degree irreducible with
    /// a monic cofactor is marked, survivors are irreducible. The resulting
    /// counts are checked against the Möbius formula.
    pub fn build_with_budget(field: &FieldSpec, max_deg: usize, budget: u64) -> Result<Self> {
        ensure!(max_deg >= 1, Precondition, "max_deg must be at least 1");
        let q = field.q();
        let size = (q as u64)
            .checked_pow(max_deg as u32)
            .filter(|&s| s <= budget)
            .ok_or_else(|| Error::Resource(format!("sieve of q^{max_deg} polynomials over F_{q} exceeds budget {budget}")))?;
        debug_assert!(size >= 1);
        let mut by_degree: Vec<Vec<MonicPoly>> = vec![vec![MonicPoly::one()]];
        for d in 1..=max_deg {
            let count = (q as u64).pow(d as u32) as usize;
            let mut composite = vec![false; count];
            for low in 1..=d / 2 {
                for p in &by_degree[low] {
                    for g in enumerate_monic(field, d - low) {
                        composite[p.mul(&g, field).lower_index(q) as usize] = true;
                    }
                }
            }
            let primes: Vec<MonicPoly> = composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| MonicPoly::from_lower_index(q, d, i as u64))
                .collect();
            by_degree.push(primes);
        }
        let table = IrreducibleTable { field: field.clone(), by_degree };
        table.check_against_mobius()?;
        Ok(table)
    }

    /// Exact equality of sieve counts with the Möbius formula for every degree.
    pub fn check_against_mobius(&self) -> Result<()> {
        for d in 1..=self.max_deg() {
            let expected = mobius_count(self.field.q(), d);
            let got = BigUint::from(self.by_degree[d].len());
            ensure!(got == expected, Internal, "sieve found {got} irreducibles of degree {d}, Möbius formula gives {expected}");
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn max_deg(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn of_degree(&self, d: usize) -> &[MonicPoly] {
        &self.by_degree[d]
    }

    /// π(d) as found by the sieve.
    pub fn count(&self, d: usize) -> usize {
        self.by_degree[d].len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MonicPoly> {
        self.by_degree[1..].iter().flatten()
    }

    pub fn prime_counts(&self) -> PrimeCounts {
        let mut counts = vec![BigUint::zero()];
        counts.extend((1..=self.max_deg()).map(|d| BigUint::from(self.count(d))));
        PrimeCounts { q: self.field.q(), counts }
    }

    /// Test hook: drops the last irreducible of degree `d` so that the Möbius
    /// cross-check trips.
    pub fn corrupt_for_testing(&mut self, d: usize) {
        self.by_degree[d].pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_q2() {
        let k = FieldSpec::prime(2).unwrap();
        let t = IrreducibleTable::build(&k, 4).unwrap();
        let counts: Vec<usize> = (1..=4).map(|d| t.count(d)).collect();
        assert_eq!(counts, [2, 1, 2, 3]);
        assert_eq!(mobius_count(2, 4), BigUint::from(3u32));
        assert_eq!(t.of_degree(2)[0].pretty(&k), "T^2+T+1");
    }

    #[test]
    fn census_q3() {
        let k = FieldSpec::prime(3).unwrap();
        let t = IrreducibleTable::build(&k, 2).unwrap();
        assert_eq!((t.count(1), t.count(2)), (3, 3));
    }

    #[test]
    fn linear_polys_are_irreducible() {
        for q in [2u64, 3, 4, 5, 7, 9] {
            let k = FieldSpec::with_order(q).unwrap();
            let t = IrreducibleTable::build(&k, 1).unwrap();
            assert_eq!(t.count(1), q as usize);
        }
    }

    #[test]
    fn budget_guard() {
        let k = FieldSpec::prime(2).unwrap();
        assert!(matches!(IrreducibleTable::build_with_budget(&k, 10, 100), Err(Error::Resource(_))));
    }

    #[test]
    fn corrupted_table_fails_check() {
        let k = FieldSpec::prime(2).unwrap();
        let mut t = IrreducibleTable::build(&k, 3).unwrap();
        t.corrupt_for_testing(2);
        assert!(matches!(t.check_against_mobius(), Err(Error::Internal(_))));
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(mu, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }
}
