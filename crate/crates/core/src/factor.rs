//! Factorization by trial division against an [`IrreducibleTable`], and
//! divisor enumeration.

use crate::error::{ensure, Result};
use crate::field::FieldSpec;
use crate::irreducible::IrreducibleTable;
use crate::poly::MonicPoly;

/// Canonically sorted prime-power decomposition of a monic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(MonicPoly, u32)>,
}

impl Factorization {
    /// Builds a factorization from (irreducible, multiplicity) pairs; equal
    /// primes are merged and the list sorted. Irreducibility is the caller's
    /// responsibility.
    pub fn from_factors(mut pairs: Vec<(MonicPoly, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort();
        let mut factors: Vec<(MonicPoly, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            match factors.last_mut() {
                Some((last, le)) if *last == p => *le += e,
                _ => factors.push((p, e)),
            }
        }
        Factorization { factors }
    }

    pub fn one() -> Self {
        Factorization { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[(MonicPoly, u32)] {
        &self.factors
    }

    /// Ω: number of prime factors with multiplicity.
    pub fn omega(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(p, e)| p.deg() * *e as usize).sum()
    }

    pub fn num_divisors(&self) -> u64 {
        self.factors.iter().map(|(_, e)| *e as u64 + 1).product()
    }

    pub fn product(&self, k: &FieldSpec) -> MonicPoly {
        self.factors.iter().fold(MonicPoly::one(), |acc, (p, e)| acc.mul(&p.pow(*e, k), k))
    }

    /// Every monic divisor exactly once, as exponent vectors aligned with
    /// [`Factorization::factors`].
    pub fn divisor_exponents(&self) -> DivisorExponents<'_> {
        DivisorExponents { fac: self, current: Some(vec![0; self.factors.len()]) }
    }

    /// Every monic divisor exactly once (including 1 and the polynomial itself).
    pub fn divisors<'a>(&'a self, k: &'a FieldSpec) -> impl Iterator<Item = MonicPoly> + 'a {
        self.divisor_exponents().map(move |exps| {
            self.factors
                .iter()
                .zip(&exps)
                .fold(MonicPoly::one(), |acc, ((p, _), &e)| acc.mul(&p.pow(e, k), k))
        })
    }
}

/// Odometer over exponent vectors `0 ≤ a_i ≤ e_i`.
pub struct DivisorExponents<'a> {
    fac: &'a Factorization,
    current: Option<Vec<u32>>,
}

impl Iterator for DivisorExponents<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.current.take()?;
        let mut nxt = cur.clone();
        let mut i = 0;
        loop {
            if i == nxt.len() {
                self.current = None;
                break;
            }
            if nxt[i] < self.fac.factors[i].1 {
                nxt[i] += 1;
                self.current = Some(nxt);
                break;
            }
            nxt[i] = 0;
            i += 1;
        }
        Some(cur)
    }
}

/// Trial division by the irreducibles of the table. Any undivided remainder of
/// positive degree is irreducible because every smaller factor was removed.
pub fn factorize(g: &MonicPoly, table: &IrreducibleTable) -> Result<Factorization> {
    let k = table.field();
    ensure!(
        g.deg() <= 2 * table.max_deg() + 1,
        Precondition,
        "degree {} needs irreducibles up to degree {}, table stops at {}",
        g.deg(),
        g.deg() / 2,
        table.max_deg()
    );
    let mut rem = g.clone();
    let mut factors = Vec::new();
    let mut d = 1;
    while 2 * d <= rem.deg() {
        for p in table.of_degree(d) {
            let mut e = 0;
            while let Some(quot) = rem.div_exact(p, k) {
                rem = quot;
                e += 1;
            }
            if e > 0 {
                factors.push((p.clone(), e));
            }
            if 2 * d > rem.deg() {
                break;
            }
        }
        d += 1;
    }
    if rem.deg() >= 1 {
        factors.push((rem, 1));
    }
    Ok(Factorization::from_factors(factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::enumerate_monic;
    use proptest::prelude::*;

    fn setup() -> (FieldSpec, IrreducibleTable) {
        let k = FieldSpec::prime(2).unwrap();
        let t = IrreducibleTable::build(&k, 6).unwrap();
        (k, t)
    }

    #[test]
    fn small_examples() {
        let (k, t) = setup();
        let f = factorize(&MonicPoly::parse("0,1,1", &k).unwrap(), &t).unwrap();
        let names: Vec<_> = f.factors().iter().map(|(p, e)| (p.pretty(&k), *e)).collect();
        assert_eq!(names, [("T".to_string(), 1), ("T+1".to_string(), 1)]);
        assert_eq!(f.omega(), 2);

        let f = factorize(&MonicPoly::parse("1,0,1,0,1", &k).unwrap(), &t).unwrap();
        let names: Vec<_> = f.factors().iter().map(|(p, e)| (p.pretty(&k), *e)).collect();
        assert_eq!(names, [("T^2+T+1".to_string(), 2)]);

        let cubic = &t.of_degree(3)[0];
        let f = factorize(cubic, &t).unwrap();
        assert_eq!(f.factors(), &[(cubic.clone(), 1)]);
    }

    #[test]
    fn trial_division_oracle_for_square() {
        // (T^2+T+1)^2 expands to T^4+T^2+1 over F_2
        let (k, _) = setup();
        let p = MonicPoly::parse("1,1,1", &k).unwrap();
        assert_eq!(p.mul(&p, &k), MonicPoly::parse("1,0,1,0,1", &k).unwrap());
    }

    #[test]
    fn table_too_shallow() {
        let k = FieldSpec::prime(2).unwrap();
        let t = IrreducibleTable::build(&k, 2).unwrap();
        let g = MonicPoly::from_lower_index(2, 8, 5);
        assert!(factorize(&g, &t).is_err());
    }

    #[test]
    fn divisor_counts() {
        let (k, t) = setup();
        assert_eq!(Factorization::one().divisors(&k).collect::<Vec<_>>(), vec![MonicPoly::one()]);
        let f = MonicPoly::parse("0,0,1,1", &k).unwrap(); // T^2 (T+1)
        let fac = factorize(&f, &t).unwrap();
        let divs: Vec<_> = fac.divisors(&k).collect();
        assert_eq!(divs.len(), 6);
        assert!(divs.contains(&MonicPoly::one()) && divs.contains(&f));
        let mut sorted = divs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
        let (p, r) = (&t.of_degree(2)[0], &t.of_degree(3)[0]);
        let pr = Factorization::from_factors(vec![(p.clone(), 1), (r.clone(), 1)]);
        let mut divs: Vec<_> = pr.divisors(&k).collect();
        divs.sort();
        assert_eq!(divs, vec![MonicPoly::one(), p.clone(), r.clone(), p.mul(r, &k)]);
    }

    #[test]
    fn irreducible_count_matches_census() {
        let (k, t) = setup();
        for n in 1..=6 {
            let primes = enumerate_monic(&k, n).filter(|g| factorize(g, &t).unwrap().omega() == 1).count();
            assert_eq!(primes, t.count(n));
        }
    }

    proptest! {
        #[test]
        fn factorize_inverts_multiply(picks in proptest::collection::vec((0usize..20, 1u32..3), 0..4)) {
            let (k, t) = setup();
            let primes: Vec<&MonicPoly> = t.iter().filter(|p| p.deg() <= 4).collect();
            let pairs: Vec<(MonicPoly, u32)> = picks.iter().map(|&(i, e)| (primes[i % primes.len()].clone(), e)).collect();
            let fac = Factorization::from_factors(pairs);
            prop_assume!(fac.degree() <= 13);
            let g = fac.product(&k);
            prop_assert_eq!(factorize(&g, &t).unwrap(), fac);
        }
    }
}
