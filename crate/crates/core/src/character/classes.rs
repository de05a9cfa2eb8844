//! π(d; h): the number of monic irreducibles of degree d in each unit class
//! modulo Q, computed exactly without listing the irreducibles.
//!
//! Let F_n ∈ Z[G] record the residues of the monic polynomials of degree n
//! coprime to Q. Then Σ F_n u^n = Π_{P∤Q} (1 − [P] u^{deg P})^{−1}, and its
//! logarithmic derivative Λ_n = n F_n − Σ_{j<n} Λ_j F_{n−j} collects
//! Σ_{d|n} d·#{P : deg P = d, P^{n/d} ≡ g}, from which π(n; g) is peeled off
//! by induction on n.

use std::sync::Arc;

use num_bigint::BigInt;

use super::modulus::ModulusCtx;
use crate::error::{ensure, Error, Result};
use crate::irreducible::{divisors_of, mobius_count};
use crate::poly::enumerate_monic;

#[derive(Clone, Debug)]
pub struct ClassPrimeCounts {
    ctx: Arc<ModulusCtx>,
    /// by degree, then by unit id; index 0 unused
    counts: Vec<Vec<i128>>,
    /// irreducible divisors of Q by degree
    ramified: Vec<u32>,
}

enum Residues {
    /// every unit class hit the same number of times
    Uniform(i128),
    Sparse(Vec<(u32, i128)>),
}

fn overflow() -> Error {
    Error::Resource("class counts overflow 128-bit integers; lower the degree".into())
}

impl ClassPrimeCounts {
    pub fn build(ctx: &Arc<ModulusCtx>, max_deg: usize) -> Result<Self> {
        ensure!(max_deg >= 1, Precondition, "max_deg must be at least 1");
        let k = ctx.field();
        let q = k.q() as i128;
        let m = ctx.deg();
        let phi = ctx.phi() as usize;

        let residues: Vec<Residues> = (0..=max_deg)
            .map(|n| {
                if n >= m {
                    let c = q.checked_pow((n - m) as u32).ok_or_else(overflow)?;
                    Ok(Residues::Uniform(c))
                } else {
                    // degree below deg Q: each polynomial is its own residue
                    let mut v: Vec<(u32, i128)> = enumerate_monic(k, n).filter_map(|f| ctx.unit_id(f.as_poly()).map(|id| (id, 1))).collect();
                    v.sort_unstable();
                    Ok(Residues::Sparse(v))
                }
            })
            .collect::<Result<_>>()?;

        let mut lambda: Vec<Vec<i128>> = vec![vec![0; phi]];
        for n in 1..=max_deg {
            let mut l = vec![0i128; phi];
            match &residues[n] {
                Residues::Uniform(c) => {
                    let v = c.checked_mul(n as i128).ok_or_else(overflow)?;
                    l.iter_mut().for_each(|x| *x = v);
                }
                Residues::Sparse(v) => {
                    for &(id, c) in v {
                        l[id as usize] += c * n as i128;
                    }
                }
            }
            for j in 1..n {
                let lj = &lambda[j];
                match &residues[n - j] {
                    Residues::Uniform(c) => {
                        let total = lj.iter().try_fold(0i128, |a, &b| a.checked_add(b)).ok_or_else(overflow)?;
                        let sub = total.checked_mul(*c).ok_or_else(overflow)?;
                        for x in l.iter_mut() {
                            *x = x.checked_sub(sub).ok_or_else(overflow)?;
                        }
                    }
                    Residues::Sparse(v) => {
                        for (h, &a) in lj.iter().enumerate() {
                            if a == 0 {
                                continue;
                            }
                            for &(g, c) in v {
                                let slot = &mut l[ctx.unit_mul(h as u32, g) as usize];
                                *slot = slot.checked_sub(a.checked_mul(c).ok_or_else(overflow)?).ok_or_else(overflow)?;
                            }
                        }
                    }
                }
            }
            lambda.push(l);
        }

        let mut counts: Vec<Vec<i128>> = vec![Vec::new()];
        for n in 1..=max_deg {
            let mut rest = lambda[n].clone();
            for d in divisors_of(n as u64).into_iter().map(|d| d as usize).filter(|&d| d < n) {
                let e = (n / d) as u64;
                for (h, &c) in counts[d].iter().enumerate() {
                    if c != 0 {
                        let g = ctx.unit_pow(h as u32, e) as usize;
                        rest[g] = rest[g].checked_sub(c.checked_mul(d as i128).ok_or_else(overflow)?).ok_or_else(overflow)?;
                    }
                }
            }
            let mut row = Vec::with_capacity(phi);
            for (g, r) in rest.into_iter().enumerate() {
                ensure!(r % n as i128 == 0 && r >= 0, Internal, "class count for degree {n}, unit {g} is {r}/{n}");
                row.push(r / n as i128);
            }
            counts.push(row);
        }

        let mut ramified = vec![0u32; max_deg + 1];
        for (p, _) in ctx.factorization().factors() {
            if p.deg() <= max_deg {
                ramified[p.deg()] += 1;
            }
        }
        let out = ClassPrimeCounts { ctx: Arc::clone(ctx), counts, ramified };
        out.check_totals()?;
        Ok(out)
    }

    /// Σ_h π(d; h) + #{P | Q : deg P = d} = π(d) for every degree.
    pub fn check_totals(&self) -> Result<()> {
        for d in 1..=self.max_deg() {
            let total: i128 = self.counts[d].iter().sum::<i128>() + self.ramified[d] as i128;
            let expected = BigInt::from(mobius_count(self.ctx.field().q(), d));
            ensure!(BigInt::from(total) == expected, Internal, "class counts of degree {d} total {total}, Möbius gives {expected}");
        }
        Ok(())
    }

    pub fn ctx(&self) -> &Arc<ModulusCtx> {
        &self.ctx
    }

    pub fn max_deg(&self) -> usize {
        self.counts.len() - 1
    }

    /// π(d; h) for the unit with id `h`.
    pub fn get(&self, d: usize, h: u32) -> i128 {
        self.counts[d][h as usize]
    }

    pub fn row(&self, d: usize) -> &[i128] {
        &self.counts[d]
    }

    /// Irreducible divisors of Q of degree d.
    pub fn ramified(&self, d: usize) -> u32 {
        self.ramified[d]
    }
}
