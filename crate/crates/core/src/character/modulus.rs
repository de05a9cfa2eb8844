//! The unit group (A/QA)* as a product of cyclic groups, with a full
//! discrete-log table.

use std::sync::OnceLock;

use num_integer::Integer;

use super::cyclotomic::cyclotomic_poly;
use super::snf::smith;
use crate::error::{ensure, Error, Result};
use crate::factor::{factorize, Factorization};
use crate::field::FieldSpec;
use crate::irreducible::{IrreducibleTable, DEFAULT_BUDGET};
use crate::poly::{MonicPoly, Poly};

/// Default bound on Φ(Q).
pub const DEFAULT_PHI_BOUND: u64 = 100_000;

const NONUNIT: u32 = u32::MAX;

/// Residues modulo Q and the decomposition of their unit group.
///
/// Units carry ids in mixed radix over the cyclic orders, so that the group
/// law is componentwise addition of exponent vectors.
#[derive(Debug)]
pub struct ModulusCtx {
    field: FieldSpec,
    modulus: MonicPoly,
    factorization: Factorization,
    phi: u64,
    orders: Vec<u64>,
    gens: Vec<Poly>,
    unit_of_residue: Vec<u32>,
    residue_of_unit: Vec<u32>,
    cyclo: OnceLock<Vec<i64>>,
}

impl ModulusCtx {
    pub fn new(k: &FieldSpec, modulus: &MonicPoly) -> Result<Self> {
        Self::with_bound(k, modulus, DEFAULT_PHI_BOUND)
    }

    pub fn with_bound(k: &FieldSpec, modulus: &MonicPoly, phi_bound: u64) -> Result<Self> {
        let m = modulus.deg();
        ensure!(m >= 1, Precondition, "the modulus must have degree at least 1");
        let q = k.q() as u64;
        let size = q.checked_pow(m as u32).filter(|&s| s <= DEFAULT_BUDGET);
        let Some(size) = size else {
            return Err(Error::Resource(format!("q^deg Q = {q}^{m} residues exceed the budget {DEFAULT_BUDGET}")));
        };
        let table = IrreducibleTable::build(k, (m / 2).max(1))?;
        let factorization = factorize(modulus, &table)?;
        let phi: u64 = factorization
            .factors()
            .iter()
            .map(|(p, e)| {
                let np = q.pow(p.deg() as u32);
                np.pow(e - 1) * (np - 1)
            })
            .product();
        ensure!(phi <= phi_bound, Resource, "Φ(Q) = {phi} exceeds the bound {phi_bound}");

        let qp = modulus.as_poly();
        let mut unit_of_residue = vec![NONUNIT; size as usize];
        let mut n_units = 0u64;
        for idx in 0..size {
            let r = Poly::from_index(k.q(), idx);
            if !r.is_zero() && r.gcd(qp, k) == Poly::one() {
                unit_of_residue[idx as usize] = 0;
                n_units += 1;
            }
        }
        ensure!(n_units == phi, Internal, "found {n_units} unit residues, the totient formula gives {phi}");

        let mut ctx = ModulusCtx {
            field: k.clone(),
            modulus: modulus.clone(),
            factorization,
            phi,
            orders: Vec::new(),
            gens: Vec::new(),
            unit_of_residue,
            residue_of_unit: Vec::new(),
            cyclo: OnceLock::new(),
        };
        let (gens, orders) = ctx.decompose()?;
        ctx.fill_dlog(gens, orders)?;
        Ok(ctx)
    }

    fn mulmod(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul_mod(b, self.modulus.as_poly(), &self.field)
    }

    fn powmod(&self, a: &Poly, mut e: u64) -> Poly {
        let mut base = a.clone();
        let mut acc = Poly::one().rem(self.modulus.as_poly(), &self.field).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base);
            }
            base = self.mulmod(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Polycyclic series 1 = H_0 < H_1 < … < H_k = G built from the smallest
    /// unit outside the current subgroup, then the relation lattice is put in
    /// Smith form to read off independent generators.
    fn decompose(&self) -> Result<(Vec<Poly>, Vec<u64>)> {
        let q = self.field.q();
        let size = self.unit_of_residue.len();
        let one = Poly::one().rem(self.modulus.as_poly(), &self.field).expect("nonzero modulus");
        // polycyclic coordinates of members, by residue index
        let mut coords: Vec<Option<Vec<i128>>> = vec![None; size];
        coords[one.index(q) as usize] = Some(Vec::new());
        let mut members: Vec<Poly> = vec![one];
        let mut pc_gens: Vec<Poly> = Vec::new();
        let mut relations: Vec<Vec<i128>> = Vec::new();
        let mut scan = 0usize;
        while (members.len() as u64) < self.phi {
            while self.unit_of_residue[scan] == NONUNIT || coords[scan].is_some() {
                scan += 1;
            }
            let g = Poly::from_index(q, scan as u64);
            let j = pc_gens.len();
            let mut x = g.clone();
            let mut r = 1i128;
            while coords[x.index(q) as usize].is_none() {
                x = self.mulmod(&x, &g);
                r += 1;
            }
            let below = coords[x.index(q) as usize].clone().expect("member");
            let mut row: Vec<i128> = (0..j).map(|i| -below.get(i).copied().unwrap_or(0)).collect();
            row.push(r);
            relations.push(row);
            let base = members.clone();
            let mut power = Poly::one();
            for a in 1..r {
                power = self.mulmod(&power, &g);
                for m in &base {
                    let y = self.mulmod(m, &power);
                    let mut c = coords[m.index(q) as usize].clone().expect("member");
                    c.resize(j, 0);
                    c.push(a);
                    let slot = &mut coords[y.index(q) as usize];
                    ensure!(slot.is_none(), Internal, "polycyclic closure revisited a residue");
                    *slot = Some(c);
                    members.push(y);
                }
            }
            pc_gens.push(g);
        }

        let k = pc_gens.len();
        let mut rel = vec![vec![0i128; k]; k];
        for (i, row) in relations.iter().enumerate() {
            rel[i][..row.len()].copy_from_slice(row);
        }
        let s = smith(&rel);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for i in (0..k).rev() {
            let d = s.diag[i];
            ensure!(d >= 1, Internal, "relation lattice is not of full rank");
            if d == 1 {
                continue;
            }
            let mut h = Poly::one();
            for (j, g) in pc_gens.iter().enumerate() {
                let e = s.v_inv[i][j].rem_euclid(self.phi as i128) as u64;
                h = self.mulmod(&h, &self.powmod(g, e));
            }
            gens.push(h);
            orders.push(d as u64);
        }
        Ok((gens, orders))
    }

    /// Breadth-first closure over the final generators; every unit must be
    /// reached exactly once.
    fn fill_dlog(&mut self, gens: Vec<Poly>, orders: Vec<u64>) -> Result<()> {
        let q = self.field.q();
        let product: u64 = orders.iter().product();
        ensure!(product == self.phi, Internal, "cyclic orders {orders:?} multiply to {product}, Φ = {}", self.phi);
        for w in orders.windows(2) {
            ensure!(w[0] % w[1] == 0, Internal, "orders {orders:?} do not form a divisibility chain");
        }
        for (g, &e) in gens.iter().zip(&orders) {
            ensure!(self.powmod(g, e) == Poly::one(), Internal, "generator {g:?} does not have order dividing {e}");
        }
        for slot in self.unit_of_residue.iter_mut().filter(|s| **s != NONUNIT) {
            *slot = NONUNIT - 1;
        }
        let mut residue_of_unit: Vec<u32> = vec![Poly::one().rem(self.modulus.as_poly(), &self.field)?.index(q) as u32];
        // id = Σ x_i·stride_i; the i-th pass multiplies everything found so far by g_i
        for (g, &e) in gens.iter().zip(&orders) {
            let base = residue_of_unit.clone();
            let mut power = Poly::one();
            for _ in 1..e {
                power = self.mulmod(&power, g);
                for &r in &base {
                    let y = self.mulmod(&Poly::from_index(q, r as u64), &power);
                    residue_of_unit.push(y.index(q) as u32);
                }
            }
        }
        for (id, &r) in residue_of_unit.iter().enumerate() {
            let slot = &mut self.unit_of_residue[r as usize];
            ensure!(*slot == NONUNIT - 1, Internal, "residue {r} reached twice or is not a unit");
            *slot = id as u32;
        }
        ensure!(residue_of_unit.len() as u64 == self.phi, Internal, "closure reached {} units", residue_of_unit.len());
        self.gens = gens;
        self.orders = orders;
        self.residue_of_unit = residue_of_unit;
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn modulus(&self) -> &MonicPoly {
        &self.modulus
    }

    pub fn deg(&self) -> usize {
        self.modulus.deg()
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Cyclic orders e_1 ≥ e_2 ≥ … with e_{i+1} | e_i.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    /// Exponent of the group (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.orders.first().copied().unwrap_or(1)
    }

    /// Φ_E for E the group exponent, cached.
    pub fn cyclotomic(&self) -> &[i64] {
        self.cyclo.get_or_init(|| cyclotomic_poly(self.exponent()))
    }

    pub fn residue_index(&self, f: &Poly) -> u64 {
        f.rem(self.modulus.as_poly(), &self.field).expect("nonzero modulus").index(self.field.q())
    }

    /// Unit id of `f mod Q`, or `None` when gcd(f, Q) ≠ 1.
    pub fn unit_id(&self, f: &Poly) -> Option<u32> {
        self.unit_id_of_residue(self.residue_index(f))
    }

    pub fn unit_id_of_residue(&self, idx: u64) -> Option<u32> {
        let id = self.unit_of_residue[idx as usize];
        (id != NONUNIT).then_some(id)
    }

    /// The reduced residue (degree < deg Q) of a unit id.
    pub fn unit_residue(&self, id: u32) -> Poly {
        Poly::from_index(self.field.q(), self.residue_of_unit[id as usize] as u64)
    }

    /// Exponent vector of a unit id with respect to the generators.
    pub fn dlog(&self, id: u32) -> Vec<u64> {
        let mut x = id as u64;
        self.orders
            .iter()
            .map(|&e| {
                let c = x % e;
                x /= e;
                c
            })
            .collect()
    }

    pub fn id_of(&self, coords: &[u64]) -> u32 {
        let mut id = 0u64;
        for (&c, &e) in coords.iter().zip(&self.orders).rev() {
            id = id * e + c % e;
        }
        id as u32
    }

    pub fn unit_mul(&self, a: u32, b: u32) -> u32 {
        let (mut x, mut y) = (a as u64, b as u64);
        let (mut id, mut stride) = (0u64, 1u64);
        for &e in &self.orders {
            id += ((x % e + y % e) % e) * stride;
            x /= e;
            y /= e;
            stride *= e;
        }
        id as u32
    }

    pub fn unit_pow(&self, a: u32, k: u64) -> u32 {
        let c: Vec<u64> = self.dlog(a).iter().zip(&self.orders).map(|(&x, &e)| ((x as u128 * k as u128) % e as u128) as u64).collect();
        self.id_of(&c)
    }

    pub fn unit_inv(&self, a: u32) -> u32 {
        let c: Vec<u64> = self.dlog(a).iter().zip(&self.orders).map(|(&x, &e)| (e - x) % e).collect();
        self.id_of(&c)
    }

    /// Order of a unit: lcm of e_i / gcd(x_i, e_i).
    pub fn unit_order(&self, a: u32) -> u64 {
        self.dlog(a).iter().zip(&self.orders).fold(1u64, |acc, (&x, &e)| acc.lcm(&(e / x.gcd(&e))))
    }

    /// Unit residues in id order.
    pub fn units(&self) -> impl Iterator<Item = Poly> + '_ {
        (0..self.phi as u32).map(|id| self.unit_residue(id))
    }

    /// Whether the residue with this packed index is a unit.
    pub fn is_unit_index(&self, idx: u64) -> bool {
        self.unit_of_residue[idx as usize] != NONUNIT
    }
}
