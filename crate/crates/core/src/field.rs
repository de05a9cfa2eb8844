//! The coefficient field F_q, q = p^f.
//!
//! Elements are packed into a single integer `Σ c_i p^i` whose base-p digits
//! are the coefficients of the element over F_p with respect to the power basis
//! of the defining modulus. The packed integer doubles as the canonical
//! ordering key of field elements.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Largest field size accepted.
pub const MAX_Q: u64 = 1 << 20;

/// Fields up to this size get a precomputed multiplication table.
const TABLE_LIMIT: u32 = 256;

/// An element of F_q in packed base-p form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Tables {
    mul: Option<Vec<u32>>,
    inv: Vec<u32>,
}

/// Description of F_q together with its arithmetic.
///
/// Cloning is cheap; the lookup tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    f: u32,
    q: u32,
    /// Monic irreducible modulus over F_p, ascending coefficients, length f+1.
    modulus: Option<Vec<u32>>,
    tables: Arc<Tables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        ensure!(is_prime(p as u64), Domain, "{p} is not prime");
        ensure!((p as u64) <= MAX_Q, Resource, "field size {p} exceeds {MAX_Q}");
        Ok(Self::build(p, 1, None))
    }

    /// F_{p^f} defined by the given monic irreducible modulus (ascending coefficients
    /// over F_p), or by the lexicographically first one when `modulus` is `None`.
    pub fn extension(p: u32, f: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        ensure!(is_prime(p as u64), Domain, "{p} is not prime");
        ensure!(f >= 1, Domain, "extension degree must be at least 1");
        let q = (p as u64)
            .checked_pow(f)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::Resource(format!("{p}^{f} exceeds {MAX_Q}")))?;
        if f == 1 {
            ensure!(
                modulus.as_ref().is_none_or(|m| m.len() == 2 && m[1] == 1),
                Domain,
                "a prime field takes no modulus other than a monic linear one"
            );
            return Ok(Self::build(p, 1, None));
        }
        let modulus = match modulus {
            Some(m) => {
                ensure!(m.len() == f as usize + 1, Domain, "modulus must have degree {f}");
                ensure!(m[f as usize] == 1, Domain, "modulus must be monic");
                ensure!(m.iter().all(|&c| c < p), Domain, "modulus coefficients must lie in [0, {p})");
                ensure!(is_irreducible_mod_p(&m, p), Domain, "modulus {m:?} is reducible over F_{p}");
                m
            }
            None => first_irreducible(p, f),
        };
        debug_assert_eq!(q, (p as u64).pow(f));
        Ok(Self::build(p, f, Some(modulus)))
    }

    /// F_q for a prime power q, using the lexicographically first modulus.
    pub fn with_order(q: u64) -> Result<Self> {
        ensure!(q >= 2 && q <= MAX_Q, Domain, "field size {q} out of range");
        let p = (2..=q).find(|d| q % d == 0).unwrap();
        let mut f = 0;
        let mut r = q;
        while r % p == 0 {
            r /= p;
            f += 1;
        }
        ensure!(r == 1, Domain, "{q} is not a prime power");
        Self::extension(p as u32, f, None)
    }

    fn build(p: u32, f: u32, modulus: Option<Vec<u32>>) -> Self {
        let q = p.pow(f);
        let mut spec = FieldSpec { p, f, q, modulus, tables: Arc::new(Tables { mul: None, inv: Vec::new() }) };
        let mul = (f > 1 && q <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = spec.mul_slow(a, b);
                }
            }
            t
        });
        spec.tables = Arc::new(Tables { mul, inv: Vec::new() });
        let mut inv = vec![0u32; q as usize];
        for (a, slot) in inv.iter_mut().enumerate().skip(1) {
            *slot = spec.pow(FieldElem(a as u32), (q - 2) as u64).0;
        }
        spec.tables = Arc::new(Tables { mul: spec.tables.mul.clone(), inv });
        spec
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    /// Base-p digits of an element (length f).
    pub fn digits(&self, a: FieldElem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.f)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElem> {
        ensure!(digits.len() <= self.f as usize, Parse, "too many digits for F_{}", self.q);
        ensure!(digits.iter().all(|&d| d < self.p), Parse, "digit out of range for characteristic {}", self.p);
        Ok(FieldElem(digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)))
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.f == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y, mut out, mut scale) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.f == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut out, mut scale) = (a.0, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * scale;
            x /= self.p;
            scale *= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.f == 1 {
            return FieldElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        match &self.tables.mul {
            Some(t) => FieldElem(t[(a.0 * self.q + b.0) as usize]),
            None => FieldElem(self.mul_slow(a.0, b.0)),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let f = self.f as usize;
        let da = self.digits(FieldElem(a));
        let db = self.digits(FieldElem(b));
        let mut prod = vec![0u64; 2 * f];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        if let Some(m) = &self.modulus {
            for k in (f..2 * f).rev() {
                let c = prod[k];
                if c != 0 {
                    for (i, &mi) in m.iter().enumerate().take(f) {
                        prod[k - f + i] = (prod[k - f + i] + (p - mi as u64) * c) % p;
                    }
                    prod[k] = 0;
                }
            }
        }
        prod[..f].iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: FieldElem, mut k: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        ensure!(!a.is_zero(), Domain, "inversion of zero in F_{}", self.q);
        Ok(FieldElem(self.tables.inv[a.0 as usize]))
    }

    /// Text form of an element: a plain integer over a prime field, a bracketed
    /// digit vector over an extension field.
    pub fn format_elem(&self, a: FieldElem) -> String {
        if self.f == 1 {
            a.0.to_string()
        } else {
            let d: Vec<String> = self.digits(a).iter().map(|x| x.to_string()).collect();
            format!("[{}]", d.join(","))
        }
    }
}

fn poly_rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let db = b.len() - 1;
    let lead_inv = {
        let l = b[db] as u64;
        let mut acc = 1u64;
        let (mut base, mut e) = (l, p64 - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p64;
            }
            base = base * base % p64;
            e >>= 1;
        }
        acc
    };
    while r.len() > db {
        let c = r[r.len() - 1] * lead_inv % p64;
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p64 - bi as u64) * c) % p64;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r.into_iter().map(|x| x as u32).collect()
}

/// Trial division by every monic polynomial of degree 1..=deg/2 over F_p.
pub(crate) fn is_irreducible_mod_p(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                cand.push((v % p as u64) as u32);
                v /= p as u64;
            }
            cand.push(1);
            if poly_rem_mod_p(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, f: u32) -> Vec<u32> {
    let count = (p as u64).pow(f);
    for idx in 0..count {
        let mut cand = Vec::with_capacity(f as usize + 1);
        let mut v = idx;
        for _ in 0..f {
            cand.push((v % p as u64) as u32);
            v /= p as u64;
        }
        cand.push(1);
        if is_irreducible_mod_p(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}
