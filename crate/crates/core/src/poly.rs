//! Polynomials over F_q.
//!
//! [`Poly`] is a general polynomial (used for residues modulo Q and for
//! intermediate remainders); [`MonicPoly`] wraps a poly whose leading
//! coefficient is one. Both order canonically: by degree, then by the packed
//! index `Σ c_i q^i`, i.e. the counting order in which `enumerate_monic` emits
//! them.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{ensure, Error, Result};
use crate::field::{FieldElem, FieldSpec};

/// A polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<u32> = self.coeffs.iter().map(|e| e.0).collect();
        write!(f, "Poly{c:?}")
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![FieldElem::ONE] }
    }

    /// The monomial T.
    pub fn t() -> Self {
        Poly { coeffs: vec![FieldElem::ZERO, FieldElem::ONE] }
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    /// Packed index `Σ c_i q^i` over all coefficients.
    pub fn index(&self, q: u32) -> u64 {
        self.coeffs.iter().rev().fold(0u64, |acc, c| acc * q as u64 + c.0 as u64)
    }

    /// Inverse of [`Poly::index`].
    pub fn from_index(q: u32, mut idx: u64) -> Self {
        let mut coeffs = Vec::new();
        while idx > 0 {
            coeffs.push(FieldElem((idx % q as u64) as u32));
            idx /= q as u64;
        }
        Poly { coeffs }
    }

    pub fn add(&self, other: &Poly, k: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| k.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, k: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| k.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: FieldElem, k: &FieldSpec) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, k: &FieldSpec) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Euclidean division; errors when dividing by zero.
    pub fn divrem(&self, divisor: &Poly, k: &FieldSpec) -> Result<(Poly, Poly)> {
        let dd = divisor.deg().ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let lead_inv = k.inv(divisor.lead().unwrap())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![FieldElem::ZERO; rem.len() - dd];
        for pos in (dd..rem.len()).rev() {
            let c = rem[pos];
            if c.is_zero() {
                continue;
            }
            let factor = k.mul(c, lead_inv);
            quot[pos - dd] = factor;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = pos - dd + i;
                rem[idx] = k.sub(rem[idx], k.mul(factor, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &Poly, k: &FieldSpec) -> Result<Poly> {
        Ok(self.divrem(divisor, k)?.1)
    }

    /// Scales a nonzero polynomial to be monic; zero stays zero.
    pub fn monic_part(&self, k: &FieldSpec) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(k.inv(l).expect("nonzero lead"), k),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly, k: &FieldSpec) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, k).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic_part(k)
    }

    /// `self * other mod modulus`.
    pub fn mul_mod(&self, other: &Poly, modulus: &Poly, k: &FieldSpec) -> Poly {
        self.mul(other, k).rem(modulus, k).expect("modulus is nonzero")
    }

    pub fn eval(&self, x: FieldElem, k: &FieldSpec) -> FieldElem {
        self.coeffs.iter().rev().fold(FieldElem::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// Bit-exact text form: ascending coefficients separated by commas
    /// (`"1,1,1"` is T^2+T+1); extension-field coefficients are bracketed.
    pub fn to_text(&self, k: &FieldSpec) -> String {
        if self.coeffs.is_empty() {
            return if k.f() == 1 { "0".into() } else { format!("[{}]", vec!["0"; k.f() as usize].join(",")) };
        }
        let parts: Vec<String> = self.coeffs.iter().map(|&c| k.format_elem(c)).collect();
        parts.join(",")
    }

    /// Human-readable form such as `T^2+T+1`.
    pub fn pretty(&self, k: &FieldSpec) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = k.format_elem(c);
            let mono = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            terms.push(match (i, c == FieldElem::ONE) {
                (0, _) => cs,
                (_, true) => mono,
                (_, false) => format!("{cs}{mono}"),
            });
        }
        terms.join("+")
    }

    /// Parses either the comma form or, over prime fields, the pretty form.
    pub fn parse(s: &str, k: &FieldSpec) -> Result<Poly> {
        let s = s.trim();
        ensure!(!s.is_empty(), Parse, "empty polynomial");
        if s.contains('T') || s.contains('t') {
            ensure!(k.f() == 1, Parse, "pretty form is only accepted over prime fields");
            return parse_pretty(s, k);
        }
        let mut coeffs = Vec::new();
        if k.f() == 1 {
            for tok in s.split(',') {
                let v: i64 = tok.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))?;
                ensure!(v >= 0 && v < k.p() as i64, Parse, "coefficient {v} outside [0, {})", k.p());
                coeffs.push(FieldElem(v as u32));
            }
        } else {
            let mut rest = s;
            while !rest.is_empty() {
                rest = rest.trim_start_matches([',', ' ']);
                if rest.is_empty() {
                    break;
                }
                ensure!(rest.starts_with('['), Parse, "extension coefficients must be bracketed: {rest:?}");
                let end = rest.find(']').ok_or_else(|| Error::Parse("unterminated bracket".into()))?;
                let digits: Result<Vec<u32>> = rest[1..end]
                    .split(',')
                    .map(|d| d.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad digit {d:?}"))))
                    .collect();
                coeffs.push(k.from_digits(&digits?)?);
                rest = &rest[end + 1..];
            }
        }
        Ok(Poly::from_coeffs(coeffs))
    }
}

fn parse_pretty(s: &str, k: &FieldSpec) -> Result<Poly> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let cleaned = cleaned.replace('t', "T").replace('*', "");
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut negative = false;
    for (i, ch) in cleaned.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push((negative, &cleaned[start..i]));
            negative = ch == '-';
            start = i + 1;
        } else if ch == '-' && i == 0 {
            negative = true;
            start = 1;
        }
    }
    terms.push((negative, &cleaned[start..]));
    let mut coeffs: Vec<FieldElem> = Vec::new();
    for (neg, term) in terms {
        ensure!(!term.is_empty(), Parse, "empty term in {s:?}");
        let (coef, power) = match term.find('T') {
            None => (term, 0usize),
            Some(pos) => {
                let exp = &term[pos + 1..];
                let power = if exp.is_empty() {
                    1
                } else {
                    let e = exp.strip_prefix('^').ok_or_else(|| Error::Parse(format!("bad exponent in {term:?}")))?;
                    e.parse().map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
                };
                (&term[..pos], power)
            }
        };
        let c: i64 = if coef.is_empty() {
            1
        } else {
            coef.parse().map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
        };
        let c = k.from_int(if neg { -c } else { c });
        if coeffs.len() <= power {
            coeffs.resize(power + 1, FieldElem::ZERO);
        }
        coeffs[power] = k.add(coeffs[power], c);
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// A monic polynomial; degree 0 is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonicPoly(Poly);

impl fmt::Debug for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monic{:?}", self.0)
    }
}

impl MonicPoly {
    pub fn one() -> Self {
        MonicPoly(Poly::one())
    }

    pub fn t() -> Self {
        MonicPoly(Poly::t())
    }

    pub fn new(p: Poly) -> Result<Self> {
        ensure!(p.lead() == Some(FieldElem::ONE), Domain, "{p:?} is not monic");
        Ok(MonicPoly(p))
    }

    /// The monic polynomial of degree `n` whose lower coefficients have packed index `idx`.
    pub fn from_lower_index(q: u32, n: usize, idx: u64) -> Self {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut v = idx;
        for _ in 0..n {
            coeffs.push(FieldElem((v % q as u64) as u32));
            v /= q as u64;
        }
        coeffs.push(FieldElem::ONE);
        MonicPoly(Poly { coeffs })
    }

    /// Packed index of the coefficients below the leading one.
    pub fn lower_index(&self, q: u32) -> u64 {
        let c = &self.0.coeffs;
        c[..c.len() - 1].iter().rev().fold(0u64, |acc, x| acc * q as u64 + x.0 as u64)
    }

    pub fn parse(s: &str, k: &FieldSpec) -> Result<Self> {
        MonicPoly::new(Poly::parse(s, k)?)
    }

    pub fn as_poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    pub fn deg(&self) -> usize {
        self.0.coeffs.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.deg() == 0
    }

    /// The norm |f| = q^deg f.
    pub fn norm(&self, q: u32) -> u128 {
        (q as u128).pow(self.deg() as u32)
    }

    pub fn mul(&self, other: &MonicPoly, k: &FieldSpec) -> MonicPoly {
        MonicPoly(self.0.mul(&other.0, k))
    }

    pub fn pow(&self, e: u32, k: &FieldSpec) -> MonicPoly {
        (0..e).fold(MonicPoly::one(), |acc, _| acc.mul(self, k))
    }

    /// Exact quotient when `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &MonicPoly, k: &FieldSpec) -> Option<MonicPoly> {
        let (q, r) = self.0.divrem(&divisor.0, k).ok()?;
        r.is_zero().then_some(MonicPoly(q))
    }

    pub fn to_text(&self, k: &FieldSpec) -> String {
        self.0.to_text(k)
    }

    pub fn pretty(&self, k: &FieldSpec) -> String {
        self.0.pretty(k)
    }
}

/// All q^n monic polynomials of degree `n`, in canonical order.
pub fn enumerate_monic(k: &FieldSpec, n: usize) -> impl Iterator<Item = MonicPoly> {
    let q = k.q();
    let count = (q as u64).checked_pow(n as u32).expect("q^n overflows u64; guard enumeration size");
    (0..count).map(move |i| MonicPoly::from_lower_index(q, n, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    #[test]
    fn enumeration_counts_and_order() {
        let k = f2();
        assert_eq!(enumerate_monic(&k, 0).collect::<Vec<_>>(), vec![MonicPoly::one()]);
        let quads: Vec<String> = enumerate_monic(&k, 2).map(|f| f.pretty(&k)).collect();
        assert_eq!(quads, ["T^2", "T^2+1", "T^2+T", "T^2+T+1"]);
        let k3 = FieldSpec::prime(3).unwrap();
        assert_eq!(enumerate_monic(&k3, 3).count(), 27);
        let all: Vec<MonicPoly> = enumerate_monic(&k3, 3).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn text_formats() {
        let k = f2();
        let f = MonicPoly::parse("1,1,1", &k).unwrap();
        assert_eq!(f.pretty(&k), "T^2+T+1");
        assert_eq!(MonicPoly::parse("T^2+T+1", &k).unwrap(), f);
        assert_eq!(f.to_text(&k), "1,1,1");
        let k3 = FieldSpec::prime(3).unwrap();
        let g = Poly::parse("2T^3 - T + 1", &k3).unwrap();
        assert_eq!(g.to_text(&k3), "1,2,0,2");
        assert!(MonicPoly::parse("0,1,2", &k3).is_err());
        assert!(Poly::parse("1,2", &k).is_err());
        let k4 = FieldSpec::with_order(4).unwrap();
        let h = Poly::parse("[1,0],[0,1],[1,0]", &k4).unwrap();
        assert_eq!(h.to_text(&k4), "[1,0],[0,1],[1,0]");
        assert!(Poly::parse("T+1", &k4).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let k = f2();
        let a = Poly::parse("0,1,1", &k).unwrap(); // T^2+T
        let b = Poly::parse("1,1", &k).unwrap(); // T+1
        let (q, r) = a.divrem(&b, &k).unwrap();
        assert_eq!(q, Poly::t());
        assert!(r.is_zero());
        let g = Poly::parse("1,0,1", &k).unwrap().gcd(&a, &k); // gcd(T^2+1, T^2+T) = T+1
        assert_eq!(g, b);
        assert!(a.divrem(&Poly::zero(), &k).is_err());
    }

    #[test]
    fn index_roundtrip() {
        let k3 = FieldSpec::prime(3).unwrap();
        for i in 0..81u64 {
            assert_eq!(Poly::from_index(3, i).index(3), i);
        }
        for f in enumerate_monic(&k3, 2) {
            assert_eq!(MonicPoly::from_lower_index(3, 2, f.lower_index(3)), f);
        }
        let _ = k3;
    }
}
