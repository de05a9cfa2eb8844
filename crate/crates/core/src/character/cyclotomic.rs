//! Exact character values: roots of unity as reduced fractions, and sums of
//! them as integer combinations of powers of ζ_E reduced modulo Φ_E.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;

use crate::irreducible::{divisors_of, mobius};

/// χ(f): zero off the units, otherwise e^{2πi·num/den} with num/den reduced
/// and 0 ≤ num < den.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    Root { num: u64, den: u64 },
}

impl CharValue {
    pub const ONE: CharValue = CharValue::Root { num: 0, den: 1 };

    /// ζ_den^num, reduced.
    pub fn root(num: u64, den: u64) -> Self {
        assert!(den > 0);
        let num = num % den;
        let g = num.gcd(&den);
        CharValue::Root { num: num / g, den: den / g }
    }

    pub fn is_zero(self) -> bool {
        self == CharValue::Zero
    }

    pub fn mul(self, other: CharValue) -> CharValue {
        match (self, other) {
            (CharValue::Root { num: a, den: b }, CharValue::Root { num: c, den: d }) => {
                let l = b.lcm(&d);
                CharValue::root(a * (l / b) + c * (l / d), l)
            }
            _ => CharValue::Zero,
        }
    }

    pub fn conj(self) -> CharValue {
        match self {
            CharValue::Root { num, den } => CharValue::root(den - num, den),
            z => z,
        }
    }

    pub fn pow(self, k: u64) -> CharValue {
        match self {
            CharValue::Root { num, den } => CharValue::root(((num as u128 * k as u128) % den as u128) as u64, den),
            CharValue::Zero if k == 0 => CharValue::ONE,
            z => z,
        }
    }

    /// Exponent numerator over a common denominator `e` that `den` divides.
    pub fn numerator_over(self, e: u64) -> Option<u64> {
        match self {
            CharValue::Root { num, den } => {
                assert!(e % den == 0, "{den} does not divide {e}");
                Some(num * (e / den))
            }
            CharValue::Zero => None,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root { num, den } => root_of_unity(num, den),
        }
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharValue::Zero => write!(f, "0"),
            CharValue::Root { num, den } => write!(f, "e(2pi i {num}/{den})"),
        }
    }
}

/// e^{2πi·num/den}, exact at the quarter turns.
pub fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    if 4 * num % den == 0 {
        return match 4 * num / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * num as f64 / den as f64)
}

/// Integer coefficients of the cyclotomic polynomial Φ_n, ascending, via
/// Φ_n = Π_{d|n} (x^d − 1)^{μ(n/d)}.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let divs = divisors_of(n);
    let mut p: Vec<i64> = vec![1];
    // multiply first so that every division is exact
    for &d in &divs {
        if mobius(n / d) == 1 {
            let d = d as usize;
            let mut out = vec![0i64; p.len() + d];
            for (i, &c) in p.iter().enumerate() {
                out[i + d] += c;
                out[i] -= c;
            }
            p = out;
        }
    }
    for &d in &divs {
        if mobius(n / d) == -1 {
            // divide by x^d − 1: q_i = q_{i−d} − p_i read from the bottom
            let d = d as usize;
            let qlen = p.len() - d;
            let mut quot = vec![0i64; qlen];
            for i in 0..qlen {
                let prev = if i >= d { quot[i - d] } else { 0 };
                quot[i] = prev - p[i];
            }
            p = quot;
        }
    }
    p
}

/// An element Σ c_k ζ_E^k of Z[ζ_E], stored by exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloSum {
    counts: Vec<i64>,
}

impl CycloSum {
    pub fn zero(e: u64) -> Self {
        CycloSum { counts: vec![0; e as usize] }
    }

    pub fn order(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn add_value(&mut self, v: CharValue, mult: i64) {
        if let Some(k) = v.numerator_over(self.order()) {
            self.counts[k as usize] += mult;
        }
    }

    pub fn add_exponent(&mut self, k: u64, mult: i64) {
        let e = self.order();
        self.counts[(k % e) as usize] += mult;
    }

    pub fn add(&self, other: &CycloSum) -> CycloSum {
        assert_eq!(self.order(), other.order());
        CycloSum { counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect() }
    }

    pub fn mul(&self, other: &CycloSum) -> CycloSum {
        let e = self.counts.len();
        assert_eq!(e, other.counts.len());
        let mut out = vec![0i64; e];
        for (i, &a) in self.counts.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.counts.iter().enumerate() {
                out[(i + j) % e] += a * b;
            }
        }
        CycloSum { counts: out }
    }

    pub fn conj(&self) -> CycloSum {
        let e = self.counts.len();
        CycloSum { counts: (0..e).map(|k| self.counts[(e - k) % e]).collect() }
    }

    /// Canonical representative of degree < φ(E) modulo `phi_e`.
    pub fn reduce(&self, phi_e: &[i64]) -> Vec<i64> {
        let deg = phi_e.len() - 1;
        let support: Vec<(usize, i64)> = phi_e.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
        let mut c = self.counts.clone();
        for top in (deg..c.len()).rev() {
            let lead = c[top];
            if lead == 0 {
                continue;
            }
            // phi_e is monic
            for &(i, pc) in &support {
                c[top - deg + i] -= lead * pc;
            }
        }
        c.truncate(deg);
        while c.last() == Some(&0) {
            c.pop();
        }
        c
    }

    pub fn is_zero(&self, phi_e: &[i64]) -> bool {
        self.reduce(phi_e).is_empty()
    }

    /// Equality with the rational integer `n`.
    pub fn equals_integer(&self, n: i64, phi_e: &[i64]) -> bool {
        let r = self.reduce(phi_e);
        match n {
            0 => r.is_empty(),
            _ => r == [n],
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let e = self.order();
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| root_of_unity(k as u64, e) * c as f64)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), [-1, 1]);
        assert_eq!(cyclotomic_poly(2), [1, 1]);
        assert_eq!(cyclotomic_poly(3), [1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), [1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), [1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), [1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient −2
        assert!(cyclotomic_poly(105).contains(&-2));
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
    }

    #[test]
    fn values_reduce() {
        assert_eq!(CharValue::root(2, 6), CharValue::root(1, 3));
        assert_eq!(CharValue::root(1, 3).mul(CharValue::root(2, 3)), CharValue::ONE);
        assert_eq!(CharValue::root(1, 4).pow(4), CharValue::ONE);
        assert_eq!(CharValue::root(1, 3).conj(), CharValue::root(2, 3));
        assert_eq!(CharValue::Zero.mul(CharValue::ONE), CharValue::Zero);
        assert!((CharValue::root(1, 4).to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-16);
    }

    #[test]
    fn root_sums() {
        let phi6 = cyclotomic_poly(6);
        let mut s = CycloSum::zero(6);
        for k in 0..6 {
            s.add_exponent(k, 1);
        }
        assert!(s.is_zero(&phi6));
        // 1 + ω + ω² = 0 with ω = ζ_6²
        let mut w = CycloSum::zero(6);
        for k in [0, 2, 4] {
            w.add_exponent(k, 1);
        }
        assert!(w.is_zero(&phi6));
        let mut one = CycloSum::zero(6);
        one.add_exponent(0, 3);
        assert!(one.equals_integer(3, &phi6));
        let mut x = CycloSum::zero(6);
        x.add_exponent(1, 1);
        assert!(x.mul(&x.conj()).equals_integer(1, &phi6));
        assert!(!x.is_zero(&phi6));
    }
}
