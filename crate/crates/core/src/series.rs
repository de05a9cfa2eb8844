//! Power series in u: the exact Ω-count table behind ζ(u,y), truncated complex
//! series, the binomial series of (1−qu)^{−y}, the correction factor 𝓝(u,y)
//! and tail-bounded evaluation.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::irreducible::{IrreducibleTable, PrimeCounts};

/// Largest decay ratio accepted when a ratio is measured from the terms.
pub const DECAY_CLAMP: f64 = 0.9;

/// Exact triangular table N_t(n) for 0 ≤ t ≤ n ≤ n_max.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaCountTable {
    q: u32,
    rows: Vec<Vec<BigUint>>,
}

/// A weight y for [`OmegaCountTable::weighted_sum`].
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Rational(BigRational),
    Complex(Complex64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightedValue {
    Exact(BigRational),
    Approx(Complex64),
}

impl WeightedValue {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            WeightedValue::Exact(r) => Complex64::new(rational_to_f64(r), 0.0),
            WeightedValue::Approx(z) => *z,
        }
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn binomial_big(n: &BigUint, k: u64) -> BigUint {
    // C(n, k) = Π_{i<k} (n − i)/(i + 1), each partial product is an integer
    let mut acc = BigUint::one();
    for i in 0..k {
        if *n < BigUint::from(i + 1) {
            return BigUint::zero();
        }
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    q: u32,
    n_max: usize,
    counts: Vec<Vec<String>>,
}

impl OmegaCountTable {
    /// Multiplies in, degree by degree, the multiset series
    /// Σ_k C(π(d)+k−1, k) y^k u^{dk} truncated at u^{n_max}.
    pub fn from_prime_counts(counts: &PrimeCounts, n_max: usize) -> Result<Self> {
        ensure!(counts.max_deg() >= n_max, Precondition, "prime counts stop at degree {}, need {n_max}", counts.max_deg());
        let mut rows: Vec<Vec<BigUint>> = (0..=n_max).map(|n| vec![BigUint::zero(); n + 1]).collect();
        rows[0][0] = BigUint::one();
        for d in 1..=n_max {
            let pi = counts.get(d);
            if pi.is_zero() {
                continue;
            }
            let kmax = n_max / d;
            // multisets of k irreducibles of degree d
            let mult: Vec<BigUint> = (0..=kmax as u64)
                .map(|k| if k == 0 { BigUint::one() } else { binomial_big(&(pi + BigUint::from(k) - 1u32), k) })
                .collect();
            for n in (d..=n_max).rev() {
                for t in (1..=n).rev() {
                    let mut acc = BigUint::zero();
                    for k in 1..=(n / d).min(t) {
                        let prev = &rows[n - k * d];
                        if t - k < prev.len() && !prev[t - k].is_zero() {
                            acc += &prev[t - k] * &mult[k];
                        }
                    }
                    rows[n][t] += acc;
                }
            }
        }
        Ok(OmegaCountTable { q: counts.q(), rows })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// N_t(n), zero for t > n.
    pub fn get(&self, n: usize, t: usize) -> BigUint {
        self.rows[n].get(t).cloned().unwrap_or_default()
    }

    /// The row (N_0(n), …, N_n(n)).
    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }

    /// Σ_t N_t(n) y^t.
    pub fn weighted_sum(&self, n: usize, y: &Weight) -> Result<WeightedValue> {
        ensure!(n <= self.n_max(), Precondition, "n = {n} exceeds table n_max = {}", self.n_max());
        Ok(match y {
            Weight::Rational(r) => WeightedValue::Exact(self.weighted_sum_exact(n, r)),
            Weight::Complex(z) => WeightedValue::Approx(self.weighted_sum_complex(n, *z)),
        })
    }

    pub fn weighted_sum_exact(&self, n: usize, y: &BigRational) -> BigRational {
        // Horner from the top degree in y
        self.rows[n]
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * y + BigRational::from_integer(BigInt::from(c.clone())))
    }

    pub fn weighted_sum_complex(&self, n: usize, y: Complex64) -> Complex64 {
        self.rows[n]
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * y + c.to_f64().unwrap_or(f64::INFINITY))
    }

    /// The truncated series ζ(u,y) = Σ_n (Σ_t N_t(n) y^t) u^n.
    pub fn zeta_series(&self, y: Complex64, trunc: usize) -> Result<ComplexSeries> {
        ensure!(trunc <= self.n_max(), Precondition, "trunc {trunc} exceeds table n_max {}", self.n_max());
        Ok(ComplexSeries::new((0..=trunc).map(|n| self.weighted_sum_complex(n, y)).collect()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts = self.rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        serde_json::to_value(TableJson { q: self.q, n_max: self.n_max(), counts }).expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: TableJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        ensure!(raw.counts.len() == raw.n_max + 1, Parse, "expected {} rows", raw.n_max + 1);
        let mut rows = Vec::with_capacity(raw.counts.len());
        for (n, r) in raw.counts.iter().enumerate() {
            ensure!(r.len() == n + 1, Parse, "row {n} has {} entries, expected {}", r.len(), n + 1);
            let parsed: Result<Vec<BigUint>> =
                r.iter().map(|s| s.parse::<BigUint>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))).collect();
            rows.push(parsed?);
        }
        Ok(OmegaCountTable { q: raw.q, rows })
    }
}

/// Ω-count table from a sieved irreducible table.
pub fn omega_count_table(table: &IrreducibleTable, n_max: usize) -> Result<OmegaCountTable> {
    ensure!(table.max_deg() >= n_max, Precondition, "table stops at degree {}, need {n_max}", table.max_deg());
    OmegaCountTable::from_prime_counts(&table.prime_counts(), n_max)
}

/// A power series in u truncated after u^trunc_deg.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSeries {
    coeffs: Vec<Complex64>,
}

impl ComplexSeries {
    /// The series with the given coefficients; trunc_deg = len − 1.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        ComplexSeries { coeffs }
    }

    pub fn zero(trunc: usize) -> Self {
        ComplexSeries { coeffs: vec![Complex64::zero(); trunc + 1] }
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(Complex64::one(), trunc)
    }

    pub fn constant(c: Complex64, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    /// Real polynomial given by ascending coefficients, padded or truncated.
    pub fn from_real(coeffs: &[f64], trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = Complex64::new(c, 0.0);
        }
        s
    }

    pub fn trunc_deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(trunc + 1, Complex64::zero());
        ComplexSeries { coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.trunc_deg().min(other.trunc_deg());
        ComplexSeries { coeffs: (0..=t).map(|n| self.coeffs[n] + other.coeffs[n]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let t = self.trunc_deg().min(other.trunc_deg());
        ComplexSeries { coeffs: (0..=t).map(|n| self.coeffs[n] - other.coeffs[n]).collect() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let t = self.trunc_deg().min(other.trunc_deg());
        let mut out = vec![Complex64::zero(); t + 1];
        for (i, a) in self.coeffs.iter().take(t + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(t + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexSeries { coeffs: out }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        ensure!(!c0.is_zero(), Precondition, "series inversion needs a nonzero constant term");
        let t = self.trunc_deg();
        let mut out = vec![Complex64::zero(); t + 1];
        out[0] = c0.inv();
        for n in 1..=t {
            let s: Complex64 = (1..=n).map(|k| self.coeffs[k] * out[n - k]).sum();
            out[n] = -s * out[0];
        }
        Ok(ComplexSeries { coeffs: out })
    }

    /// u ↦ λu.
    pub fn scale_var(&self, lambda: Complex64) -> Self {
        let mut p = Complex64::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * p;
                p *= lambda;
                v
            })
            .collect();
        ComplexSeries { coeffs }
    }

    /// u ↦ u^k, keeping the same truncation degree.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let t = self.trunc_deg();
        let mut out = vec![Complex64::zero(); t + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * k > t {
                break;
            }
            out[i * k] = *c;
        }
        ComplexSeries { coeffs: out }
    }

    pub fn derivative(&self) -> Self {
        let t = self.trunc_deg();
        if t == 0 {
            return Self::zero(0);
        }
        ComplexSeries { coeffs: (1..=t).map(|n| self.coeffs[n] * n as f64).collect() }
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        ensure!((self.coeffs[0] - 1.0).norm() < 1e-12, Precondition, "log needs constant term 1");
        let t = self.trunc_deg();
        let mut l = vec![Complex64::zero(); t + 1];
        for n in 1..=t {
            let mut acc = self.coeffs[n] * n as f64;
            for k in 1..n {
                acc -= l[k] * self.coeffs[n - k] * k as f64;
            }
            l[n] = acc / n as f64;
        }
        Ok(ComplexSeries { coeffs: l })
    }

    /// exp of a series; the constant term is exponentiated directly.
    pub fn exp(&self) -> Self {
        let t = self.trunc_deg();
        let mut b = vec![Complex64::zero(); t + 1];
        b[0] = self.coeffs[0].exp();
        for n in 1..=t {
            let mut acc = Complex64::zero();
            for k in 1..=n {
                acc += self.coeffs[k] * b[n - k] * k as f64;
            }
            b[n] = acc / n as f64;
        }
        ComplexSeries { coeffs: b }
    }

    /// Plain partial sum Σ c_n u0^n.
    pub fn eval(&self, u0: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * u0 + c)
    }
}

/// Number of trailing terms used to measure a decay ratio and to bound the tail.
const TAIL_WINDOW: usize = 4;

fn term_magnitudes(s: &ComplexSeries, u0: Complex64) -> Vec<f64> {
    let r = u0.norm();
    let mut p = 1.0;
    s.coeffs
        .iter()
        .map(|c| {
            let v = c.norm() * p;
            p *= r;
            v
        })
        .collect()
}

/// Geometric decay ratio of the terms |c_n u0^n| measured from the largest
/// term in the last window against the largest in the window before it,
/// clamped to [`DECAY_CLAMP`]. Series too short to measure get the clamp.
pub fn measured_decay(s: &ComplexSeries, u0: Complex64) -> f64 {
    let mags = term_magnitudes(s, u0);
    let n = mags.len();
    if n < 2 * TAIL_WINDOW + 1 {
        return DECAY_CLAMP;
    }
    let last = mags[n - TAIL_WINDOW..].iter().cloned().fold(0.0, f64::max);
    let prev = mags[n - 2 * TAIL_WINDOW..n - TAIL_WINDOW].iter().cloned().fold(0.0, f64::max);
    if prev == 0.0 {
        return if last == 0.0 { 0.0 } else { DECAY_CLAMP };
    }
    (last / prev).powf(1.0 / TAIL_WINDOW as f64).min(DECAY_CLAMP)
}

/// Evaluates the truncated series at u0 and bounds the omitted tail by
/// M·decay/(1−decay), M being the largest of the last few terms (the very last
/// coefficient can vanish by accident, as a_1 does for 𝓝).
pub fn eval_with_tail(s: &ComplexSeries, u0: Complex64, decay: f64) -> Result<(Complex64, f64)> {
    ensure!(u0.norm() < 1.0, Precondition, "|u0| = {} is not inside the unit disc", u0.norm());
    ensure!((0.0..1.0).contains(&decay), Precondition, "decay {decay} must lie in [0, 1)");
    let mags = term_magnitudes(s, u0);
    let m = mags[mags.len().saturating_sub(TAIL_WINDOW)..].iter().cloned().fold(0.0, f64::max);
    Ok((s.eval(u0), m * decay / (1.0 - decay)))
}

/// [`eval_with_tail`] with the decay ratio measured from the series itself.
pub fn eval_measured(s: &ComplexSeries, u0: Complex64) -> Result<(Complex64, f64)> {
    eval_with_tail(s, u0, measured_decay(s, u0))
}

/// Coefficients of (1−qu)^{−y}: binom(y+n−1, n)·q^n by the rising factorial.
pub fn binomial_series(y: Complex64, q: u32, trunc: usize) -> ComplexSeries {
    let mut coeffs = Vec::with_capacity(trunc + 1);
    let mut c = Complex64::one();
    coeffs.push(c);
    for n in 1..=trunc {
        c = c * (y + (n - 1) as f64) / n as f64 * q as f64;
        coeffs.push(c);
    }
    ComplexSeries::new(coeffs)
}

/// 𝓝(u,y) = ζ(u,y)(1−qu)^y as the product of the table's ζ(u,y) with the
/// binomial series at −y.
pub fn n_series(tbl: &OmegaCountTable, y: Complex64, trunc: usize) -> Result<ComplexSeries> {
    let zeta = tbl.zeta_series(y, trunc)?;
    Ok(zeta.mul(&binomial_series(-y, tbl.q(), trunc)))
}

/// 𝓝(u,y) from its Euler product, through
/// log 𝓝 = Σ_d π(d) Σ_k (y^k − y) u^{dk}/k. Independent of the Ω table.
pub fn n_series_euler(counts: &PrimeCounts, y: Complex64, trunc: usize) -> Result<ComplexSeries> {
    ensure!(counts.max_deg() >= trunc, Precondition, "prime counts stop at degree {}, need {trunc}", counts.max_deg());
    let mut log = vec![Complex64::zero(); trunc + 1];
    for d in 1..=trunc {
        let pi = counts.get_f64(d);
        let mut yk = Complex64::one();
        for k in 1..=trunc / d {
            yk *= y;
            log[d * k] += (yk - y) * pi / k as f64;
        }
    }
    Ok(ComplexSeries::new(log).exp())
}

/// Partial Euler product Π_{d ≤ D} [(1−u0^d)^y (1−y u0^d)^{−1}]^{π(d)} of 𝓝
/// at a point, summed in logs with principal branches.
pub fn n_euler_partial(counts: &PrimeCounts, y: Complex64, u0: Complex64, max_deg: usize) -> Result<Complex64> {
    ensure!(counts.max_deg() >= max_deg, Precondition, "prime counts stop at degree {}, need {max_deg}", counts.max_deg());
    let mut log = Complex64::zero();
    let mut ud = Complex64::one();
    for d in 1..=max_deg {
        ud *= u0;
        let yu = y * ud;
        ensure!((yu - 1.0).norm() > 1e-300, Domain, "y·u0^{d} = 1 is a pole of the Euler factor");
        log += counts.get_f64(d) * (y * ln_1p(-ud) - ln_1p(-yu));
    }
    Ok(log.exp())
}

/// log(1+z) without cancellation for small z.
pub(crate) fn ln_1p(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        // six Taylor terms are exact to double precision here
        let mut term = z;
        let mut acc = Complex64::zero();
        for k in 1..=6 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            acc += term * (sign / k as f64);
            term *= z;
        }
        acc
    } else {
        (z + 1.0).ln()
    }
}
