//! Test-side reference arithmetic over prime fields, deliberately separate
//! from the library: dense little-endian coefficient vectors, schoolbook
//! division, trial factoring.

use num_complex::Complex64;

pub type P = Vec<u32>;

fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &P) -> isize {
    a.len() as isize - 1
}

/// The i-th monic polynomial of degree d, low digits first in base p.
pub fn monic(p: u32, d: usize, mut i: u64) -> P {
    let mut a = Vec::with_capacity(d + 1);
    for _ in 0..d {
        a.push((i % p as u64) as u32);
        i /= p as u64;
    }
    a.push(1);
    a
}

pub fn all_monic(p: u32, d: usize) -> impl Iterator<Item = P> {
    (0..(p as u64).pow(d as u32)).map(move |i| monic(p, d, i))
}

fn inv(p: u32, a: u32) -> u32 {
    (1..p).find(|b| a * b % p == 1).expect("nonzero element")
}

/// (quotient, remainder) of a by b.
pub fn divmod(p: u32, a: &P, b: &P) -> (P, P) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = inv(p, *b.last().unwrap());
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * lead_inv % p;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        r = trim(r);
    }
    (q, r)
}

pub fn rem(p: u32, a: &P, b: &P) -> P {
    divmod(p, a, b).1
}

pub fn gcd_is_one(p: u32, a: &P, b: &P) -> bool {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let r = rem(p, &x, &y);
        x = y;
        y = r;
    }
    x.len() == 1
}

/// Ω(f) by trial division with monic polynomials of increasing degree; any
/// divisor found this way is irreducible.
pub fn omega(p: u32, f: &P) -> usize {
    let mut f = trim(f.clone());
    let mut count = 0;
    let mut d = 1;
    while deg(&f) >= 2 * d as isize {
        for g in all_monic(p, d) {
            loop {
                let (q, r) = divmod(p, &f, &g);
                if !r.is_empty() {
                    break;
                }
                f = q;
                count += 1;
            }
        }
        d += 1;
    }
    if deg(&f) > 0 {
        count += 1;
    }
    count
}

pub fn is_irreducible(p: u32, f: &P) -> bool {
    deg(f) > 0 && omega(p, f) == 1
}

/// Monic divisors of f, by testing every monic polynomial of degree ≤ deg f.
pub fn monic_divisors(p: u32, f: &P) -> Vec<P> {
    let n = deg(f) as usize;
    (0..=n).flat_map(|d| all_monic(p, d)).filter(|g| rem(p, f, g).is_empty()).collect()
}

/// Residues mod Q coprime to Q, as remainders.
pub fn reduced_residues(p: u32, modulus: &P) -> Vec<P> {
    let m = deg(modulus) as usize;
    let mut out = vec![];
    for d in 0..m {
        for i in 0..(p as u64).pow(d as u32) * (p as u64 - 1) {
            // degree-d residues with any nonzero leading coefficient
            let lead = (i / (p as u64).pow(d as u32)) as u32 + 1;
            let mut a = monic(p, d, i % (p as u64).pow(d as u32));
            a[d] = lead;
            if gcd_is_one(p, &a, modulus) {
                out.push(a);
            }
        }
    }
    out
}

/// Φ² 𝕍[τ(f;∘,Q)] = Φ Σ_h τ_h² − τ², by enumerating divisors.
pub fn phi_sq_variance(p: u32, f: &P, modulus: &P, residues: &[P]) -> i128 {
    let mut counts = vec![0i128; residues.len()];
    for d in monic_divisors(p, f) {
        if !gcd_is_one(p, &d, modulus) {
            continue;
        }
        let r = rem(p, &d, modulus);
        let h = residues.iter().position(|x| *x == r).expect("coprime residue");
        counts[h] += 1;
    }
    let phi = residues.len() as i128;
    phi * counts.iter().map(|c| c * c).sum::<i128>() - counts.iter().sum::<i128>().pow(2)
}

/// Möbius function by trial division.
pub fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// π(d) = (1/d) Σ_{e|d} μ(e) q^{d/e}, in f64 (exact for the degrees used).
pub fn prime_count(q: u32, d: usize) -> f64 {
    let s: f64 = (1..=d as u64).filter(|e| d as u64 % e == 0).map(|e| mobius(e) as f64 * (q as f64).powi((d as u64 / e) as i32)).sum();
    s / d as f64
}

/// Σ_{f∈A_n} y^{Ω(f)} for n = 0..=n_max from log Π_d (1 − y u^d)^{−π(d)}.
pub fn weighted_sums(q: u32, y: f64, n_max: usize) -> Vec<f64> {
    let mut log = vec![0.0; n_max + 1];
    for d in 1..=n_max {
        let pd = prime_count(q, d);
        let mut k = 1;
        while d * k <= n_max {
            log[d * k] += pd * y.powi(k as i32) / k as f64;
            k += 1;
        }
    }
    // exp of a series with zero constant term: n b_n = Σ k a_k b_{n−k}
    let mut b = vec![0.0; n_max + 1];
    b[0] = 1.0;
    for n in 1..=n_max {
        b[n] = (1..=n).map(|k| k as f64 * log[k] * b[n - k]).sum::<f64>() / n as f64;
    }
    b
}

/// ln Γ(z) for Re z ≥ 8 from the Stirling series with ten Bernoulli terms.
pub fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    const B: [f64; 10] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
    ];
    assert!(z.re >= 8.0);
    let mut s = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln();
    let z2 = z * z;
    let mut zp = z;
    for (j, b) in B.iter().enumerate() {
        let k = 2.0 * (j + 1) as f64;
        s += b / (k * (k - 1.0)) / zp;
        zp *= z2;
    }
    s
}

/// ln Γ(z) for any z off the poles: shift up to Re ≥ 8, then Stirling.
pub fn ln_gamma(mut z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < 8.0 {
        acc -= z.ln();
        z += 1.0;
    }
    acc + stirling_ln_gamma(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(omega(2, &vec![0, 0, 1]), 2);
        assert_eq!(omega(2, &vec![1, 1, 1]), 1);
        assert_eq!(all_monic(3, 2).filter(|f| is_irreducible(3, f)).count(), 3);
        assert_eq!(reduced_residues(2, &vec![1, 1, 1]).len(), 3);
        assert_eq!(reduced_residues(2, &vec![0, 1, 1]).len(), 1);
        assert!((ln_gamma(Complex64::new(0.5, 0.0)).re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-13);
    }
}
