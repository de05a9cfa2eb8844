//! Roots of complex polynomials: companion-matrix eigenvalues with an Aberth
//! fallback, followed by Newton polishing.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{ensure, Error, Result};

/// Σ c_i u^i and its derivative.
pub fn horner(coeffs: &[Complex64], u: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * u + p;
        p = p * u + c;
    }
    (p, dp)
}

/// |p(u)| relative to Σ |c_i| |u|^i.
pub fn relative_residual(coeffs: &[Complex64], u: Complex64) -> f64 {
    let (p, _) = horner(coeffs, u);
    let scale: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * u.norm() + c.norm());
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

fn trimmed(coeffs: &[Complex64]) -> &[Complex64] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].norm() == 0.0 {
        n -= 1;
    }
    &coeffs[..n]
}

fn companion_roots(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-15, 10_000)?;
    let (_, t) = schur.unpack();
    Some((0..deg).map(|i| t[(i, i)]).collect())
}

/// Simultaneous Aberth–Ehrlich iteration.
fn aberth_roots(c: &[Complex64], max_iter: usize) -> Vec<Complex64> {
    let deg = c.len() - 1;
    // initial guesses on a circle of the Cauchy-bound radius, slightly rotated
    let lead = c[deg].norm();
    let radius = 1.0 + c[..deg].iter().map(|x| x.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..deg).map(|k| Complex64::from_polar(radius * 0.5, std::f64::consts::TAU * (k as f64 + 0.25) / deg as f64)).collect();
    for _ in 0..max_iter {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn newton_polish(c: &[Complex64], z: Complex64) -> Complex64 {
    let mut z = z;
    for _ in 0..8 {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        let next = z - step;
        if relative_residual(c, next) >= relative_residual(c, z) {
            break;
        }
        z = next;
    }
    z
}

/// Averages roots that lie within `radius` of each other. A multiple root
/// comes back from the eigenvalue solver as a small cluster whose mean is far
/// more accurate than any member.
pub fn merge_clusters(roots: &[Complex64], radius: f64) -> Vec<Complex64> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() < radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut out = roots.to_vec();
    for i in 0..n {
        let r = find(&mut parent, i);
        let members: Vec<usize> = (0..n).filter(|&j| find(&mut parent, j) == r).collect();
        if members.len() > 1 {
            out[i] = members.iter().map(|&j| roots[j]).sum::<Complex64>() / members.len() as f64;
        }
    }
    out
}

/// All roots of Σ c_i u^i (ascending coefficients) with relative residual
/// below `tol`. A polynomial that is constant has no roots; the zero
/// polynomial is rejected.
pub fn poly_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let c = trimmed(coeffs);
    ensure!(!c.is_empty(), Domain, "the zero polynomial has no finite root set");
    if c.len() == 1 {
        return Ok(Vec::new());
    }
    let ok = |z: &[Complex64]| z.iter().all(|&u| relative_residual(c, u) < tol);
    let mut roots = companion_roots(c).unwrap_or_default().into_iter().map(|z| newton_polish(c, z)).collect::<Vec<_>>();
    if roots.len() != c.len() - 1 || !ok(&roots) {
        roots = aberth_roots(c, 500).into_iter().map(|z| newton_polish(c, z)).collect();
    }
    if !ok(&roots) {
        let worst = roots.iter().map(|&u| relative_residual(c, u)).fold(0.0, f64::max);
        return Err(Error::Internal(format!("root finding residual {worst:e} exceeds {tol:e}")));
    }
    Ok(roots)
}
