//! Complex log-Γ from the Stirling formula with the sawtooth remainder
//! integral, plus an independent Lanczos evaluation, 1/Γ, Beta and κ(y,n).

use num_complex::Complex64;
use num_traits::{One, Zero};
use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};
use crate::series::ln_1p;

/// Numerical knobs for [`log_gamma_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaConfig {
    /// Sub-interval width of the Gauss–Legendre route, at most 1.
    pub quadrature_step: f64,
    /// Asymptotic tail terms smaller than this are dropped.
    pub tail_cutoff: f64,
    /// Allowed relative gap between the Stirling and Lanczos values.
    pub lanczos_check_tol: f64,
}

impl Default for GammaConfig {
    fn default() -> Self {
        GammaConfig { quadrature_step: 0.25, tail_cutoff: 1e-17, lanczos_check_tol: 1e-9 }
    }
}

impl GammaConfig {
    fn validate(&self) -> Result<()> {
        ensure!(
            self.quadrature_step > 0.0 && self.quadrature_step <= 1.0,
            Precondition,
            "quadrature_step {} must lie in (0, 1]",
            self.quadrature_step
        );
        ensure!(self.tail_cutoff > 0.0, Precondition, "tail_cutoff must be positive");
        ensure!(self.lanczos_check_tol > 0.0, Precondition, "lanczos_check_tol must be positive");
        Ok(())
    }
}

/// Unit pieces are summed explicitly until |z| reaches this, then the
/// asymptotic series takes over.
const SHIFT_RADIUS: f64 = 15.0;

/// B_{2j} / (2j(2j−1)) for j = 1..8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

fn half_log_two_pi() -> f64 {
    0.5 * (2.0 * PI).ln()
}

fn check_off_cut(s: Complex64) -> Result<()> {
    ensure!(s.is_finite(), Domain, "argument {s} is not finite");
    ensure!(!(s.im == 0.0 && s.re <= 0.0), Domain, "{s} lies on the branch cut (−∞, 0]");
    Ok(())
}

/// ∫_0^1 (t − 1/2)/(z + t) dt = 1 − (z + 1/2)·log(1 + 1/z).
fn sawtooth_piece(z: Complex64) -> Complex64 {
    Complex64::one() - (z + 0.5) * ln_1p(z.inv())
}

/// ∫_0^∞ B_1(t)/(z+t) dt ~ −Σ_j B_{2j}/(2j(2j−1) z^{2j−1}) for large |z|.
fn sawtooth_tail(z: Complex64, cutoff: f64) -> Complex64 {
    let zinv = z.inv();
    let zinv2 = zinv * zinv;
    let mut pow = zinv;
    let mut acc = Complex64::zero();
    for c in STIRLING_COEFFS {
        let term = pow * c;
        acc -= term;
        if term.norm() < cutoff {
            break;
        }
        pow *= zinv2;
    }
    acc
}

/// J(s) = ∫_0^∞ B_1(t)/(s+t) dt with B_1 the 1-periodic sawtooth, each unit
/// piece in closed form.
pub fn sawtooth_integral(s: Complex64, cfg: &GammaConfig) -> Result<Complex64> {
    check_off_cut(s)?;
    cfg.validate()?;
    let mut z = s;
    let mut acc = Complex64::zero();
    while z.norm() < SHIFT_RADIUS {
        acc += sawtooth_piece(z);
        z += 1.0;
    }
    Ok(acc + sawtooth_tail(z, cfg.tail_cutoff))
}

const GAUSS_NODES: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GAUSS_WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

/// J(s) with each unit piece integrated by 8-point Gauss–Legendre over
/// sub-intervals of width `quadrature_step`. Meant for Re s ≳ 1, where the
/// integrand is smooth on every piece.
pub fn sawtooth_integral_quadrature(s: Complex64, cfg: &GammaConfig) -> Result<Complex64> {
    check_off_cut(s)?;
    cfg.validate()?;
    let subdivisions = (1.0 / cfg.quadrature_step).ceil() as usize;
    let h = 1.0 / subdivisions as f64;
    let mut z = s;
    let mut acc = Complex64::zero();
    while z.norm() < SHIFT_RADIUS {
        for j in 0..subdivisions {
            let mid = (j as f64 + 0.5) * h;
            for (x, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
                for t in [mid - 0.5 * h * x, mid + 0.5 * h * x] {
                    acc += (t - 0.5) / (z + t) * (0.5 * h * w);
                }
            }
        }
        z += 1.0;
    }
    Ok(acc + sawtooth_tail(z, cfg.tail_cutoff))
}

fn stirling_main(s: Complex64) -> Complex64 {
    (s - 0.5) * s.ln() - s + half_log_two_pi()
}

/// Principal branch of log Γ(s) for s off (−∞, 0]:
/// (s − 1/2) log s − s + log(2π)/2 − J(s).
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    log_gamma_with(s, &GammaConfig::default())
}

pub fn log_gamma_with(s: Complex64, cfg: &GammaConfig) -> Result<Complex64> {
    Ok(stirling_main(s) - sawtooth_integral(s, cfg)?)
}

/// Same as [`log_gamma_with`] but through [`sawtooth_integral_quadrature`].
pub fn log_gamma_quadrature(s: Complex64, cfg: &GammaConfig) -> Result<Complex64> {
    Ok(stirling_main(s) - sawtooth_integral_quadrature(s, cfg)?)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// log Γ(s) by the Lanczos approximation (g = 7, nine terms), with the
/// reflection formula for Re s < 1/2. The branch agrees with [`log_gamma`]
/// for Re s ≥ 1/2; elsewhere only up to multiples of 2πi.
pub fn lanczos_log_gamma(s: Complex64) -> Result<Complex64> {
    check_off_cut(s)?;
    if s.re < 0.5 {
        let sin = (s * PI).sin();
        ensure!(sin.norm() > 0.0, Domain, "Γ has a pole at {s}");
        return Ok(Complex64::new(PI.ln(), 0.0) - sin.ln() - lanczos_log_gamma(Complex64::one() - s)?);
    }
    let z = s - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(half_log_two_pi() + (z + 0.5) * t.ln() - t + x.ln())
}

/// [`log_gamma_with`], failing with an internal error when the Lanczos
/// value differs by more than `lanczos_check_tol` (compared through
/// exp of the difference, so branch offsets of 2πi do not count).
pub fn log_gamma_checked(s: Complex64, cfg: &GammaConfig) -> Result<Complex64> {
    let v = log_gamma_with(s, cfg)?;
    let w = lanczos_log_gamma(s)?;
    let gap = ((v - w).exp() - 1.0).norm();
    if gap > cfg.lanczos_check_tol {
        return Err(Error::Internal(format!("log Γ({s}): Stirling and Lanczos differ by {gap:e}")));
    }
    Ok(v)
}

/// 1/Γ(s), entire. Arguments left of Re s = 1/2 are shifted up through
/// 1/Γ(s) = s(s+1)⋯(s+m−1)/Γ(s+m), so the zeros at 0, −1, … come out exact.
pub fn recip_gamma(s: Complex64) -> Result<Complex64> {
    ensure!(s.is_finite(), Domain, "argument {s} is not finite");
    let mut z = s;
    let mut prod = Complex64::one();
    while z.re < 0.5 {
        prod *= z;
        z += 1.0;
    }
    if prod.is_zero() {
        return Ok(Complex64::zero());
    }
    Ok(prod * (-log_gamma(z)?).exp())
}

/// B(x,y) = Γ(x)Γ(y)/Γ(x+y) for Re x, Re y > 0.
pub fn beta(x: Complex64, y: Complex64) -> Result<Complex64> {
    ensure!(x.re > 0.0 && y.re > 0.0, Precondition, "Beta needs positive real parts, got {x} and {y}");
    Ok((log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?).exp())
}

/// κ(y,n) = exp(−(1−y)∫_0^∞ B_1(t)/((n−1+y+t)(n+t)) dt). Partial fractions
/// turn the integral into J(n−1+y) − J(n), so κ = exp(J(n) − J(n−1+y)),
/// which is exactly 1 at y = 1.
pub fn kappa(y: Complex64, n: u64) -> Result<Complex64> {
    ensure!(n >= 2, Precondition, "κ needs n ≥ 2, got {n}");
    let a = y + (n - 1) as f64;
    let b = Complex64::new(n as f64, 0.0);
    if a == b {
        return Ok(Complex64::one());
    }
    ensure!(!(a.im == 0.0 && a.re <= 0.0), Domain, "n − 1 + y = {a} lies on the branch cut");
    let cfg = GammaConfig::default();
    Ok((sawtooth_integral(b, &cfg)? - sawtooth_integral(a, &cfg)?).exp())
}
