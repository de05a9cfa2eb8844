//! Flag value parsing shared by the subcommands.

use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;

use fqdist::character::ModulusCtx;
use fqdist::{FieldSpec, MonicPoly};

use crate::CliError;

/// "re,im", "a/b" or a plain decimal.
pub fn parse_y(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number {t:?} in y = {s:?}"));
    if let Some((re, im)) = s.split_once(',') {
        return Ok(Complex64::new(num(re)?, num(im)?));
    }
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (num(a)?, num(b)?);
        if b == 0.0 {
            return Err(format!("zero denominator in y = {s:?}"));
        }
        return Ok(Complex64::new(a / b, 0.0));
    }
    Ok(Complex64::new(num(s)?, 0.0))
}

/// "a..b", inclusive.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

/// F_q, with an explicit defining polynomial over F_p when given.
pub fn field(q: u64, ext_modulus: Option<&str>) -> Result<FieldSpec, CliError> {
    let Some(m) = ext_modulus else {
        return Ok(FieldSpec::with_order(q)?);
    };
    let digits: Vec<u32> = m
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("bad coefficient {t:?} in --ext-modulus"))))
        .collect::<Result<_, _>>()?;
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| CliError::Usage(format!("bad field size {q}")))?;
    let (mut r, mut f) = (q, 0u32);
    while r % p == 0 {
        r /= p;
        f += 1;
    }
    if r != 1 {
        return Err(CliError::Usage(format!("{q} is not a prime power")));
    }
    Ok(FieldSpec::extension(p as u32, f, Some(digits))?)
}

pub fn modulus(k: &FieldSpec, text: &str) -> Result<Arc<ModulusCtx>, CliError> {
    let m = MonicPoly::parse(text, k)?;
    if m.deg() == 0 {
        return Err(CliError::Usage("the modulus Q must have positive degree".into()));
    }
    Ok(Arc::new(ModulusCtx::new(k, &m)?))
}

/// Degrees from --n or --n-range; exactly one must be present.
pub fn degrees(n: Option<usize>, range: Option<&RangeInclusive<usize>>) -> Result<Vec<usize>, CliError> {
    match (n, range) {
        (Some(n), None) => Ok(vec![n]),
        (None, Some(r)) => Ok(r.clone().collect()),
        (Some(_), Some(_)) => Err(CliError::Usage("give either --n or --n-range, not both".into())),
        (None, None) => Err(CliError::Usage("one of --n or --n-range is required".into())),
    }
}
