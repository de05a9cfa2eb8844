//! Dirichlet characters modulo Q and their exact evaluation.

use std::sync::Arc;

use num_integer::Integer;

use super::cyclotomic::CharValue;
use super::modulus::ModulusCtx;
use crate::error::{ensure, Result};
use crate::poly::{MonicPoly, Poly};

/// χ determined by its exponent vector: χ(g_i) = e^{2πi·a_i/e_i}.
#[derive(Clone, Debug)]
pub struct DirichletChar {
    ctx: Arc<ModulusCtx>,
    expo: Vec<u64>,
}

impl PartialEq for DirichletChar {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.expo == other.expo
    }
}

impl DirichletChar {
    pub fn new(ctx: &Arc<ModulusCtx>, expo: Vec<u64>) -> Result<Self> {
        ensure!(expo.len() == ctx.orders().len(), Precondition, "expected {} exponents, got {}", ctx.orders().len(), expo.len());
        for (a, e) in expo.iter().zip(ctx.orders()) {
            ensure!(a < e, Precondition, "exponent {a} out of range for a cyclic factor of order {e}");
        }
        Ok(DirichletChar { ctx: Arc::clone(ctx), expo })
    }

    pub fn principal(ctx: &Arc<ModulusCtx>) -> Self {
        DirichletChar { ctx: Arc::clone(ctx), expo: vec![0; ctx.orders().len()] }
    }

    pub fn ctx(&self) -> &Arc<ModulusCtx> {
        &self.ctx
    }

    pub fn expo(&self) -> &[u64] {
        &self.expo
    }

    pub fn is_principal(&self) -> bool {
        self.expo.iter().all(|&a| a == 0)
    }

    pub fn conj(&self) -> Self {
        let expo = self.expo.iter().zip(self.ctx.orders()).map(|(&a, &e)| (e - a) % e).collect();
        DirichletChar { ctx: Arc::clone(&self.ctx), expo }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.ctx, &other.ctx), "characters to different moduli");
        let expo = self.expo.iter().zip(&other.expo).zip(self.ctx.orders()).map(|((&a, &b), &e)| (a + b) % e).collect();
        DirichletChar { ctx: Arc::clone(&self.ctx), expo }
    }

    /// Order of χ in the character group.
    pub fn order(&self) -> u64 {
        self.expo.iter().zip(self.ctx.orders()).fold(1u64, |acc, (&a, &e)| acc.lcm(&(e / a.gcd(&e))))
    }

    /// Numerator k of χ(unit) = ζ_E^k with E the group exponent.
    pub fn unit_exponent(&self, id: u32) -> u64 {
        let big_e = self.ctx.exponent();
        let x = self.ctx.dlog(id);
        let mut k = 0u128;
        for ((&a, &xi), &e) in self.expo.iter().zip(&x).zip(self.ctx.orders()) {
            k += a as u128 * xi as u128 * (big_e / e) as u128;
        }
        (k % big_e as u128) as u64
    }

    /// [`DirichletChar::unit_exponent`] for every unit id.
    pub fn unit_exponents(&self) -> Vec<u64> {
        (0..self.ctx.phi() as u32).map(|id| self.unit_exponent(id)).collect()
    }

    pub fn value_of_unit(&self, id: u32) -> CharValue {
        CharValue::root(self.unit_exponent(id), self.ctx.exponent())
    }

    pub fn eval_poly(&self, f: &Poly) -> CharValue {
        match self.ctx.unit_id(f) {
            Some(id) => self.value_of_unit(id),
            None => CharValue::Zero,
        }
    }

    /// χ(f): zero when f shares a factor with Q.
    pub fn eval(&self, f: &MonicPoly) -> CharValue {
        self.eval_poly(f.as_poly())
    }

    /// Short label such as `chi[1,0]`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.expo.iter().map(|a| a.to_string()).collect();
        format!("chi[{}]", parts.join(","))
    }
}

/// All Φ(Q) characters, principal first, in mixed-radix order of exponents.
pub fn characters(ctx: &Arc<ModulusCtx>) -> impl Iterator<Item = DirichletChar> + '_ {
    (0..ctx.phi() as u32).map(move |id| DirichletChar { ctx: Arc::clone(ctx), expo: ctx.dlog(id) })
}

/// χ(f) as an exact token.
pub fn char_eval(chi: &DirichletChar, f: &MonicPoly) -> CharValue {
    chi.eval(f)
}
