//! Monic polynomials over finite fields: Ω-factor counts, Dirichlet characters,
//! L-polynomials, divisor-distribution variances and the asymptotic main terms
//! that describe them.

pub mod error;
pub mod factor;
pub mod field;
pub mod irreducible;
pub mod json;
pub mod asymptotics;
pub mod character;
pub mod divisor;
pub mod poly;
pub mod roots;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use factor::{factorize, Factorization};
pub use field::{FieldElem, FieldSpec};
pub use irreducible::{IrreducibleTable, PrimeCounts};
pub use poly::{enumerate_monic, MonicPoly, Poly};
