//! Unit groups modulo Q, Dirichlet characters and their L-functions.

pub mod classes;
pub mod cyclotomic;
pub mod dirichlet;
pub mod lpoly;
pub mod modulus;
mod snf;
pub mod weighted;

pub use classes::ClassPrimeCounts;
pub use cyclotomic::{CharValue, CycloSum};
pub use dirichlet::{char_eval, characters, DirichletChar};
pub use lpoly::{l_polynomial, l_principal_check, l_special_values, LPoly, PrincipalCheck, SpecialValues};
pub use modulus::ModulusCtx;
pub use weighted::{l_weighted_series, l_weighted_series_direct};
