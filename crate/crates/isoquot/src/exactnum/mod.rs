//! Exact scalar and univariate-polynomial arithmetic: big rationals, dense
//! polynomials, quotient rings with inversion, and cyclotomic fields.

pub mod cyclo;
pub mod poly;
pub mod residue;

pub use cyclo::{cyclotomic_poly, Cyclo, CycloField};
pub use poly::Polynomial;
pub use residue::{invert_mod, pow_mod, ResidueElement};
