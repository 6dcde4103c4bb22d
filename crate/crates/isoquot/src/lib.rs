//! Exact intersection theory of isotropic Quot schemes over curves.
//!
//! The crate computes, in exact rational/cyclotomic arithmetic:
//!
//! - virtual intersection numbers of `a`-classes on symplectic and symmetric
//!   isotropic Quot schemes (rank r = 1, 2) via root-of-unity closed forms,
//! - `f`-class intersections through a truncated-series operator engine,
//! - Gromov-Ruan-Witten invariants of `SG(2,2n)` and `OG(2,2n+2)` via
//!   quantum-cohomology residues, together with a symbolic verification of
//!   the underlying Jacobian determinant identity,
//! - genus-0 equivariant localization as an independent oracle, and the
//!   virtual Euler characteristic series it produces,
//! - cross-checks tying all of the above together (`verify`).
//!
//! The ring machinery ([`exactnum`], [`series`]) is generic over the scalar
//! type through the [`scalar::Scalar`] trait; the concrete instantiations
//! used everywhere are exact rationals and cyclotomic field elements. See
//! the type aliases at the crate root.

pub mod error;
pub mod exactnum;
pub mod fclass;
pub mod grw;
pub mod invariants;
pub mod localize;
pub mod rootsum;
pub mod scalar;
pub mod series;
pub mod symprod;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Rational;

/// Dense univariate polynomial with exact rational coefficients.
pub type QPolynomial = exactnum::Polynomial<Rational>;
/// Dense univariate polynomial over Q(zeta_N).
pub type CycloPolynomial = exactnum::Polynomial<exactnum::Cyclo>;
/// Truncated multivariate series with rational coefficients.
pub type QSeries = series::MultiSeries<Rational>;
/// Truncated multivariate series over Q(zeta_N).
pub type CycloSeries = series::MultiSeries<exactnum::Cyclo>;
