//! Quotient-ring arithmetic: residues modulo a fixed univariate polynomial.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::poly::Polynomial;
use crate::scalar::Scalar;

/// A fully reduced representative modulo `modulus`.
#[derive(Clone, PartialEq, Debug)]
pub struct ResidueElement<T: Scalar> {
    rep: Polynomial<T>,
    modulus: Arc<Polynomial<T>>,
}

impl<T: Scalar> ResidueElement<T> {
    pub fn new(rep: Polynomial<T>, modulus: Arc<Polynomial<T>>) -> Self {
        assert!(
            modulus.degree().map_or(false, |d| d >= 1),
            "modulus must have degree at least 1"
        );
        let rep = rep.rem(&modulus);
        ResidueElement { rep, modulus }
    }

    pub fn rep(&self) -> &Polynomial<T> {
        &self.rep
    }

    pub fn modulus(&self) -> &Arc<Polynomial<T>> {
        &self.modulus
    }

    pub fn zero(modulus: Arc<Polynomial<T>>) -> Self {
        ResidueElement::new(Polynomial::zero(), modulus)
    }

    pub fn one(modulus: Arc<Polynomial<T>>) -> Self {
        ResidueElement::new(Polynomial::one(), modulus)
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        ResidueElement::new(self.rep.add(&other.rep), self.modulus.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        ResidueElement::new(self.rep.sub(&other.rep), self.modulus.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        ResidueElement::new(self.rep.mul(&other.rep), self.modulus.clone())
    }
}

/// Inverse modulo the modulus via extended Euclid.
///
/// Fails with [`Error::NotInvertible`] when gcd(rep, modulus) is non-constant,
/// which signals a zero divisor in the quotient ring.
pub fn invert_mod<T: Scalar>(f: &ResidueElement<T>) -> Result<ResidueElement<T>> {
    let (g, s, _) = f.rep().ext_gcd(f.modulus());
    if g.degree() != Some(0) {
        return Err(Error::NotInvertible);
    }
    // ext_gcd returns g monic, so g = 1 and s * rep = 1 (mod modulus).
    Ok(ResidueElement::new(s, f.modulus().clone()))
}

/// Repeated-squaring exponentiation in the quotient ring; `e = 0` yields 1,
/// negative exponents go through [`invert_mod`].
pub fn pow_mod<T: Scalar>(f: &ResidueElement<T>, e: i64) -> Result<ResidueElement<T>> {
    if e < 0 {
        let inv = invert_mod(f)?;
        return pow_mod(&inv, -e);
    }
    let mut acc = ResidueElement::one(f.modulus().clone());
    let mut base = f.clone();
    let mut e = e as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    Ok(acc)
}
