//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Elements are residues modulo the N-th cyclotomic polynomial (a field),
//! never modulo `z^N - 1` (which has zero divisors), so inversion is
//! unconditional away from zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::exactnum::poly::Polynomial;
use crate::scalar::{Rational, Scalar};

/// The N-th cyclotomic polynomial, computed by dividing `z^N - 1` by the
/// cyclotomic polynomials of the proper divisors of N.
pub fn cyclotomic_poly(n: u32) -> Polynomial<Rational> {
    assert!(n >= 1);
    let mut cache: BTreeMap<u32, Polynomial<Rational>> = BTreeMap::new();
    cyclotomic_cached(n, &mut cache)
}

fn cyclotomic_cached(n: u32, cache: &mut BTreeMap<u32, Polynomial<Rational>>) -> Polynomial<Rational> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut phi = Polynomial::zn_minus_one(n);
    for d in 1..n {
        if n % d == 0 {
            let pd = cyclotomic_cached(d, cache);
            phi = phi.div_exact(&pd);
        }
    }
    cache.insert(n, phi.clone());
    phi
}

/// The field Q(zeta_n): its order and minimal polynomial.
#[derive(Debug)]
pub struct CycloField {
    n: u32,
    modulus: Polynomial<Rational>,
}

impl CycloField {
    pub fn new(n: u32) -> Arc<CycloField> {
        Arc::new(CycloField {
            n,
            modulus: cyclotomic_poly(n),
        })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &Polynomial<Rational> {
        &self.modulus
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

/// An element of Q(zeta_N) for the N fixed by `field`.
///
/// The `field` is `None` for plain rational constants, which lets the type
/// satisfy the context-free `Zero`/`One` contracts; constants promote when
/// combined with a genuine cyclotomic element.
#[derive(Clone)]
pub struct Cyclo {
    rep: Polynomial<Rational>,
    field: Option<Arc<CycloField>>,
}

impl Cyclo {
    pub fn rational(q: Rational) -> Self {
        Cyclo {
            rep: Polynomial::constant(q),
            field: None,
        }
    }

    /// The chosen primitive N-th root of unity.
    pub fn zeta(field: &Arc<CycloField>) -> Self {
        Cyclo {
            rep: Polynomial::x().rem(field.modulus()),
            field: Some(field.clone()),
        }
    }

    /// `zeta^k` for any integer exponent, reduced modulo the minimal polynomial.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let k = k.rem_euclid(field.n as i64) as usize;
        Cyclo {
            rep: Polynomial::monomial(Rational::one(), k).rem(field.modulus()),
            field: Some(field.clone()),
        }
    }

    pub fn field(&self) -> Option<&Arc<CycloField>> {
        self.field.as_ref()
    }

    pub fn rep(&self) -> &Polynomial<Rational> {
        &self.rep
    }

    fn promote(&self, field: &Arc<CycloField>) -> Cyclo {
        match &self.field {
            Some(f) => {
                assert_eq!(f.n, field.n, "mixed cyclotomic fields");
                self.clone()
            }
            None => Cyclo {
                rep: self.rep.clone(),
                field: Some(field.clone()),
            },
        }
    }

    fn unified(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo, Option<Arc<CycloField>>) {
        match (&a.field, &b.field) {
            (Some(f), _) => (a.clone(), b.promote(f), Some(f.clone())),
            (None, Some(f)) => (a.promote(f), b.clone(), Some(f.clone())),
            (None, None) => (a.clone(), b.clone(), None),
        }
    }

    fn reduced(rep: Polynomial<Rational>, field: Option<Arc<CycloField>>) -> Cyclo {
        let rep = match &field {
            Some(f) => rep.rem(f.modulus()),
            None => rep,
        };
        Cyclo { rep, field }
    }

    pub fn inverse(&self) -> Option<Cyclo> {
        if self.rep.is_zero() {
            return None;
        }
        match &self.field {
            None => {
                let c = self.rep.coeff(0);
                Some(Cyclo::rational(c.recip()))
            }
            Some(f) => {
                let (g, s, _) = self.rep.ext_gcd(f.modulus());
                // The modulus is irreducible over Q, so the gcd of any
                // nonzero residue with it is 1.
                assert_eq!(g.degree(), Some(0));
                Some(Cyclo::reduced(s, Some(f.clone())))
            }
        }
    }

    pub fn pow(&self, e: i64) -> Cyclo {
        if e < 0 {
            return self
                .inverse()
                .expect("zero cannot be raised to a negative power")
                .pow(-e);
        }
        let mut acc = Cyclo::rational(Rational::one());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    pub fn is_rational(&self) -> bool {
        self.rep.is_constant()
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: Cyclo) -> Cyclo {
        let (a, b, f) = Cyclo::unified(&self, &rhs);
        Cyclo::reduced(a.rep.add(&b.rep), f)
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: Cyclo) -> Cyclo {
        let (a, b, f) = Cyclo::unified(&self, &rhs);
        Cyclo::reduced(a.rep.sub(&b.rep), f)
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: Cyclo) -> Cyclo {
        let (a, b, f) = Cyclo::unified(&self, &rhs);
        Cyclo::reduced(a.rep.mul(&b.rep), f)
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            rep: self.rep.neg(),
            field: self.field,
        }
    }
}

impl Zero for Cyclo {
    fn zero() -> Self {
        Cyclo::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl One for Cyclo {
    fn one() -> Self {
        Cyclo::rational(Rational::one())
    }
}

impl Scalar for Cyclo {
    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }

    fn from_rational(q: &Rational) -> Self {
        Cyclo::rational(q.clone())
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.rep.coeff(0))
        } else {
            None
        }
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::residue::{invert_mod, pow_mod, ResidueElement};
    use crate::scalar::{q_int, q_ratio};

    fn poly(coeffs: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(coeffs.iter().map(|&c| q_int(c)).collect())
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_poly(1), poly(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), poly(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), poly(&[1, -1, 1]));
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        fn totient(n: u32) -> usize {
            (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count()
        }
        for n in 1..=24 {
            assert_eq!(cyclotomic_poly(n).degree(), Some(totient(n)), "N = {n}");
        }
    }

    #[test]
    fn invert_mod_examples() {
        let m = Arc::new(poly(&[1, 0, 1])); // z^2 + 1
        let one = ResidueElement::new(poly(&[1]), m.clone());
        assert_eq!(invert_mod(&one).unwrap(), one);

        let z = ResidueElement::new(poly(&[0, 1]), m.clone());
        let minus_z = ResidueElement::new(poly(&[0, -1]), m.clone());
        assert_eq!(invert_mod(&z).unwrap(), minus_z);

        let zm1 = ResidueElement::new(poly(&[-1, 1]), m.clone());
        let expected = ResidueElement::new(
            Polynomial::new(vec![q_ratio(-1, 2), q_ratio(-1, 2)]),
            m.clone(),
        );
        assert_eq!(invert_mod(&zm1).unwrap(), expected);
    }

    #[test]
    fn invert_mod_detects_zero_divisors() {
        // Modulo z^4 - 1 the element z^2 - 1 shares the factor z^2 - 1.
        let m = Arc::new(Polynomial::zn_minus_one(4));
        let f = ResidueElement::new(poly(&[-1, 0, 1]), m);
        assert!(invert_mod(&f).is_err());
    }

    #[test]
    fn pow_mod_examples() {
        let m = Arc::new(poly(&[1, 0, 1]));
        let z = ResidueElement::new(poly(&[0, 1]), m.clone());
        assert_eq!(pow_mod(&z, 4).unwrap(), ResidueElement::one(m.clone()));
        assert_eq!(pow_mod(&z, 0).unwrap(), ResidueElement::one(m.clone()));
        let minus_z = ResidueElement::new(poly(&[0, -1]), m.clone());
        assert_eq!(pow_mod(&z, -1).unwrap(), minus_z);
    }

    #[test]
    fn zeta_powers() {
        let f = CycloField::new(4);
        let i = Cyclo::zeta(&f);
        assert_eq!(i.clone() * i.clone(), Cyclo::rational(q_int(-1)));
        assert_eq!(Cyclo::zeta_pow(&f, -1), i.pow(3));
        assert!(Cyclo::zeta_pow(&f, 0).is_rational());
    }

    #[test]
    fn field_axiom_spot_checks() {
        // (a*b)*a^{-1} = b for pseudo-random pairs in Q(zeta_N), N <= 12.
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in 3..=12u32 {
            let field = CycloField::new(n);
            let deg = field.modulus().degree().unwrap();
            for _ in 0..10 {
                let a = Cyclo::reduced(
                    Polynomial::new(
                        (0..deg)
                            .map(|_| q_int((next() % 19) as i64 - 9))
                            .collect(),
                    ),
                    Some(field.clone()),
                );
                let b = Cyclo::reduced(
                    Polynomial::new(
                        (0..deg)
                            .map(|_| q_int((next() % 19) as i64 - 9))
                            .collect(),
                    ),
                    Some(field.clone()),
                );
                if a.is_zero() {
                    continue;
                }
                let ainv = a.inverse().unwrap();
                assert_eq!((a.clone() * b.clone()) * ainv, b);
            }
        }
    }
}
