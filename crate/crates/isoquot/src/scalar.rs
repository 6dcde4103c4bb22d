//! The scalar abstraction all ring machinery is generic over.
//!
//! Polynomials, residue rings and truncated series take any [`Scalar`];
//! the two instantiations used throughout are [`Rational`] (arbitrary
//! precision, exact) and the cyclotomic field elements of
//! [`crate::exactnum::cyclo`]. Floating point types are deliberately not
//! given an instance: every result path is exact.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar, reduced with positive denominator by construction.
pub type Rational = BigRational;

/// Field-like exact scalar.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// Multiplicative inverse; `None` exactly for zero.
    fn try_inverse(&self) -> Option<Self>;

    /// Embedding of the prime field.
    fn from_rational(q: &Rational) -> Self;

    /// The rational number this scalar equals, if it lies in the prime field.
    fn as_rational(&self) -> Option<Rational>;
}

impl Scalar for Rational {
    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

pub fn q_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn q_ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `x^e` with negative exponents handled through the exact inverse.
pub fn q_pow(x: &Rational, e: i64) -> Rational {
    if e < 0 {
        assert!(!x.is_zero(), "zero cannot be raised to a negative power");
        q_pow(&x.recip(), -e)
    } else {
        let mut acc = Rational::one();
        let mut base = x.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

/// `(-1)^e` for any (possibly negative) integer exponent.
pub fn sign_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// Generalized binomial coefficient `C(alpha, k) = alpha (alpha-1) ... (alpha-k+1) / k!`.
pub fn binom(alpha: &Rational, k: u32) -> Rational {
    let mut num = Rational::one();
    for j in 0..k as i64 {
        num *= alpha - q_int(j);
    }
    num / factorial(k)
}

/// Binomial coefficient with an integer (possibly negative) top argument.
pub fn binom_int(n: i64, k: u32) -> Rational {
    binom(&q_int(n), k)
}

/// Serialize a rational as `p/q` in lowest terms, `p` when integral,
/// sign carried on the numerator.
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// log10 of |q| as a decimal with 12 digits; the only non-exact output of
/// the crate, used for plot data. Panics on zero.
pub fn log10_abs(q: &Rational) -> String {
    assert!(!q.is_zero(), "log10 of zero");
    let num = q.numer().abs().to_owned();
    let den = q.denom().abs().to_owned();
    let v = log10_bigint(&num) - log10_bigint(&den);
    format!("{v:.12}")
}

fn log10_bigint(n: &BigInt) -> f64 {
    let s = n.to_string();
    let digits = s.len();
    let take = digits.min(15);
    let lead: f64 = s[..take].parse::<f64>().unwrap();
    (digits - take) as f64 + lead.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(&q_ratio(1, 2), 2), q_ratio(-1, 8));
        assert_eq!(binom_int(-1, 3), q_int(-1));
        assert_eq!(binom_int(5, 2), q_int(10));
        assert_eq!(binom_int(4, 0), q_int(1));
    }

    #[test]
    fn powers() {
        assert_eq!(q_pow(&q_int(2), 10), q_int(1024));
        assert_eq!(q_pow(&q_int(2), -2), q_ratio(1, 4));
        assert_eq!(sign_pow(-1), q_int(-1));
        assert_eq!(sign_pow(-2), q_int(1));
    }

    #[test]
    fn serialization() {
        assert_eq!(rational_string(&q_ratio(-3, 6)), "-1/2");
        assert_eq!(rational_string(&q_int(7)), "7");
        assert_eq!(rational_string(&q_ratio(4, 2)), "2");
    }

    #[test]
    fn canonical_form_is_stable_under_round_trips() {
        let mut x = q_ratio(3, 4);
        for k in 1..50i64 {
            x = x + q_ratio(k, k + 1);
            x = x * q_ratio(k + 2, 5);
            let normalized = Rational::new(x.numer().clone(), x.denom().clone());
            assert_eq!(x, normalized);
            assert!(x.denom() > &BigInt::from(0));
        }
    }

    #[test]
    fn log10_of_big_values() {
        assert_eq!(log10_abs(&q_int(1000)), "3.000000000000");
        let s = log10_abs(&q_int(-85856));
        assert!(s.starts_with("4.93"), "{s}");
    }
}
