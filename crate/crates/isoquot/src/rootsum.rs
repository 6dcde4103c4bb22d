//! Exact summation of rational-function values over the N-th roots of unity
//! excluding +-1.
//!
//! Two independent engines are shipped and cross-checked against each other:
//! single-variable sums via quotient-ring traces (rational arithmetic only),
//! and direct cyclotomic enumeration, which also powers the pair sums. The
//! module takes the root-set order as an argument and never interprets any
//! geometry; the symmetric-family callers simply pass `N - 2`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, CycloField, Polynomial};
use crate::scalar::{q_int, Rational, Scalar};
use crate::series::{MultiSeries, VarSpec};

/// A ratio of two univariate polynomials over Q.
#[derive(Clone, Debug)]
pub struct RationalFunctionUni {
    pub num: Polynomial<Rational>,
    pub den: Polynomial<Rational>,
}

impl RationalFunctionUni {
    pub fn new(num: Polynomial<Rational>, den: Polynomial<Rational>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RationalFunctionUni { num, den }
    }

    pub fn from_poly(num: Polynomial<Rational>) -> Self {
        RationalFunctionUni::new(num, Polynomial::one())
    }

    pub fn eval_cyclo(&self, z: &Cyclo) -> Result<Cyclo> {
        let den = self.den.eval_in::<Cyclo>(z);
        let den_inv = den.inverse().ok_or(Error::DenominatorVanishesAtRoot)?;
        Ok(self.num.eval_in::<Cyclo>(z) * den_inv)
    }
}

/// `P(z) = (z^N - 1)/(z^2 - 1) = z^{N-2} + z^{N-4} + ... + 1`, the monic
/// polynomial whose roots are exactly the N-th roots of unity other than +-1.
pub fn root_set_poly(n: u32) -> Polynomial<Rational> {
    assert!(n >= 4 && n % 2 == 0, "root-set order must be even and >= 4");
    let mut coeffs = vec![Rational::zero(); (n - 1) as usize];
    let mut k = 0usize;
    while k <= (n - 2) as usize {
        coeffs[k] = Rational::one();
        k += 2;
    }
    Polynomial::new(coeffs)
}

/// Power sum over the excluded-root set:
/// sum of zeta^k over zeta^N = 1, zeta != +-1, which equals
/// `N * [N | k] - 1 - (-1)^k`.
pub fn power_sum(n: u32, k: u32) -> Rational {
    assert!(n >= 4 && n % 2 == 0);
    let all = if k % n == 0 { q_int(n as i64) } else { Rational::zero() };
    let minus_one = if k % 2 == 0 { q_int(1) } else { q_int(-1) };
    all - q_int(1) - minus_one
}

/// Trace engine: reduces `F` modulo `P(z) = (z^N-1)/(z^2-1)` (inverting the
/// denominator in the quotient ring) and takes the trace of the reduced
/// representative through [`power_sum`]. Exact rational output.
pub fn sum_rational_over_roots(n: u32, f: &RationalFunctionUni) -> Result<Rational> {
    let p = root_set_poly(n);
    let g = f.den.gcd(&p);
    if g.degree() != Some(0) {
        return Err(Error::DenominatorVanishesAtRoot);
    }
    let (_, s, _) = f.den.ext_gcd(&p);
    // s * den = 1 (mod p)
    let reduced = f.num.mul(&s).rem(&p);
    let mut acc = Rational::zero();
    for (k, c) in reduced.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc += c * power_sum(n, k as u32);
        }
    }
    Ok(acc)
}

/// Enumeration engine: evaluates `F` at every admissible root inside
/// Q(zeta_N) and sums. The result is Galois-stable, hence rational.
pub fn sum_rational_over_roots_enum(n: u32, f: &RationalFunctionUni) -> Result<Rational> {
    assert!(n >= 4 && n % 2 == 0);
    let field = CycloField::new(n);
    let mut acc = Cyclo::zero();
    for k in 1..n {
        if k == n / 2 {
            continue;
        }
        let z = Cyclo::zeta_pow(&field, k as i64);
        acc = acc + f.eval_cyclo(&z)?;
    }
    acc.as_rational().ok_or(Error::NonRationalResult)
}

/// A symmetric bivariate rational function over Q, as a ratio of dense
/// bivariate polynomials (carried by untruncated two-variable series).
#[derive(Clone, Debug)]
pub struct RationalFunctionBi {
    pub num: MultiSeries<Rational>,
    pub den: MultiSeries<Rational>,
}

/// Variable block for bivariate numerators/denominators.
pub fn bivar() -> Vec<VarSpec> {
    vec![VarSpec::polynomial("z1"), VarSpec::polynomial("z2")]
}

impl RationalFunctionBi {
    pub fn new(num: MultiSeries<Rational>, den: MultiSeries<Rational>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RationalFunctionBi { num, den }
    }

    pub fn from_poly(num: MultiSeries<Rational>) -> Self {
        RationalFunctionBi::new(num, MultiSeries::one(bivar()))
    }

    pub fn eval_cyclo(&self, z1: &Cyclo, z2: &Cyclo) -> Result<Cyclo> {
        let point = [z1.clone(), z2.clone()];
        let den = self.den.eval_in::<Cyclo>(&point);
        let den_inv = den.inverse().ok_or(Error::DenominatorVanishesAtPair)?;
        Ok(self.num.eval_in::<Cyclo>(&point) * den_inv)
    }
}

/// Pair enumeration: sums `G(zeta^a, zeta^b)` over the unordered pairs of
/// N-th roots of unity `{w1, w2}` with `w1 != +-w2`, canonicalized by
/// exponent pairs `(a, b)` with `a < b`, each pair visited exactly once.
/// Asserts the sum lies in Q.
pub fn sum_over_pairs(n: u32, g: &RationalFunctionBi) -> Result<Rational> {
    assert!(n >= 2 && n % 2 == 0);
    let field = CycloField::new(n);
    let mut acc = Cyclo::zero();
    for a in 0..n {
        for b in (a + 1)..n {
            if b - a == n / 2 {
                continue;
            }
            let z1 = Cyclo::zeta_pow(&field, a as i64);
            let z2 = Cyclo::zeta_pow(&field, b as i64);
            acc = acc + g.eval_cyclo(&z1, &z2)?;
        }
    }
    acc.as_rational().ok_or(Error::NonRationalResult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_ratio;

    fn poly(coeffs: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(coeffs.iter().map(|&c| q_int(c)).collect())
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum(4, 0), q_int(2));
        assert_eq!(power_sum(4, 1), q_int(0));
        assert_eq!(power_sum(4, 4), q_int(2));
        assert_eq!(power_sum(6, 3), q_int(0));
        assert_eq!(power_sum(6, 2), q_int(-2));
    }

    #[test]
    fn power_sum_periodicity() {
        // The closed form is periodic in k mod N.
        for n in [4u32, 6, 8, 10, 12] {
            for k in 0..3 * n {
                assert_eq!(power_sum(n, k), power_sum(n, k % n), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn trace_engine_examples() {
        let one = RationalFunctionUni::from_poly(poly(&[1]));
        assert_eq!(sum_rational_over_roots(4, &one).unwrap(), q_int(2));

        let z = RationalFunctionUni::from_poly(poly(&[0, 1]));
        assert_eq!(sum_rational_over_roots(4, &z).unwrap(), q_int(0));

        // 1/(1-z)^2 summed over {i, -i} is 0.
        let f = RationalFunctionUni::new(poly(&[1]), poly(&[1, -1]).pow(2));
        assert_eq!(sum_rational_over_roots(4, &f).unwrap(), q_int(0));
    }

    #[test]
    fn trace_engine_detects_poles() {
        // 1/(z^2+1) has poles at the primitive 4th roots.
        let f = RationalFunctionUni::new(poly(&[1]), poly(&[1, 0, 1]));
        assert_eq!(
            sum_rational_over_roots(4, &f),
            Err(Error::DenominatorVanishesAtRoot)
        );
    }

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state
    }

    fn random_rational_function(state: &mut u64) -> RationalFunctionUni {
        // Numerator: random degree <= 5. Denominator: a product of factors
        // (z - c) with c off the unit circle, so no poles at roots of P.
        let num = Polynomial::new(
            (0..=5)
                .map(|_| q_int((xorshift(state) % 21) as i64 - 10))
                .collect(),
        );
        let candidates = [q_int(2), q_int(3), q_int(-2), q_ratio(1, 2), q_ratio(-3, 2)];
        let mut den = Polynomial::one();
        for _ in 0..(xorshift(state) % 3) {
            let c = candidates[(xorshift(state) % 5) as usize].clone();
            den = den.mul(&Polynomial::new(vec![-c, Rational::one()]));
        }
        let num = if num.is_zero() { poly(&[1]) } else { num };
        RationalFunctionUni::new(num, den)
    }

    #[test]
    fn engines_agree_on_random_functions() {
        let mut state = 0xdeadbeefcafe1234u64;
        for count in 0..50 {
            let n = 4 + 2 * (xorshift(&mut state) % 5) as u32; // 4..=12 even
            let f = random_rational_function(&mut state);
            let a = sum_rational_over_roots(n, &f).unwrap();
            let b = sum_rational_over_roots_enum(n, &f).unwrap();
            assert_eq!(a, b, "engine disagreement at n={n}, case {count}");
        }
    }

    #[test]
    fn pair_sum_examples() {
        let one = RationalFunctionBi::from_poly(MultiSeries::one(bivar()));
        assert_eq!(sum_over_pairs(4, &one).unwrap(), q_int(4));

        // z1*z2 over {1,i},{1,-i},{-1,i},{-1,-i}: i - i - i + i = 0.
        let z1z2 = RationalFunctionBi::from_poly(MultiSeries::monomial(
            bivar(),
            vec![1, 1],
            q_int(1),
        ));
        assert_eq!(sum_over_pairs(4, &z1z2).unwrap(), q_int(0));

        // (z1+z2)^2 over the four pairs: 2i - 2i - 2i + 2i = 0.
        let s = MultiSeries::var(bivar(), 0).add(&MultiSeries::var(bivar(), 1));
        let g = RationalFunctionBi::from_poly(s.pow_i(2).unwrap());
        assert_eq!(sum_over_pairs(4, &g).unwrap(), q_int(0));
    }

    #[test]
    fn pair_sum_detects_poles() {
        // 1/(z1^2 + 1) vanishes at z1 = i, which occurs in admissible pairs.
        let den = MultiSeries::monomial(bivar(), vec![2, 0], q_int(1))
            .add(&MultiSeries::one(bivar()));
        let g = RationalFunctionBi::new(MultiSeries::one(bivar()), den);
        assert_eq!(sum_over_pairs(4, &g), Err(Error::DenominatorVanishesAtPair));
    }

    #[test]
    fn pair_count_sanity() {
        for n in [4u32, 6, 8, 10] {
            let one = RationalFunctionBi::from_poly(MultiSeries::one(bivar()));
            assert_eq!(
                sum_over_pairs(n, &one).unwrap(),
                q_int((n * (n - 2) / 2) as i64)
            );
        }
    }

    /// Homogenize `F(z2/z1)` symmetrically: `(F(z2/z1) + F(z1/z2)) / 2`.
    fn symmetrized_degree_zero(f: &RationalFunctionUni) -> RationalFunctionBi {
        let d = f
            .num
            .degree()
            .unwrap_or(0)
            .max(f.den.degree().unwrap_or(0));
        let hom = |p: &Polynomial<Rational>, first: usize, second: usize| {
            // z_first^d * p(z_second / z_first)
            let mut out = MultiSeries::zero(bivar());
            for (k, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut exps = vec![0u32; 2];
                exps[first] = (d - k) as u32;
                exps[second] = k as u32;
                out = out.add(&MultiSeries::monomial(bivar(), exps, c.clone()));
            }
            out
        };
        let p12 = hom(&f.num, 0, 1);
        let q12 = hom(&f.den, 0, 1);
        let p21 = hom(&f.num, 1, 0);
        let q21 = hom(&f.den, 1, 0);
        let num = p12
            .mul(&q21)
            .add(&p21.mul(&q12))
            .mul_scalar(&q_ratio(1, 2));
        let den = q12.mul(&q21);
        RationalFunctionBi::new(num, den)
    }

    #[test]
    fn pair_engine_reduces_to_single_root_engine() {
        // For G built from a degree-zero homogeneous F, the pair sum is
        // (N/2) times the single-root sum.
        let mut state = 0x123456789abcdefu64;
        for n in [4u32, 6, 8] {
            for _ in 0..6 {
                let f = random_rational_function(&mut state);
                let g = symmetrized_degree_zero(&f);
                let pair = sum_over_pairs(n, &g).unwrap();
                let single = sum_rational_over_roots(n, &f).unwrap();
                assert_eq!(pair, single * q_ratio(n as i64, 2), "n={n}");
            }
        }
    }
}
