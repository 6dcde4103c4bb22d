//! Truncated multivariate formal power series with exact coefficients.
//!
//! A [`MultiSeries`] carries an ordered list of variables, each with an
//! optional truncation order (`None` means the variable is an honest
//! polynomial variable, used for the auxiliary `t`). Terms are stored
//! sparsely; no stored coefficient is zero and no stored exponent exceeds
//! its variable's truncation order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{binom, q_int, Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarSpec {
    pub name: &'static str,
    pub trunc: Option<u32>,
}

impl VarSpec {
    pub fn truncated(name: &'static str, order: u32) -> Self {
        VarSpec {
            name,
            trunc: Some(order),
        }
    }

    pub fn polynomial(name: &'static str) -> Self {
        VarSpec { name, trunc: None }
    }
}

#[derive(Clone, PartialEq)]
pub struct MultiSeries<T: Scalar> {
    vars: Vec<VarSpec>,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> MultiSeries<T> {
    pub fn zero(vars: Vec<VarSpec>) -> Self {
        MultiSeries {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<VarSpec>, c: T) -> Self {
        let mut s = MultiSeries::zero(vars);
        if !c.is_zero() {
            s.terms.insert(vec![0; s.vars.len()], c);
        }
        s
    }

    pub fn one(vars: Vec<VarSpec>) -> Self {
        MultiSeries::constant(vars, T::one())
    }

    /// The variable at `idx` as a series.
    pub fn var(vars: Vec<VarSpec>, idx: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        MultiSeries::monomial(vars, exps, T::one())
    }

    pub fn monomial(vars: Vec<VarSpec>, exps: Vec<u32>, c: T) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut s = MultiSeries::zero(vars);
        s.insert_term(exps, c);
        s
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn within_trunc(&self, exps: &[u32]) -> bool {
        exps.iter()
            .zip(&self.vars)
            .all(|(e, v)| v.trunc.map_or(true, |t| *e <= t))
    }

    fn insert_term(&mut self, exps: Vec<u32>, c: T) {
        if c.is_zero() || !self.within_trunc(&exps) {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    fn assert_same_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "series variable mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiSeries {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = MultiSeries::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if !out.within_trunc(&exps) {
                    continue;
                }
                out.insert_term(exps, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &T) -> Self {
        if c.is_zero() {
            return MultiSeries::zero(self.vars.clone());
        }
        MultiSeries {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn constant_term(&self) -> T {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn coefficient(&self, exps: &[u32]) -> T {
        assert_eq!(exps.len(), self.vars.len());
        self.terms.get(exps).cloned().unwrap_or_else(T::zero)
    }

    /// Multiplicative inverse up to truncation. Requires an invertible
    /// constant term; every variable appearing in a non-constant term must
    /// be truncated, otherwise the geometric series would not terminate.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.try_inverse().ok_or(Error::NonUnitConstantTerm)?;
        // r = 1 - c0^{-1} * self has zero constant term.
        let normalized = self.mul_scalar(&c0_inv);
        let r = MultiSeries::one(self.vars.clone()).sub(&normalized);
        for e in r.terms.keys() {
            for (k, v) in self.vars.iter().enumerate() {
                assert!(
                    e[k] == 0 || v.trunc.is_some(),
                    "cannot invert a series in the untruncated variable {}",
                    v.name
                );
            }
        }
        let mut acc = MultiSeries::one(self.vars.clone());
        let mut power = MultiSeries::one(self.vars.clone());
        loop {
            power = power.mul(&r);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.mul_scalar(&c0_inv))
    }

    /// Integer power; negative exponents go through [`MultiSeries::invert`].
    pub fn pow_i(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.invert()?.pow_i(-e);
        }
        let mut acc = MultiSeries::one(self.vars.clone());
        let mut base = self.clone();
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

    /// Partial derivative with respect to the variable at `idx`.
    pub fn derive(&self, idx: usize) -> Self {
        let mut out = MultiSeries::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[idx] -= 1;
            let mut coeff = T::zero();
            for _ in 0..e[idx] {
                coeff = coeff + c.clone();
            }
            out.insert_term(exps, coeff);
        }
        out
    }

    /// The operator `x d/dx` for the variable at `idx`: each term is scaled
    /// by its exponent. Exact, no truncation loss.
    pub fn scale_by_exponent(&self, idx: usize) -> Self {
        let mut out = MultiSeries::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut coeff = T::zero();
            for _ in 0..e[idx] {
                coeff = coeff + c.clone();
            }
            out.insert_term(e.clone(), coeff);
        }
        out
    }

    /// Diagonal substitution: the variables at `i` and `j` become a single
    /// variable (kept at position `i`, named `name`), truncated at the
    /// minimum of the two orders.
    pub fn diagonal(&self, i: usize, j: usize, name: &'static str) -> Self {
        assert!(i != j);
        let ti = self.vars[i].trunc;
        let tj = self.vars[j].trunc;
        let merged = match (ti, tj) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        };
        let mut vars = self.vars.clone();
        vars[i] = VarSpec {
            name,
            trunc: merged,
        };
        vars.remove(j);
        let mut out = MultiSeries::zero(vars);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps[i] = e[i] + e[j];
            exps.remove(j);
            out.insert_term(exps, c.clone());
        }
        out
    }

    /// Substitute 1 for the variable at `idx` (it disappears).
    pub fn set_var_one(&self, idx: usize) -> Self {
        let mut vars = self.vars.clone();
        vars.remove(idx);
        let mut out = MultiSeries::zero(vars);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps.remove(idx);
            out.insert_term(exps, c.clone());
        }
        out
    }

    /// Largest exponent of the variable at `idx` among stored terms.
    pub fn max_exponent(&self, idx: usize) -> u32 {
        self.terms.keys().map(|e| e[idx]).max().unwrap_or(0)
    }

    /// Exact division by the variable at `idx`: every term must carry it.
    pub fn div_exact_var(&self, idx: usize) -> Result<Self> {
        let mut out = MultiSeries::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                return Err(Error::NonUnitDenominator);
            }
            let mut exps = e.clone();
            exps[idx] -= 1;
            out.insert_term(exps, c.clone());
        }
        Ok(out)
    }

    /// Full evaluation: substitute a point for every variable.
    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (k, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term * point[k].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Evaluation into another scalar domain through the prime field.
    pub fn eval_in<S: Scalar>(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let q = c
                .as_rational()
                .expect("coefficient does not embed into target scalar");
            let mut term = S::from_rational(&q);
            for (k, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term * point[k].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Re-embed the coefficients into another scalar domain.
    pub fn map_scalar<S: Scalar>(&self) -> MultiSeries<S> {
        MultiSeries {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let q = c
                        .as_rational()
                        .expect("coefficient does not embed into target scalar");
                    (e.clone(), S::from_rational(&q))
                })
                .collect(),
        }
    }

    /// The generalized binomial expansion `(1 + x_idx)^alpha` truncated at
    /// the variable's order (which must be finite).
    pub fn binomial(vars: Vec<VarSpec>, idx: usize, alpha: &Rational) -> Self {
        let order = vars[idx]
            .trunc
            .expect("binomial expansion needs a truncated variable");
        let mut s = MultiSeries::zero(vars);
        for k in 0..=order {
            let c = binom(alpha, k);
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0; s.vars.len()];
            exps[idx] = k;
            s.insert_term(exps, T::from_rational(&c));
        }
        s
    }
}

/// `(1+q)^alpha` as a univariate series in `q` up to `order`.
pub fn binomial_series(alpha: &Rational, order: u32) -> MultiSeries<Rational> {
    MultiSeries::binomial(vec![VarSpec::truncated("q", order)], 0, alpha)
}

/// Univariate polynomial in `q` (order `trunc`) from integer coefficients,
/// lowest degree first.
pub fn q_poly(coeffs: &[i64], trunc: u32) -> MultiSeries<Rational> {
    let vars = vec![VarSpec::truncated("q", trunc)];
    let mut s = MultiSeries::zero(vars);
    for (k, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            s.insert_term(vec![k as u32], q_int(c));
        }
    }
    s
}

impl<T: Scalar> fmt::Debug for MultiSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (k, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    write!(f, "*{}^{}", self.vars[k].name, exp)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_ratio;
    use proptest::prelude::*;

    fn qvar(order: u32) -> Vec<VarSpec> {
        vec![VarSpec::truncated("q", order)]
    }

    #[test]
    fn binomial_examples() {
        let s = binomial_series(&q_int(1), 3);
        assert_eq!(s.coefficient(&[0]), q_int(1));
        assert_eq!(s.coefficient(&[1]), q_int(1));
        assert_eq!(s.coefficient(&[2]), q_int(0));

        let s = binomial_series(&q_ratio(1, 2), 2);
        assert_eq!(s.coefficient(&[1]), q_ratio(1, 2));
        assert_eq!(s.coefficient(&[2]), q_ratio(-1, 8));

        let s = binomial_series(&q_int(-1), 3);
        assert_eq!(s.coefficient(&[2]), q_int(1));
        assert_eq!(s.coefficient(&[3]), q_int(-1));
    }

    #[test]
    fn geometric_coefficient() {
        // [q^3] 1/(1-q) = 1 at order 5.
        let one_minus_q = q_poly(&[1, -1], 5);
        let inv = one_minus_q.invert().unwrap();
        assert_eq!(inv.coefficient(&[3]), q_int(1));
    }

    #[test]
    fn diagonal_example() {
        let vars = vec![
            VarSpec::truncated("q1", 3),
            VarSpec::truncated("q2", 3),
        ];
        let s = MultiSeries::monomial(vars, vec![1, 1], q_int(1));
        let d = s.diagonal(0, 1, "q");
        assert_eq!(d.coefficient(&[2]), q_int(1));
        assert_eq!(d.vars()[0].trunc, Some(3));
    }

    #[test]
    fn g1_style_extraction() {
        // [q^4] of 4(1-q)^3 / ((1-q)^4 - q^4) = 8.
        let num = q_poly(&[1, -1], 4).pow_i(3).unwrap().mul_scalar(&q_int(4));
        let den = q_poly(&[1, -4, 6, -4], 4);
        let f = num.mul(&den.invert().unwrap());
        assert_eq!(f.coefficient(&[4]), q_int(8));
    }

    #[test]
    fn invert_rejects_nonunit() {
        let s = q_poly(&[0, 1], 4);
        assert!(s.invert().is_err());
    }

    #[test]
    fn derive_then_integrate_recovers() {
        let f = q_poly(&[3, -2, 7, 5, -1], 6);
        let df = f.derive(0);
        // integrate coefficientwise
        let mut g = MultiSeries::zero(qvar(6));
        for (e, c) in df.terms() {
            let k = e[0] + 1;
            g = g.add(&MultiSeries::monomial(
                qvar(6),
                vec![k],
                c / q_int(k as i64),
            ));
        }
        let f_minus_const = f.sub(&MultiSeries::constant(qvar(6), f.constant_term()));
        assert_eq!(g, f_minus_const);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn mul_is_associative_up_to_truncation(
            a in proptest::collection::vec(-5i64..6, 1..5),
            b in proptest::collection::vec(-5i64..6, 1..5),
            c in proptest::collection::vec(-5i64..6, 1..5),
        ) {
            let (fa, fb, fc) = (q_poly(&a, 6), q_poly(&b, 6), q_poly(&c, 6));
            prop_assert_eq!(fa.mul(&fb).mul(&fc), fa.mul(&fb.mul(&fc)));
        }

        #[test]
        fn invert_is_right_inverse(
            mut a in proptest::collection::vec(-5i64..6, 1..6),
        ) {
            if a[0] == 0 { a[0] = 1; }
            let f = q_poly(&a, 6);
            let inv = f.invert().unwrap();
            prop_assert_eq!(f.mul(&inv), MultiSeries::one(qvar(6)));
        }

        #[test]
        fn binomial_vandermonde(
            an in -9i64..10, ad in 1i64..7,
            bn in -9i64..10, bd in 1i64..7,
        ) {
            let a = q_ratio(an, ad);
            let b = q_ratio(bn, bd);
            let lhs = binomial_series(&a, 8).mul(&binomial_series(&b, 8));
            let rhs = binomial_series(&(a + b), 8);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
