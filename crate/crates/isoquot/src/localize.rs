//! Genus-zero equivariant virtual localization: fixed-locus enumeration,
//! exact equivariant Euler/Chern classes of the virtual normal bundle,
//! intersection numbers as an independent oracle, and the virtual Euler
//! characteristic series.
//!
//! Intersection numbers of degree-exact insertions are literally free of
//! the equivariant parameter, so the oracle evaluates at two numeric
//! rational parameters and insists they agree. The Euler characteristic
//! integrand mixes all cohomological degrees and its localization sum is a
//! genuinely nonconstant rational function of the parameter; that engine
//! reconstructs the per-locus dependence exactly and reads off the value
//! at zero, with the cancellation of all pole terms as the consistency
//! check.

use rayon::prelude::*;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::invariants::Form;
use crate::scalar::{binom_int, q_int, q_ratio, sign_pow, Rational};
use crate::series::{MultiSeries, VarSpec};

/// Torus weights: `w_i = -w_{i+n}` for the first half, pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    w: Vec<i64>,
}

impl WeightAssignment {
    pub fn new(w: Vec<i64>) -> Self {
        let n = w.len() / 2;
        assert_eq!(w.len(), 2 * n, "weight vector must have even length");
        for i in 0..n {
            assert_eq!(w[i], -w[i + n], "weights must satisfy w_i = -w_(i+n)");
        }
        for i in 0..w.len() {
            for j in (i + 1)..w.len() {
                assert_ne!(w[i], w[j], "weights must be pairwise distinct");
            }
        }
        WeightAssignment { w }
    }

    /// The default `(1, 2, ..., n, -1, -2, ..., -n)`.
    pub fn standard(n_bundle: u32) -> Self {
        let n = (n_bundle / 2) as i64;
        let mut w: Vec<i64> = (1..=n).collect();
        w.extend((1..=n).map(|k| -k));
        WeightAssignment::new(w)
    }

    pub fn weights(&self) -> &[i64] {
        &self.w
    }
}

/// A torus-fixed component: bundle positions (0-based) and the degree of
/// the line-bundle factor sitting at each position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLocus {
    pub positions: Vec<usize>,
    pub degrees: Vec<u32>,
}

/// Enumerates all fixed loci: position subsets with no antipodal pair
/// (isotropy) times compositions of `d`. The count is
/// `2^r C(n, r) C(d+r-1, r-1)`.
pub fn enumerate_fixed_loci(n_bundle: u32, r: u32, d: u32) -> Vec<FixedLocus> {
    let n = (n_bundle / 2) as usize;
    assert!(r as usize <= n);
    let mut position_sets: Vec<Vec<usize>> = Vec::new();
    let mut class_sets = Vec::new();
    choose_classes(n, r as usize, 0, &mut Vec::new(), &mut class_sets);
    for set in &class_sets {
        expand_signs(n, set, 0, &mut Vec::new(), &mut position_sets);
    }

    let mut out = Vec::new();
    for positions in &position_sets {
        for degrees in compositions_r(d, r as usize) {
            out.push(FixedLocus {
                positions: positions.clone(),
                degrees,
            });
        }
    }
    out
}

/// Choose r distinct weight classes out of n.
fn choose_classes(
    n: usize,
    r: usize,
    start: usize,
    acc: &mut Vec<usize>,
    sets: &mut Vec<Vec<usize>>,
) {
    if acc.len() == r {
        sets.push(acc.clone());
        return;
    }
    for c in start..n {
        acc.push(c);
        choose_classes(n, r, c + 1, acc, sets);
        acc.pop();
    }
}

/// Pick one of the two antipodal positions for every chosen class.
fn expand_signs(
    n: usize,
    classes: &[usize],
    idx: usize,
    acc: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if idx == classes.len() {
        out.push(acc.clone());
        return;
    }
    for sign in 0..2 {
        acc.push(classes[idx] + sign * n);
        expand_signs(n, classes, idx + 1, acc, out);
        acc.pop();
    }
}

fn compositions_r(d: u32, r: usize) -> Vec<Vec<u32>> {
    if r == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for rest in compositions_r(d - first, r - 1) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

fn xvars(degrees: &[u32]) -> Vec<VarSpec> {
    static NAMES: [&str; 4] = ["x1", "x2", "x3", "x4"];
    degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| VarSpec::truncated(NAMES[i], d))
        .collect()
}

/// A linear form `c0 + sum_i c_i x_i` as a series.
fn linear_form(vars: &[VarSpec], c0: Rational, coeffs: &[(usize, i64)]) -> MultiSeries<Rational> {
    let mut s = MultiSeries::constant(vars.to_vec(), c0);
    for &(idx, c) in coeffs {
        if c != 0 {
            s = s.add(&MultiSeries::var(vars.to_vec(), idx).mul_scalar(&q_int(c)));
        }
    }
    s
}

/// The factors of the virtual normal bundle at a genus-0 locus: the linear
/// form (weight times t0 plus cohomology part), the virtual rank, and the
/// sign with which the factor enters `N^vir`.
fn normal_bundle_factors(
    locus: &FixedLocus,
    family: Form,
    weights: &WeightAssignment,
    t0: &Rational,
) -> Result<Vec<(MultiSeries<Rational>, i64, i64)>> {
    let vars = xvars(&locus.degrees);
    let w = weights.weights();
    let r = locus.positions.len();
    let n_bundle = w.len();
    let mut factors = Vec::new();

    // pi_! [L_i^dual], weights w_{k_i} - w_k, rank d_i + 1, sign +1
    for i in 0..r {
        for k in 0..n_bundle {
            if k == locus.positions[i] {
                continue;
            }
            let c0 = q_int(w[locus.positions[i]] - w[k]) * t0;
            factors.push((
                linear_form(&vars, c0, &[(i, 1)]),
                locus.degrees[i] as i64 + 1,
                1,
            ));
        }
    }
    // pi_! [L_i^dual tensor L_j], i != j, weight w_{k_i} - w_{k_j},
    // rank d_i - d_j + 1, sign -1
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let c0 = q_int(w[locus.positions[i]] - w[locus.positions[j]]) * t0;
            factors.push((
                linear_form(&vars, c0, &[(i, 1), (j, -1)]),
                locus.degrees[i] as i64 - locus.degrees[j] as i64 + 1,
                -1,
            ));
        }
    }
    // pi_! [L_i^dual tensor L_j^dual], i < j (wedge) or i <= j (sym),
    // weight w_{k_i} + w_{k_j}, rank d_i + d_j + 1, sign -1
    for i in 0..r {
        for j in i..r {
            if i == j && family == Form::Symplectic {
                continue;
            }
            let (form, rank) = if i == j {
                // L_i^dual ^ 2: Chern roots 2 x_i + 2 w t0, rank 2 d_i + 1
                (
                    linear_form(&vars, q_int(2 * w[locus.positions[i]]) * t0, &[(i, 2)]),
                    2 * locus.degrees[i] as i64 + 1,
                )
            } else {
                (
                    linear_form(
                        &vars,
                        q_int(w[locus.positions[i]] + w[locus.positions[j]]) * t0,
                        &[(i, 1), (j, 1)],
                    ),
                    locus.degrees[i] as i64 + locus.degrees[j] as i64 + 1,
                )
            };
            factors.push((form, rank, -1));
        }
    }
    for (form, _, _) in &factors {
        if form.constant_term().is_zero() {
            return Err(Error::DegenerateParameter);
        }
    }
    Ok(factors)
}

/// `1 / e_{C*}(N^vir)` at a locus, exactly, as a truncated series in the
/// locus coordinates with the equivariant parameter fixed at `t0`.
pub fn inverse_euler_g0(
    locus: &FixedLocus,
    family: Form,
    weights: &WeightAssignment,
    t0: &Rational,
) -> Result<MultiSeries<Rational>> {
    let vars = xvars(&locus.degrees);
    let mut acc = MultiSeries::one(vars);
    for (form, rank, sign) in normal_bundle_factors(locus, family, weights, t0)? {
        acc = acc.mul(&form.pow_i(-sign * rank).map_err(|_| Error::DegenerateParameter)?);
    }
    Ok(acc)
}

/// `c_{C*}(N^vir) / e_{C*}(N^vir)` at a locus: the product of
/// `((1 + l)/l)^{sign * rank}` over the factor families. Reference route
/// for the dense kernel; exercised by the cross-check tests.
#[cfg(test)]
fn chern_euler_ratio_g0(
    locus: &FixedLocus,
    family: Form,
    weights: &WeightAssignment,
    t0: &Rational,
) -> Result<MultiSeries<Rational>> {
    let vars = xvars(&locus.degrees);
    let mut acc = MultiSeries::one(vars.clone());
    for (form, rank, sign) in normal_bundle_factors(locus, family, weights, t0)? {
        if form
            .add(&MultiSeries::one(vars.clone()))
            .constant_term()
            .is_zero()
        {
            return Err(Error::DegenerateParameter);
        }
        let ratio = MultiSeries::one(vars.clone())
            .add(&form)
            .mul(&form.invert().map_err(|_| Error::DegenerateParameter)?);
        acc = acc.mul(&ratio.pow_i(sign * rank).map_err(|_| Error::DegenerateParameter)?);
    }
    Ok(acc)
}

/// Candidate equivariant parameters; factors with the standard weights are
/// never degenerate at these, but the engines skip bad candidates anyway.
const T0_CANDIDATES: [(i64, i64); 6] = [(1, 7), (1, 11), (1, 13), (1, 17), (1, 19), (1, 23)];

fn t0_sequence() -> impl Iterator<Item = Rational> {
    T0_CANDIDATES.iter().map(|&(p, q)| q_ratio(p, q))
}

/// Monomial insertion in the tautological classes `a_1`, `a_2` and the
/// fiber class `f_2`.
#[derive(Clone, Copy, Debug)]
pub struct InsertionMonomial {
    pub m1: u32,
    pub m2: u32,
    pub f2: u32,
}

fn oracle_value_at(
    n_bundle: u32,
    d: u32,
    ins: &InsertionMonomial,
    weights: &WeightAssignment,
    t0: &Rational,
) -> Result<Rational> {
    let loci = enumerate_fixed_loci(n_bundle, 2, d);
    let w = weights.weights();
    let mut total = Rational::zero();
    for locus in &loci {
        let vars = xvars(&locus.degrees);
        let y1 = linear_form(&vars, q_int(w[locus.positions[0]]) * t0, &[(0, 1)]);
        let y2 = linear_form(&vars, q_int(w[locus.positions[1]]) * t0, &[(1, 1)]);
        let a1 = y1.add(&y2);
        let a2 = y1.mul(&y2);
        let f2 = y2
            .mul_scalar(&q_int(locus.degrees[0] as i64))
            .add(&y1.mul_scalar(&q_int(locus.degrees[1] as i64)));
        let insertion = a1
            .pow_i(ins.m1 as i64)?
            .mul(&a2.pow_i(ins.m2 as i64)?)
            .mul(&f2.pow_i(ins.f2 as i64)?);
        let integrand = insertion.mul(&inverse_euler_g0(
            locus,
            Form::Symplectic,
            weights,
            t0,
        )?);
        total += integrand.coefficient(&[locus.degrees[0], locus.degrees[1]]);
    }
    Ok(total)
}

/// Localization oracle for genus-zero symplectic intersections of
/// `a_1^{m_1} a_2^{m_2} f_2^{mf}`: sums the fixed-locus contributions at two
/// distinct equivariant parameters and insists the results agree.
pub fn intersect_oracle_g0(
    n_bundle: u32,
    d: u32,
    ins: &InsertionMonomial,
) -> Result<Rational> {
    let vd = (n_bundle as i64 - 1) * d as i64 + (2 * n_bundle as i64 - 5);
    if ins.m1 as i64 + 2 * ins.m2 as i64 + ins.f2 as i64 != vd {
        return Err(Error::DegreeMismatch);
    }
    let weights = WeightAssignment::standard(n_bundle);
    let mut values = Vec::new();
    for t0 in t0_sequence() {
        match oracle_value_at(n_bundle, d, ins, &weights, &t0) {
            Ok(v) => values.push(v),
            Err(Error::DegenerateParameter) => continue,
            Err(e) => return Err(e),
        }
        if values.len() == 2 {
            break;
        }
    }
    if values.len() < 2 {
        return Err(Error::DegenerateParameter);
    }
    if values[0] != values[1] {
        return Err(Error::TIndependenceFailure);
    }
    Ok(values[0].clone())
}

#[cfg(test)]
fn evir_value_at(
    n_bundle: u32,
    r: u32,
    d: u32,
    family: Form,
    weights: &WeightAssignment,
    t0: &Rational,
) -> Result<Rational> {
    let loci = enumerate_fixed_loci(n_bundle, r, d);
    let mut total = Rational::zero();
    for locus in &loci {
        let vars = xvars(&locus.degrees);
        // c(T_fix) = prod (1 + x_i)^{d_i + 1}
        let mut integrand = MultiSeries::one(vars.clone());
        for (i, &di) in locus.degrees.iter().enumerate() {
            let form = linear_form(&vars, Rational::one(), &[(i, 1)]);
            integrand = integrand.mul(&form.pow_i(di as i64 + 1)?);
        }
        integrand = integrand.mul(&chern_euler_ratio_g0(locus, family, weights, t0)?);
        total += integrand.coefficient(&locus.degrees);
    }
    Ok(total)
}

/// Dense bivariate polynomial modulo `(x1^{d1+1}, x2^{d2+1})`; the fast
/// kernel behind the Euler-characteristic engine. Supports in-place
/// multiplication and exact division by linear forms `c0 + a x1 + b x2`.
struct BiSeries {
    n1: usize,
    n2: usize,
    c: Vec<Rational>,
}

impl BiSeries {
    fn one(d1: u32, d2: u32) -> Self {
        let (n1, n2) = (d1 as usize + 1, d2 as usize + 1);
        let mut c = vec![Rational::zero(); n1 * n2];
        c[0] = Rational::one();
        BiSeries { n1, n2, c }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    /// `self *= c0 + a x1 + b x2`, truncated.
    fn mul_linear(&mut self, c0: &Rational, a: i64, b: i64) {
        let qa = q_int(a);
        let qb = q_int(b);
        for i in (0..self.n1).rev() {
            for j in (0..self.n2).rev() {
                let k = self.idx(i, j);
                let mut v = &self.c[k] * c0;
                if a != 0 && i > 0 {
                    let src = &self.c[self.idx(i - 1, j)];
                    if !src.is_zero() {
                        v += src * &qa;
                    }
                }
                if b != 0 && j > 0 {
                    let src = &self.c[self.idx(i, j - 1)];
                    if !src.is_zero() {
                        v += src * &qb;
                    }
                }
                self.c[k] = v;
            }
        }
    }

    /// `self /= c0 + a x1 + b x2` with `c0 != 0`, truncated.
    fn div_linear(&mut self, c0: &Rational, a: i64, b: i64) {
        let c0_inv = c0.recip();
        let qa = q_int(a);
        let qb = q_int(b);
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                let k = self.idx(i, j);
                let mut v = self.c[k].clone();
                if a != 0 && i > 0 {
                    let src = &self.c[self.idx(i - 1, j)];
                    if !src.is_zero() {
                        v -= src * &qa;
                    }
                }
                if b != 0 && j > 0 {
                    let src = &self.c[self.idx(i, j - 1)];
                    if !src.is_zero() {
                        v -= src * &qb;
                    }
                }
                self.c[k] = v * &c0_inv;
            }
        }
    }

    /// `self *= (c0 + a x1 + b x2)^e` for any integer exponent.
    fn apply_power(&mut self, c0: &Rational, a: i64, b: i64, e: i64) {
        for _ in 0..e.abs() {
            if e > 0 {
                self.mul_linear(c0, a, b);
            } else {
                self.div_linear(c0, a, b);
            }
        }
    }

    fn top(&self) -> Rational {
        self.c[self.c.len() - 1].clone()
    }
}

/// Integer description of a normal-bundle factor at a rank-two locus:
/// linear form `c t + a x1 + b x2` raised to `e = sign * rank` in the
/// Chern/Euler ratio.
struct FactorSpec {
    c: i64,
    a: i64,
    b: i64,
    e: i64,
}

fn factor_specs_r2(locus: &FixedLocus, family: Form, weights: &WeightAssignment) -> Vec<FactorSpec> {
    let w = weights.weights();
    let n_bundle = w.len();
    let (k1, k2) = (locus.positions[0], locus.positions[1]);
    let (d1, d2) = (locus.degrees[0] as i64, locus.degrees[1] as i64);
    let mut out = Vec::new();
    for (i, (ki, di)) in [(k1, d1), (k2, d2)].into_iter().enumerate() {
        for k in 0..n_bundle {
            if k == ki {
                continue;
            }
            out.push(FactorSpec {
                c: w[ki] - w[k],
                a: if i == 0 { 1 } else { 0 },
                b: if i == 1 { 1 } else { 0 },
                e: di + 1,
            });
        }
    }
    // tensor factors, sign -1
    out.push(FactorSpec {
        c: w[k1] - w[k2],
        a: 1,
        b: -1,
        e: -(d1 - d2 + 1),
    });
    out.push(FactorSpec {
        c: w[k2] - w[k1],
        a: -1,
        b: 1,
        e: -(d2 - d1 + 1),
    });
    out.push(FactorSpec {
        c: w[k1] + w[k2],
        a: 1,
        b: 1,
        e: -(d1 + d2 + 1),
    });
    if family == Form::Symmetric {
        out.push(FactorSpec {
            c: 2 * w[k1],
            a: 2,
            b: 0,
            e: -(2 * d1 + 1),
        });
        out.push(FactorSpec {
            c: 2 * w[k2],
            a: 0,
            b: 2,
            e: -(2 * d2 + 1),
        });
    }
    out
}

/// Contribution of one locus at a numeric parameter, through the dense
/// kernel: `[x^{d}] prod_i (1+x_i)^{d_i+1} prod_F ((1+l_F)/l_F)^{e_F}`.
fn evir_locus_value_r2(
    locus: &FixedLocus,
    specs: &[FactorSpec],
    t0: &Rational,
) -> Result<Rational> {
    let (d1, d2) = (locus.degrees[0], locus.degrees[1]);
    let mut s = BiSeries::one(d1, d2);
    s.apply_power(&Rational::one(), 1, 0, d1 as i64 + 1);
    s.apply_power(&Rational::one(), 0, 1, d2 as i64 + 1);
    for f in specs {
        let c0 = q_int(f.c) * t0;
        if c0.is_zero() {
            return Err(Error::DegenerateParameter);
        }
        let one_plus = Rational::one() + &c0;
        if one_plus.is_zero() {
            return Err(Error::DegenerateParameter);
        }
        s.apply_power(&one_plus, f.a, f.b, f.e);
        s.apply_power(&c0, f.a, f.b, -f.e);
    }
    Ok(s.top())
}

/// Per-locus pole structure in the equivariant parameter: the contribution
/// times `t^a prod (1 + c t)^{mult}` is a polynomial of degree at most
/// `a + sum mult`.
fn locus_denominator(specs: &[FactorSpec], d: u32) -> (u32, Vec<(i64, u32)>) {
    use std::collections::BTreeMap;
    let mut a = d; // x-adic expansion deepens poles by at most d in total
    let mut lin: BTreeMap<i64, u32> = BTreeMap::new();
    for f in specs {
        if f.e > 0 {
            a += f.e as u32;
        } else if f.e < 0 {
            *lin.entry(f.c).or_insert(d) += (-f.e) as u32;
        }
    }
    (a, lin.into_iter().collect())
}

/// Virtual Euler characteristic of a single degree-`d` moduli space at
/// genus zero.
///
/// The localization sum, as a function of the equivariant parameter `t`, is
/// a rational function that is regular at `t = 0` with constant term the
/// virtual Euler characteristic (the positive-degree tail consists of the
/// higher equivariant integrals of `c(T^vir)`, which are nonzero once the
/// moduli space is singular). Each locus contribution is therefore
/// reconstructed exactly from evaluations against a provable per-locus
/// denominator ansatz, Laurent-expanded at `t = 0`, and summed; the pole
/// parts must cancel across loci, which doubles as the consistency check.
pub fn evir_g0(n_bundle: u32, r: u32, d: u32, family: Form) -> Result<Rational> {
    let weights = WeightAssignment::standard(n_bundle);
    evir_g0_with_weights(n_bundle, r, d, family, &weights)
}

/// Same as [`evir_g0`] with an explicit weight vector (the results must not
/// depend on it; tests recompute with a second vector).
pub fn evir_g0_with_weights(
    n_bundle: u32,
    r: u32,
    d: u32,
    family: Form,
    weights: &WeightAssignment,
) -> Result<Rational> {
    if r != 2 {
        return Err(Error::UnsupportedFamily(
            "the Euler-characteristic engine is exposed for r = 2".into(),
        ));
    }
    let loci = enumerate_fixed_loci(n_bundle, r, d);
    let max_weight = weights.weights().iter().map(|w| w.abs()).max().unwrap_or(1);
    let k0 = 2 * max_weight + 3;

    // Negating all weights maps each locus to its antipodal partner and the
    // contribution to f(-t); computing one member of each pair suffices, the
    // partner's Laurent coefficients differ by alternating signs.
    let n_half = (n_bundle / 2) as usize;
    let partner_key = |l: &FixedLocus| -> (Vec<usize>, Vec<u32>) {
        let mut pd: Vec<(usize, u32)> = l
            .positions
            .iter()
            .zip(&l.degrees)
            .map(|(&p, &deg)| ((p + n_half) % n_bundle as usize, deg))
            .collect();
        pd.sort();
        (
            pd.iter().map(|x| x.0).collect(),
            pd.iter().map(|x| x.1).collect(),
        )
    };
    let canonical: Vec<&FixedLocus> = loci
        .iter()
        .filter(|l| {
            let key = (l.positions.clone(), l.degrees.clone());
            let pk = partner_key(l);
            assert_ne!(key, pk, "isotropy forbids antipode-invariant loci");
            key < pk
        })
        .collect();
    assert_eq!(2 * canonical.len(), loci.len());

    // Laurent coefficients of each canonical locus at t = 0, orders -a..=0.
    let per_locus: Vec<Result<(usize, Vec<Rational>)>> = canonical
        .par_iter()
        .map(|locus| {
            let specs = factor_specs_r2(locus, family, weights);
            let (a, lin) = locus_denominator(&specs, d);
            let degree = (a + lin.iter().map(|&(_, m)| m).sum::<u32>()) as usize;
            let n_points = degree + 1;
            let n_verify = 2usize;
            let points: Vec<Rational> = (0..(n_points + n_verify) as i64)
                .map(|i| q_ratio(1, k0 + i))
                .collect();
            let mut scaled = Vec::with_capacity(points.len());
            for t in &points {
                let mut v = evir_locus_value_r2(locus, &specs, t)?;
                v *= crate::scalar::q_pow(t, a as i64);
                for &(c, m) in &lin {
                    v *= crate::scalar::q_pow(&(Rational::one() + q_int(c) * t), m as i64);
                }
                scaled.push(v);
            }
            let coeffs = newton_interpolate(&points[..n_points], &scaled[..n_points]);
            let poly = crate::exactnum::Polynomial::new(coeffs);
            for i in n_points..(n_points + n_verify) {
                if poly.eval(&points[i]) != scaled[i] {
                    return Err(Error::TIndependenceFailure);
                }
            }
            // contribution = poly / (t^a E(t)): Laurent coefficients at
            // orders j - a for j = 0..=a are the coefficients of poly * E^{-1}.
            let mut e_poly = crate::exactnum::Polynomial::one();
            for &(c, m) in &lin {
                let f = crate::exactnum::Polynomial::new(vec![Rational::one(), q_int(c)]);
                e_poly = e_poly.mul(&f.pow(m));
            }
            let e_inv = truncated_inverse(&e_poly, a as usize + 1);
            let series = poly.mul(&e_inv);
            let lowest: Vec<Rational> = (0..=a as usize).map(|j| series.coeff(j)).collect();
            Ok((a as usize, lowest))
        })
        .collect();

    // Sum the Laurent tails of both pair members; every negative order must
    // cancel across loci.
    let mut pole_sums: Vec<Rational> = Vec::new(); // index = pole order
    let mut constant = Rational::zero();
    for item in per_locus {
        let (a, lowest) = item?;
        for (j, v) in lowest.iter().enumerate() {
            let order = a - j; // coefficient of t^{-order}
            // partner contributes (-1)^{order} v at the same order
            let combined = if order % 2 == 0 {
                v + v
            } else {
                Rational::zero()
            };
            if order == 0 {
                constant += combined;
            } else {
                if pole_sums.len() < order {
                    pole_sums.resize(order, Rational::zero());
                }
                pole_sums[order - 1] += combined;
            }
        }
    }
    if pole_sums.iter().any(|v| !v.is_zero()) {
        return Err(Error::TIndependenceFailure);
    }
    Ok(constant)
}

/// Coefficients of the interpolating polynomial through `(points, values)`
/// by divided differences, expanded into the monomial basis.
fn newton_interpolate(points: &[Rational], values: &[Rational]) -> Vec<Rational> {
    let n = points.len();
    let mut dd: Vec<Rational> = values.to_vec();
    let mut newton_coeffs = Vec::with_capacity(n);
    newton_coeffs.push(dd[0].clone());
    for level in 1..n {
        for i in 0..(n - level) {
            let num = &dd[i + 1] - &dd[i];
            let den = &points[i + level] - &points[i];
            dd[i] = num / den;
        }
        dd.truncate(n - level);
        newton_coeffs.push(dd[0].clone());
    }
    // expand sum_k c_k prod_{j<k} (t - x_j)
    let mut coeffs = vec![Rational::zero(); n];
    let mut basis = vec![Rational::one()]; // prod (t - x_j) so far
    for (k, c) in newton_coeffs.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            coeffs[j] += c * b;
        }
        if k + 1 < n {
            // multiply basis by (t - x_k)
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (j, b) in basis.iter().enumerate() {
                next[j + 1] += b;
                next[j] -= b * &points[k];
            }
            basis = next;
        }
    }
    coeffs
}

/// Inverse of a polynomial with unit constant term, modulo `t^k`.
fn truncated_inverse(
    p: &crate::exactnum::Polynomial<Rational>,
    k: usize,
) -> crate::exactnum::Polynomial<Rational> {
    let c0 = p.coeff(0);
    assert!(!c0.is_zero());
    let c0_inv = c0.recip();
    let mut inv = vec![Rational::zero(); k];
    inv[0] = c0_inv.clone();
    for m in 1..k {
        let mut acc = Rational::zero();
        for j in 1..=m {
            acc += p.coeff(j) * &inv[m - j];
        }
        inv[m] = -acc * &c0_inv;
    }
    crate::exactnum::Polynomial::new(inv)
}

/// Coefficients `d = 0..=dmax` of the virtual Euler characteristic series.
pub fn evir_series(n_bundle: u32, r: u32, dmax: u32, family: Form) -> Result<Vec<Rational>> {
    (0..=dmax).map(|d| evir_g0(n_bundle, r, d, family)).collect()
}

/// Coefficients of the topological Euler characteristic series
/// `2^r C(n, r) (1-q)^{r(2g-2)}`.
pub fn etop_series(n_bundle: u32, r: u32, g: u32, dmax: u32) -> Vec<Rational> {
    let n = (n_bundle / 2) as i64;
    let lead = q_pow_2r(r) * binom_int(n, r);
    let e = r as i64 * (2 * g as i64 - 2);
    (0..=dmax)
        .map(|d| lead.clone() * binom_int(e, d) * sign_pow(d as i64))
        .collect()
}

fn q_pow_2r(r: u32) -> Rational {
    q_int(1 << r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{a_sympl, a_sympl_poly, InsertionPoly};

    #[test]
    fn locus_counts() {
        assert_eq!(enumerate_fixed_loci(4, 2, 0).len(), 4);
        assert_eq!(enumerate_fixed_loci(4, 2, 2).len(), 12);
        assert_eq!(enumerate_fixed_loci(8, 2, 1).len(), 48);
        // closed formula on a wider grid
        for (n_bundle, r, d) in [(6u32, 2u32, 3u32), (8, 3, 2), (6, 1, 4)] {
            let n = (n_bundle / 2) as i64;
            let expected = (1i64 << r)
                * crate::scalar::binom_int(n, r).to_integer()
                    .try_into()
                    .map(|x: i64| x)
                    .unwrap()
                * crate::scalar::binom_int(d as i64 + r as i64 - 1, r - 1)
                    .to_integer()
                    .try_into()
                    .map(|x: i64| x)
                    .unwrap();
            assert_eq!(enumerate_fixed_loci(n_bundle, r, d).len() as i64, expected);
        }
    }

    #[test]
    fn inverse_euler_d0_is_scalar() {
        let weights = WeightAssignment::standard(4);
        let locus = FixedLocus {
            positions: vec![0, 1],
            degrees: vec![0, 0],
        };
        let s = inverse_euler_g0(&locus, Form::Symplectic, &weights, &q_ratio(1, 7)).unwrap();
        assert!(s.terms().all(|(e, _)| e.iter().all(|&x| x == 0)));
    }

    #[test]
    fn euler_factor_matches_hand_expansion() {
        // locus {1,2} (0-based {0,1}), degrees (1,0), N = 4: the x1-linear
        // coefficient of 1/e matches the product rule of the three factor
        // families.
        let weights = WeightAssignment::standard(4);
        let t0 = q_ratio(1, 7);
        let locus = FixedLocus {
            positions: vec![0, 1],
            degrees: vec![1, 0],
        };
        let got = inverse_euler_g0(&locus, Form::Symplectic, &weights, &t0).unwrap();
        // hand product over the factors
        let vars = xvars(&locus.degrees);
        let mut expected = MultiSeries::one(vars.clone());
        let w = [1i64, 2, -1, -2];
        for k in [1usize, 2, 3] {
            let c0 = q_int(w[0] - w[k]) * &t0;
            expected = expected
                .mul(&linear_form(&vars, c0, &[(0, 1)]).pow_i(-2).unwrap());
        }
        for k in [0usize, 2, 3] {
            let c0 = q_int(w[1] - w[k]) * &t0;
            expected = expected
                .mul(&linear_form(&vars, c0, &[(1, 1)]).pow_i(-1).unwrap());
        }
        expected = expected
            .mul(&linear_form(&vars, q_int(w[0] - w[1]) * &t0, &[(0, 1), (1, -1)]).pow_i(2).unwrap());
        expected = expected
            .mul(&linear_form(&vars, q_int(w[1] - w[0]) * &t0, &[(1, 1), (0, -1)]).pow_i(0).unwrap());
        expected = expected
            .mul(&linear_form(&vars, q_int(w[0] + w[1]) * &t0, &[(0, 1), (1, 1)]).pow_i(2).unwrap());
        assert_eq!(got, expected);
    }

    #[test]
    fn oracle_matches_closed_forms() {
        assert_eq!(
            intersect_oracle_g0(4, 0, &InsertionMonomial { m1: 3, m2: 0, f2: 0 }).unwrap(),
            q_int(2)
        );
        assert_eq!(
            intersect_oracle_g0(4, 0, &InsertionMonomial { m1: 1, m2: 1, f2: 0 }).unwrap(),
            q_int(1)
        );
        for d in 0..=2u32 {
            let vd = 3 * d as i64 + 3;
            let mut m2 = 0u32;
            while 2 * m2 as i64 <= vd {
                let m1 = (vd - 2 * m2 as i64) as u32;
                let oracle =
                    intersect_oracle_g0(4, d, &InsertionMonomial { m1, m2, f2: 0 }).unwrap();
                assert_eq!(oracle, a_sympl(4, 0, d, m1, m2).unwrap(), "d={d} m1={m1}");
                assert_eq!(
                    oracle,
                    a_sympl_poly(4, 0, d, &InsertionPoly::monomial(m1, m2)).unwrap()
                );
                m2 += 1;
            }
        }
    }

    #[test]
    fn oracle_degree_guard() {
        assert_eq!(
            intersect_oracle_g0(4, 0, &InsertionMonomial { m1: 0, m2: 0, f2: 0 }),
            Err(Error::DegreeMismatch)
        );
    }

    #[test]
    fn evir_first_values() {
        assert_eq!(evir_g0(4, 2, 0, Form::Symplectic).unwrap(), q_int(4));
        assert_eq!(evir_g0(4, 2, 1, Form::Symplectic).unwrap(), q_int(16));
        assert_eq!(evir_g0(4, 2, 2, Form::Symplectic).unwrap(), q_int(32));
    }

    #[test]
    fn dense_kernel_matches_generic_series_path() {
        // the dense bivariate kernel and the generic MultiSeries route must
        // produce identical per-parameter localization sums
        let weights = WeightAssignment::standard(4);
        for d in 0..=3u32 {
            for t0 in [q_ratio(1, 17), q_ratio(1, 19)] {
                let generic =
                    evir_value_at(4, 2, d, Form::Symplectic, &weights, &t0).unwrap();
                let mut dense = Rational::zero();
                for locus in enumerate_fixed_loci(4, 2, d) {
                    let specs = factor_specs_r2(&locus, Form::Symplectic, &weights);
                    dense += evir_locus_value_r2(&locus, &specs, &t0).unwrap();
                }
                assert_eq!(generic, dense, "d={d}");
            }
        }
    }

    #[test]
    fn evir_weight_independence() {
        let alt = WeightAssignment::new(vec![1, 3, -1, -3]);
        for d in 0..=2u32 {
            assert_eq!(
                evir_g0(4, 2, d, Form::Symplectic).unwrap(),
                evir_g0_with_weights(4, 2, d, Form::Symplectic, &alt).unwrap(),
                "d={d}"
            );
        }
    }

    #[test]
    fn etop_values() {
        assert_eq!(
            etop_series(4, 2, 0, 3),
            vec![q_int(4), q_int(16), q_int(40), q_int(80)]
        );
        // smooth cases d = 0, 1 agree with evir
        let evir = evir_series(4, 2, 1, Form::Symplectic).unwrap();
        let etop = etop_series(4, 2, 0, 1);
        assert_eq!(evir, etop);
    }

    #[test]
    fn evir_is_integral() {
        for d in 0..=3u32 {
            let v = evir_g0(4, 2, d, Form::Symplectic).unwrap();
            assert!(v.is_integer(), "d={d}: {v}");
        }
    }
}
