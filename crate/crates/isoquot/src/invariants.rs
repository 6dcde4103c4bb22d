//! Closed-form evaluators for the a-class virtual intersection numbers of
//! isotropic Quot schemes, and the consistency identities tying them
//! together (duality, degree-shift compatibility, genus-one generating
//! function).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Polynomial;
use crate::rootsum::{
    bivar, sum_over_pairs, sum_rational_over_roots, RationalFunctionBi, RationalFunctionUni,
};
use crate::scalar::{binom_int, q_int, q_pow, q_ratio, sign_pow, Rational};
use crate::series::{MultiSeries, VarSpec};

/// The bilinear form carried by the bundle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Form {
    Symplectic,
    Symmetric,
}

/// A family of isotropic Quot schemes: form, bundle rank N, subsheaf rank r,
/// genus g and degree d.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuotFamily {
    pub form: Form,
    pub n: u32,
    pub r: u32,
    pub g: u32,
    pub d: u32,
}

impl QuotFamily {
    pub fn gbar(&self) -> i64 {
        self.g as i64 - 1
    }
}

/// Virtual dimension of the family.
///
/// Symplectic requires even N and r = 2 (the r = 1 symplectic case is the
/// plain Quot scheme and is rejected); symmetric supports r = 1, 2.
pub fn virtual_dim(family: &QuotFamily) -> Result<i64> {
    let n = family.n as i64;
    let d = family.d as i64;
    let gbar = family.gbar();
    match (family.form, family.r) {
        (Form::Symplectic, 2) => {
            if family.n % 2 != 0 || family.n < 4 {
                return Err(Error::UnsupportedFamily(
                    "symplectic form needs even N >= 4".into(),
                ));
            }
            Ok((n - 1) * d - (2 * n - 5) * gbar)
        }
        (Form::Symplectic, 1) => Err(Error::UnsupportedFamily(
            "rank-1 symplectic subsheaves are automatically isotropic; use a plain Quot scheme"
                .into(),
        )),
        (Form::Symmetric, 2) => Ok((n - 3) * d - gbar * (2 * n - 7)),
        (Form::Symmetric, 1) => Ok((n - 2) * (d - gbar)),
        _ => Err(Error::UnsupportedFamily(format!(
            "rank {} is not supported",
            family.r
        ))),
    }
}

/// `T_{d,g}(N) = sum_{i=0}^{d} C(g, i) (-N)^{-i}`, the truncation of the
/// binomial expansion of `(1 - 1/N)^g`; equal to
/// `[q^d] (1+q)^{d-g} (1 + (N-1)/N q)^g`. Both forms are computed and must
/// agree. The genus argument is signed so the degenerate `g - 1` value at
/// genus zero works through generalized binomials.
pub fn t_dg(n: u32, g: i64, d: i64) -> Rational {
    assert!(n >= 2);
    if d < 0 {
        return Rational::zero();
    }
    let minus_n_inv = q_ratio(-1, n as i64);
    let mut sum = Rational::zero();
    for i in 0..=d as u32 {
        sum += binom_int(g, i) * q_pow(&minus_n_inv, i as i64);
    }
    // q-series route: [q^d] (1+q)^{d-g} (1 + (N-1)/N q)^g
    let qv = vec![VarSpec::truncated("q", d as u32)];
    let lin = MultiSeries::one(qv.clone()).add(&MultiSeries::monomial(
        qv.clone(),
        vec![1],
        q_ratio(n as i64 - 1, n as i64),
    ));
    let series = MultiSeries::binomial(qv.clone(), 0, &q_int(d - g)).mul(&lin_pow(
        &lin,
        g,
        d as u32,
    ));
    let extracted = series.coefficient(&[d as u32]);
    assert_eq!(sum, extracted, "the two T_{{d,g}} definitions disagree");
    sum
}

fn lin_pow(lin: &MultiSeries<Rational>, g: i64, trunc: u32) -> MultiSeries<Rational> {
    if g >= 0 {
        lin.pow_i(g).unwrap()
    } else {
        // (1 + c q)^g with negative g: expand through the generalized
        // binomial rather than series inversion.
        let c = lin.coefficient(&[1]);
        let vars = lin.vars().to_vec();
        let mut out = MultiSeries::zero(vars.clone());
        for k in 0..=trunc {
            let coeff = binom_int(g, k) * q_pow(&c, k as i64);
            out = out.add(&MultiSeries::monomial(vars.clone(), vec![k], coeff));
        }
        out
    }
}

/// `u = (-1)^{gbar + d}`, the universal sign.
fn u_sign(g: u32, d: u32) -> Rational {
    sign_pow(g as i64 - 1 + d as i64)
}

/// Symplectic r = 2 intersection of `a_1^{m_1} a_2^{m_2}`, evaluated with
/// the single-root trace engine:
///
/// `u (N/2) T_{d,g}(N) sum_{zeta != +-1} (1+zeta)^{m_1+d} zeta^{m_2}
///  J(1,zeta)^{gbar}` with `J(1,zeta) = N^2 zeta^{-1} (1-zeta)^{-2} (1+zeta)^{-1}`.
pub fn a_sympl(n: u32, g: u32, d: u32, m1: u32, m2: u32) -> Result<Rational> {
    let family = QuotFamily {
        form: Form::Symplectic,
        n,
        r: 2,
        g,
        d,
    };
    let vd = virtual_dim(&family)?;
    if m1 as i64 + 2 * m2 as i64 != vd || vd < 0 {
        return Err(Error::DegreeMismatch);
    }
    let gbar = family.gbar();

    // Summand as a univariate rational function of zeta.
    let one_plus = Polynomial::new(vec![Rational::one(), Rational::one()]);
    let one_minus = Polynomial::new(vec![Rational::one(), -Rational::one()]);
    let z = Polynomial::<Rational>::x();
    let j_den = z.mul(&one_minus.pow(2)).mul(&one_plus); // zeta (1-zeta)^2 (1+zeta)
    let n2 = q_int((n * n) as i64);

    let base = one_plus.pow(m1 + d).mul(&z.pow(m2));
    let f = if gbar >= 0 {
        RationalFunctionUni::new(
            base.mul_scalar(&q_pow(&n2, gbar)),
            j_den.pow(gbar as u32),
        )
    } else {
        RationalFunctionUni::new(
            base.mul(&j_den.pow((-gbar) as u32)),
            Polynomial::constant(q_pow(&n2, -gbar)),
        )
    };
    let sum = sum_rational_over_roots(n, &f)?;
    Ok(u_sign(g, d) * q_ratio(n as i64, 2) * t_dg(n, g as i64, d as i64) * sum)
}

/// Insertion polynomial `Q(a_1, a_2)`: a list of monomials
/// `(coefficient, m1, m2)` of uniform weighted degree `m1 + 2 m2`.
#[derive(Clone, Debug, Default)]
pub struct InsertionPoly {
    pub terms: Vec<(Rational, u32, u32)>,
}

impl InsertionPoly {
    pub fn monomial(m1: u32, m2: u32) -> Self {
        InsertionPoly {
            terms: vec![(Rational::one(), m1, m2)],
        }
    }

    /// Uniform weighted degree, or `None` if mixed or empty.
    pub fn weighted_degree(&self) -> Option<i64> {
        let mut deg = None;
        for (_, m1, m2) in &self.terms {
            let t = *m1 as i64 + 2 * *m2 as i64;
            match deg {
                None => deg = Some(t),
                Some(d) if d == t => {}
                Some(_) => return None,
            }
        }
        deg
    }

    /// `Q(1, 0)`: the sum of coefficients of the pure `a_1` powers.
    pub fn eval_one_zero(&self) -> Rational {
        let mut acc = Rational::zero();
        for (c, _, m2) in &self.terms {
            if *m2 == 0 {
                acc += c;
            }
        }
        acc
    }

    /// `S(z_1, z_2) = Q(z_1 + z_2, z_1 z_2)` as a bivariate polynomial.
    pub fn symmetrized(&self) -> MultiSeries<Rational> {
        let s = MultiSeries::var(bivar(), 0).add(&MultiSeries::var(bivar(), 1));
        let p = MultiSeries::monomial(bivar(), vec![1, 1], Rational::one());
        let mut acc = MultiSeries::zero(bivar());
        for (c, m1, m2) in &self.terms {
            let term = s
                .pow_i(*m1 as i64)
                .unwrap()
                .mul(&p.pow_i(*m2 as i64).unwrap())
                .mul_scalar(c);
            acc = acc.add(&term);
        }
        acc
    }
}

/// Pair-sum kernel shared by the symplectic and symmetric evaluators:
/// `sum_pairs S(w_1,w_2) J^{gbar} (w_1+w_2)^d` over the given root order,
/// where `J = jn^2 (w_1 w_2)^{pq} (w_1-w_2)^{-2} (w_1+w_2)^{-1}` and the
/// `(w_1 w_2)` exponent distinguishes the two J shapes (`pq = -1`
/// symplectic, `0` symmetric).
fn pair_kernel(
    order: u32,
    q_ins: &InsertionPoly,
    jn2: &Rational,
    pair_pow: i64,
    gbar: i64,
    d: u32,
) -> Result<Rational> {
    let s_sum = MultiSeries::var(bivar(), 0).add(&MultiSeries::var(bivar(), 1));
    let s_diff = MultiSeries::var(bivar(), 0).sub(&MultiSeries::var(bivar(), 1));
    let s_prod = MultiSeries::monomial(bivar(), vec![1, 1], Rational::one());

    let s_poly = q_ins.symmetrized();
    // J^gbar = jn2^gbar * prod^(pair_pow*gbar) * diff^(-2 gbar) * sum^(-gbar)
    let mut num = s_poly.mul(&s_sum.pow_i(d as i64).unwrap());
    let mut den = MultiSeries::one(bivar());
    let mut push = |base: &MultiSeries<Rational>, e: i64| {
        if e >= 0 {
            num = num.mul(&base.pow_i(e).unwrap());
        } else {
            den = den.mul(&base.pow_i(-e).unwrap());
        }
    };
    push(&s_prod, pair_pow * gbar);
    push(&s_diff, -2 * gbar);
    push(&s_sum, -gbar);
    let num = num.mul_scalar(&q_pow(jn2, gbar));
    let g = RationalFunctionBi::new(num, den);
    sum_over_pairs(order, &g)
}

/// Symplectic r = 2 intersection of a polynomial insertion, via the pair
/// enumeration form:
/// `u T_{d,g}(N) sum_pairs S(w_1,w_2) J(w_1,w_2)^{gbar} (w_1+w_2)^d`.
pub fn a_sympl_poly(n: u32, g: u32, d: u32, q_ins: &InsertionPoly) -> Result<Rational> {
    let family = QuotFamily {
        form: Form::Symplectic,
        n,
        r: 2,
        g,
        d,
    };
    let vd = virtual_dim(&family)?;
    if q_ins.weighted_degree() != Some(vd) || vd < 0 {
        return Err(Error::DegreeMismatch);
    }
    let sum = pair_kernel(n, q_ins, &q_int((n * n) as i64), -1, family.gbar(), d)?;
    Ok(u_sign(g, d) * t_dg(n, g as i64, d as i64) * sum)
}

/// Symmetric r = 2 intersection `I_1 + I_2`: the pair sum runs over the
/// (N-2)-th roots of unity and the second-kind fixed loci contribute the
/// `Q(1,0)` term.
pub fn a_symm_r2(n: u32, g: u32, d: u32, q_ins: &InsertionPoly) -> Result<Rational> {
    if n % 2 != 0 || n < 4 {
        return Err(Error::UnsupportedFamily(
            "symmetric r=2 evaluator needs even N >= 4".into(),
        ));
    }
    let family = QuotFamily {
        form: Form::Symmetric,
        n,
        r: 2,
        g,
        d,
    };
    let vd = virtual_dim(&family)?;
    if q_ins.weighted_degree() != Some(vd) || vd < 0 {
        return Err(Error::DegreeMismatch);
    }
    let gbar = family.gbar();
    let order = n - 2;
    let t = t_dg(order, g as i64, d as i64);

    // I_1: J = ((N-2)^2/4) (w1+w2)^{-1} (w1-w2)^{-2}
    let i1 = if order >= 4 {
        let jn2 = q_ratio(((order * order) / 4) as i64, 1);
        let sum = pair_kernel(order, q_ins, &jn2, 0, gbar, d)?;
        u_sign(g, d) * q_pow(&q_int(4), d as i64) * t.clone() * sum
    } else {
        Rational::zero() // N = 4: the root set {1,-1} has no admissible pairs
    };

    // I_2 = (-1)^d 2^{2d+2-g} T_{d,g}(N-2) (N-2)^g Q(1,0)
    let i2 = sign_pow(d as i64)
        * q_pow(&q_int(2), 2 * d as i64 + 2 - g as i64)
        * t
        * q_pow(&q_int(order as i64), g as i64)
        * q_ins.eval_one_zero();

    Ok(i1 + i2)
}

/// Rank-1 symmetric top intersection.
///
/// Even N: `N^g Ttilde_{d,g}(N) 2^{2d - gbar}` with
/// `Ttilde_{d,g}(N) = [q^d](1 + (N-2)/N q)^g (1+q)^{d-g}`;
/// odd N: `(N-1)^g 2^{2d - gbar} T_{d,g}(N-1)`.
pub fn a_rank1_symm(n: u32, g: u32, d: u32) -> Result<Rational> {
    if n < 3 {
        return Err(Error::UnsupportedFamily("rank-1 symmetric needs N >= 3".into()));
    }
    let family = QuotFamily {
        form: Form::Symmetric,
        n,
        r: 1,
        g,
        d,
    };
    let vd = virtual_dim(&family)?;
    if vd < 0 {
        return Err(Error::DegreeMismatch);
    }
    let gbar = family.gbar();
    let two_pow = q_pow(&q_int(2), 2 * d as i64 - gbar);
    if n % 2 == 0 {
        // Ttilde via direct coefficient extraction.
        let qv = vec![VarSpec::truncated("q", d)];
        let lin = MultiSeries::one(qv.clone()).add(&MultiSeries::monomial(
            qv.clone(),
            vec![1],
            q_ratio(n as i64 - 2, n as i64),
        ));
        let series = lin
            .pow_i(g as i64)
            .unwrap()
            .mul(&MultiSeries::binomial(qv, 0, &q_int(d as i64 - g as i64)));
        let ttilde = series.coefficient(&[d]);
        Ok(q_pow(&q_int(n as i64), g as i64) * ttilde * two_pow)
    } else {
        Ok(q_pow(&q_int(n as i64 - 1), g as i64) * two_pow * t_dg(n - 1, g as i64, d as i64))
    }
}

/// Genus-one generating-function evaluation of `a_1^{(N-1)d}`:
/// `(-1)^d (N-1)/2 [q^{Nd}] ( N(1-q)^{N-1} / ((1-q)^N - q^N) - 1/(1+2q) )`
/// for `d > 0`, and `N(N-2)/2` at `d = 0`.
pub fn g1_generating_check(n: u32, d: u32) -> Result<Rational> {
    if n % 2 != 0 || n < 4 {
        return Err(Error::UnsupportedFamily("needs even N >= 4".into()));
    }
    if d == 0 {
        return Ok(q_ratio((n * (n - 2) / 2) as i64, 1));
    }
    let order = n * d;
    let qv = vec![VarSpec::truncated("q", order)];
    let one = MultiSeries::one(qv.clone());
    let q = MultiSeries::var(qv.clone(), 0);
    let one_minus_q = one.sub(&q);
    let num = one_minus_q
        .pow_i(n as i64 - 1)
        .unwrap()
        .mul_scalar(&q_int(n as i64));
    let den = one_minus_q
        .pow_i(n as i64)
        .unwrap()
        .sub(&q.pow_i(n as i64).unwrap());
    let first = num.mul(&den.invert()?);
    let second = MultiSeries::one(qv.clone())
        .add(&q.mul_scalar(&q_int(2)))
        .invert()?;
    let coeff = first.sub(&second).coefficient(&[order]);
    Ok(sign_pow(d as i64) * q_ratio(n as i64 - 1, 2) * coeff)
}

/// Duality between the symmetric family on `C^{N+2}` and the symplectic
/// family on `C^N`:
///
/// `int_{symm(N+2)} a_1^{m_1} a_2^{m_2 - gbar} = 4^{d - gbar} int_{sympl(N)}
///  a_1^{m_1} a_2^{m_2}` for `m_2 - gbar > 0`.
///
/// Returns `(left, right)`; callers assert equality.
pub fn duality_check(n: u32, g: u32, d: u32, m1: u32, m2: u32) -> Result<(Rational, Rational)> {
    let gbar = g as i64 - 1;
    let vd = virtual_dim(&QuotFamily {
        form: Form::Symplectic,
        n,
        r: 2,
        g,
        d,
    })?;
    if m1 as i64 + 2 * m2 as i64 != vd {
        return Err(Error::DegreeMismatch);
    }
    if m2 as i64 - gbar <= 0 {
        return Err(Error::HypothesisViolated(
            "duality requires m2 - gbar > 0".into(),
        ));
    }
    let left = a_symm_r2(
        n + 2,
        g,
        d,
        &InsertionPoly::monomial(m1, (m2 as i64 - gbar) as u32),
    )?;
    let right = q_pow(&q_int(4), d as i64 - gbar) * a_sympl(n, g, d, m1, m2)?;
    Ok((left, right))
}

/// Degree-shift compatibility specialized to r = 2 symplectic:
/// `a_1^2` on degree `d` corresponds to `a_2^N` on degree `d + 2`:
///
/// `int_{IQ_d} a_1^{m_1+2} a_2^{m_2} = int_{IQ_{d+2}} a_1^{m_1} a_2^{m_2+N}`.
///
/// Valid for `d >= g` where `T_{d,g} = T_{d+2,g}`; rejects `d < g`.
pub fn compatibility_check(
    n: u32,
    g: u32,
    d: u32,
    m1: u32,
    m2: u32,
) -> Result<(Rational, Rational)> {
    if d < g {
        return Err(Error::HypothesisViolated(
            "compatibility closed forms require d >= g".into(),
        ));
    }
    let vd = virtual_dim(&QuotFamily {
        form: Form::Symplectic,
        n,
        r: 2,
        g,
        d,
    })?;
    if m1 as i64 + 2 + 2 * m2 as i64 != vd {
        return Err(Error::DegreeMismatch);
    }
    let left = a_sympl(n, g, d, m1 + 2, m2)?;
    let right = a_sympl(n, g, d + 2, m1, m2 + n)?;
    Ok((left, right))
}

/// The closed form of the N = 4 example: `2^{2d - m_2 - gbar} 3^g` for
/// positive virtual dimension, `2^{gbar}(3^g + (-1)^{gbar})` at zero.
pub fn n4_example_value(g: u32, d: u32, m2: u32, vd: i64) -> Rational {
    let gbar = g as i64 - 1;
    if vd > 0 {
        q_pow(&q_int(2), 2 * d as i64 - m2 as i64 - gbar) * q_pow(&q_int(3), g as i64)
    } else {
        q_pow(&q_int(2), gbar) * (q_pow(&q_int(3), g as i64) + sign_pow(gbar))
    }
}
