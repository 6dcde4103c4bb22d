//! The f-class intersection engine: builds the localization kernel as a
//! cyclotomic series in `(q_1, q_2)` with a polynomial `t` variable, applies
//! the degree-weighting and `t`-derivative operators, and extracts the
//! `[q^d]` coefficient summed over weight pairs. The `m = 1` closed form is
//! implemented independently for cross-checking.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, CycloField};
use crate::invariants::{virtual_dim, Form, InsertionPoly, QuotFamily};
use crate::scalar::{binom_int, q_int, q_pow, q_ratio, sign_pow, Rational, Scalar};
use crate::series::{MultiSeries, VarSpec};

const Q1: usize = 0;
const Q2: usize = 1;
const T: usize = 2;

/// A localization expression: series in `(q_1, q_2)` over Q(zeta_N) with
/// polynomial `t`-dependence, tagged with its parameters. The `t`-degree
/// may never exceed `2g`.
#[derive(Clone, Debug)]
pub struct FExpr {
    pub series: MultiSeries<Cyclo>,
    pub n: u32,
    pub g: u32,
    pub d: u32,
    pub w1: i64,
    pub w2: i64,
    pub field: Arc<CycloField>,
}

impl FExpr {
    fn assert_t_degree(&self) {
        assert!(
            self.series.max_exponent(T) <= 2 * self.g,
            "t-degree exceeded 2g"
        );
    }

    pub fn with_series(&self, series: MultiSeries<Cyclo>) -> FExpr {
        let out = FExpr {
            series,
            ..self.clone()
        };
        out.assert_t_degree();
        out
    }
}

fn fvars(d: u32) -> Vec<VarSpec> {
    vec![
        VarSpec::truncated("q1", d),
        VarSpec::truncated("q2", d),
        VarSpec::polynomial("t"),
    ]
}

/// `Y_i^k = w_i^k (1 + q_i)^{k/N}` as a series (any integer `k`).
fn y_pow(field: &Arc<CycloField>, vars: &[VarSpec], n: u32, w_exp: i64, i: usize, k: i64) -> MultiSeries<Cyclo> {
    let alpha = q_ratio(k, n as i64);
    let binomial: MultiSeries<Cyclo> = MultiSeries::binomial(vars.to_vec(), i, &alpha);
    let w_k = Cyclo::zeta_pow(field, w_exp * k);
    binomial.mul_scalar(&w_k)
}

fn pair_is_degenerate(n: u32, w1: i64, w2: i64) -> bool {
    let diff = (w1 - w2).rem_euclid(n as i64);
    diff == 0 || diff == (n / 2) as i64
}

/// Builds `B(Y_1, Y_2) = u Q(Y_1+Y_2, Y_1 Y_2) (Y_1+Y_2)^{d-gbar}
/// (Y_1-Y_2)^{-2 gbar} prod_i P'(Y_i)^{gbar}` expanded to q-order `d`.
pub fn build_b(
    n: u32,
    g: u32,
    d: u32,
    q_ins: &InsertionPoly,
    w1: i64,
    w2: i64,
) -> Result<FExpr> {
    if pair_is_degenerate(n, w1, w2) {
        return Err(Error::NonUnitDenominator);
    }
    let gbar = g as i64 - 1;
    let field = CycloField::new(n);
    let vars = fvars(d);

    let y1 = y_pow(&field, &vars, n, w1, Q1, 1);
    let y2 = y_pow(&field, &vars, n, w2, Q2, 1);
    let y_sum = y1.add(&y2);
    let y_diff = y1.sub(&y2);

    let mut acc = MultiSeries::zero(vars.clone());
    let y_prod = y1.mul(&y2);
    for (c, m1, m2) in &q_ins.terms {
        let term = y_sum
            .pow_i(*m1 as i64)?
            .mul(&y_prod.pow_i(*m2 as i64)?)
            .mul_scalar(&Cyclo::rational(c.clone()));
        acc = acc.add(&term);
    }

    let mut series = acc.mul(&y_sum.pow_i(d as i64 - gbar)?);
    series = series.mul(&y_diff.pow_i(-2 * gbar)?);
    // P'(Y_i)^{gbar} = N^{gbar} Y_i^{(N-1) gbar}
    series = series.mul(&y_pow(&field, &vars, n, w1, Q1, (n as i64 - 1) * gbar));
    series = series.mul(&y_pow(&field, &vars, n, w2, Q2, (n as i64 - 1) * gbar));
    series = series.mul_scalar(&Cyclo::rational(
        q_pow(&q_int(n as i64), 2 * gbar) * sign_pow(gbar + d as i64),
    ));

    Ok(FExpr {
        series,
        n,
        g,
        d,
        w1,
        w2,
        field,
    })
}

/// The genus factor `T_g(t, Y_1, Y_2) = ((1-eta_1)(1-eta_2) - t^2 eta_1 eta_2)^g`
/// with `eta_i = P(Y_i) / (P'(Y_i)(Y_1+Y_2)) = q_i / (N Y_i^{N-1} (Y_1+Y_2))`.
pub fn genus_factor(n: u32, g: u32, d: u32, w1: i64, w2: i64) -> Result<FExpr> {
    if pair_is_degenerate(n, w1, w2) {
        return Err(Error::NonUnitDenominator);
    }
    let field = CycloField::new(n);
    let vars = fvars(d);

    let y1 = y_pow(&field, &vars, n, w1, Q1, 1);
    let y2 = y_pow(&field, &vars, n, w2, Q2, 1);
    let y_sum_inv = y1.add(&y2).invert()?;
    let n_inv = Cyclo::rational(q_ratio(1, n as i64));

    let eta = |i: usize, w: i64| -> MultiSeries<Cyclo> {
        let q = MultiSeries::var(vars.clone(), i);
        q.mul(&y_pow(&field, &vars, n, w, i, -(n as i64 - 1)))
            .mul(&y_sum_inv)
            .mul_scalar(&n_inv)
    };
    let eta1 = eta(Q1, w1);
    let eta2 = eta(Q2, w2);

    let one = MultiSeries::one(vars.clone());
    let t2 = MultiSeries::monomial(vars.clone(), vec![0, 0, 2], Cyclo::rational(q_int(1)));
    let base = one
        .sub(&eta1)
        .mul(&one.sub(&eta2))
        .sub(&t2.mul(&eta1).mul(&eta2));
    let series = base.pow_i(g as i64)?;

    let out = FExpr {
        series,
        n,
        g,
        d,
        w1,
        w2,
        field,
    };
    out.assert_t_degree();
    Ok(out)
}

/// The degree-weighting operator
/// `Delta^u = sum_i C(u,i) (q_1 d/dq_1)^i (q_2 d/dq_2)^{u-i} Y_2^i Y_1^{u-i}`,
/// the displayed sum (not a u-th operator power). The inner factors multiply
/// first; `q_i d/dq_i` acts diagonally on monomials.
pub fn apply_delta_u(e: &FExpr, u: u32) -> FExpr {
    if u == 0 {
        return e.clone();
    }
    let vars = e.series.vars().to_vec();
    let mut acc = MultiSeries::zero(vars.clone());
    for i in 0..=u {
        let y_factor = y_pow(&e.field, &vars, e.n, e.w2, Q2, i as i64).mul(&y_pow(
            &e.field,
            &vars,
            e.n,
            e.w1,
            Q1,
            (u - i) as i64,
        ));
        let mut term = e.series.mul(&y_factor);
        for _ in 0..i {
            term = term.scale_by_exponent(Q1);
        }
        for _ in 0..(u - i) {
            term = term.scale_by_exponent(Q2);
        }
        acc = acc.add(&term.mul_scalar(&Cyclo::rational(binom_int(u as i64, i))));
    }
    e.with_series(acc)
}

/// The operator `d_t = -(Y_1 + Y_2) d/dt`; lowers the `t`-degree by one.
pub fn apply_dt(e: &FExpr) -> FExpr {
    let vars = e.series.vars().to_vec();
    let y_sum = y_pow(&e.field, &vars, e.n, e.w1, Q1, 1).add(&y_pow(
        &e.field,
        &vars,
        e.n,
        e.w2,
        Q2,
        1,
    ));
    e.with_series(e.series.derive(T).mul(&y_sum).neg())
}

/// `[q^d]` of the expression at `t = 1` on the diagonal `q_1 = q_2 = q`.
pub fn extract_diagonal(e: &FExpr) -> Cyclo {
    let at_t1 = e.series.set_var_one(T);
    let diag = at_t1.diagonal(0, 1, "q");
    diag.coefficient(&[e.d])
}

fn admissible_pairs(n: u32) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if b - a != n / 2 {
                out.push((a as i64, b as i64));
            }
        }
    }
    out
}

/// `int f_2^m Q(a_1, a_2)` over the symplectic rank-two family:
/// sums `[q^d] sum_u C(m,u) Delta^u ((Y_1+Y_2) d/dt)^{m-u} (B T_g)
/// |_{t=1, q_1=q_2=q}` over admissible weight pairs.
///
/// The t-operator enters with the sign `+(Y_1+Y_2) d/dt`, that is
/// `(-1)^{m-u}` times the powers of [`apply_dt`]: the odd powers of the
/// pair class flip sign relative to the naive expansion, as the direct
/// fixed-locus integrals show.
pub fn f2_intersect(n: u32, g: u32, d: u32, m: u32, q_ins: &InsertionPoly) -> Result<Rational> {
    let vd = virtual_dim(&QuotFamily {
        form: Form::Symplectic,
        n,
        r: 2,
        g,
        d,
    })?;
    let deg = q_ins.weighted_degree().ok_or(Error::DegreeMismatch)?;
    if deg + m as i64 != vd || vd < 0 {
        return Err(Error::DegreeMismatch);
    }

    let mut total = Cyclo::zero();
    for (w1, w2) in admissible_pairs(n) {
        let b = build_b(n, g, d, q_ins, w1, w2)?;
        let t_g = genus_factor(n, g, d, w1, w2)?;
        let e = b.with_series(b.series.mul(&t_g.series));

        let mut pair_value = Cyclo::zero();
        for u in 0..=m {
            let mut term = e.clone();
            for _ in 0..(m - u) {
                term = apply_dt(&term);
            }
            term = apply_delta_u(&term, u);
            let coeff = binom_int(m as i64, u) * sign_pow((m - u) as i64);
            pair_value = pair_value + extract_diagonal(&term) * Cyclo::rational(coeff);
        }
        total = total + pair_value;
    }
    total.as_rational().ok_or(Error::NonRationalResult)
}

/// Closed form for a single `f_2` insertion:
///
/// `(2/N) sum_pairs ( T_{d-1,g}(N) DoB(w_1,w_2)
///   + g (w_1 w_2/(w_1+w_2)) B(w_1,w_2)
///     ((1 - 1/N) T_{d-2,g-1}(N) - T_{d-1,g-1}(N)) )`
///
/// with `DoB = (z_1 z_2 / 2)(d/dz_1 + d/dz_2) B` computed by exact symbolic
/// differentiation of the monomial factors of `B`. The genus-weighted
/// correction term carries the chain-rule factor `g` and the `t`-operator
/// sign fixed in [`f2_intersect`]; both are enforced by the engine-versus-
/// closed-form cross tests and by the direct fixed-locus integrals.
pub fn f2_closed_m1(n: u32, g: u32, d: u32, q_ins: &InsertionPoly) -> Result<Rational> {
    let vd = virtual_dim(&QuotFamily {
        form: Form::Symplectic,
        n,
        r: 2,
        g,
        d,
    })?;
    let deg = q_ins.weighted_degree().ok_or(Error::DegreeMismatch)?;
    if deg + 1 != vd || vd < 0 {
        return Err(Error::DegreeMismatch);
    }
    let gbar = g as i64 - 1;
    let field = CycloField::new(n);
    use crate::invariants::t_dg;
    let t_d1_g = t_dg(n, g as i64, d as i64 - 1);
    // correction factor g ((1 - 1/N) T_{d-2,g-1} - T_{d-1,g-1}); zero genus
    // has no correction at all.
    let correction_scalar = if g == 0 {
        Rational::zero()
    } else {
        q_int(g as i64)
            * (q_ratio(n as i64 - 1, n as i64) * t_dg(n, g as i64 - 1, d as i64 - 2)
                - t_dg(n, g as i64 - 1, d as i64 - 1))
    };
    let u = Cyclo::rational(sign_pow(gbar + d as i64) * q_pow(&q_int(n as i64), 2 * gbar));

    let mut total = Cyclo::zero();
    for (e1, e2) in admissible_pairs(n) {
        let w1 = Cyclo::zeta_pow(&field, e1);
        let w2 = Cyclo::zeta_pow(&field, e2);
        let s = w1.clone() + w2.clone();
        let p = w1.clone() * w2.clone();
        let diff = w1.clone() - w2.clone();

        // B and DoB, monomial by monomial: for Q_j = a_1^{m1} a_2^{m2},
        //   B_j = u N^{2 gbar} s^{m1 + d - gbar} p^{m2 + (N-1) gbar} diff^{-2 gbar}
        //   DoB_j = B_j ((m1 + d - gbar) p/s + (m2 + (N-1) gbar) s/2).
        let mut b_val = Cyclo::zero();
        let mut dob_val = Cyclo::zero();
        for (c, m1, m2) in &q_ins.terms {
            let e_s = *m1 as i64 + d as i64 - gbar;
            let e_p = *m2 as i64 + (n as i64 - 1) * gbar;
            let b_j = u.clone()
                * Cyclo::rational(c.clone())
                * s.pow(e_s)
                * p.pow(e_p)
                * diff.pow(-2 * gbar);
            let log_der = p.clone() * s.pow(-1) * Cyclo::rational(q_int(e_s))
                + s.clone() * Cyclo::rational(q_ratio(e_p, 2));
            b_val = b_val + b_j.clone();
            dob_val = dob_val + b_j * log_der;
        }

        let correction = p * s.pow(-1) * b_val * Cyclo::rational(correction_scalar.clone());
        total = total + dob_val * Cyclo::rational(t_d1_g.clone()) + correction;
    }
    let total = total * Cyclo::rational(q_ratio(2, n as i64));
    total.as_rational().ok_or(Error::NonRationalResult)
}
