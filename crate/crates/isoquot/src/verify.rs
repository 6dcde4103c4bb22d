//! Executable cross-check suites tying the independent engines together.
//!
//! Each suite runs a batch of exact identities and reports one result per
//! check; the CLI exposes them through `verify --suite <name|all>` and the
//! acceptance tests drive the same code.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exactnum::Polynomial;
use crate::grw::{
    grw_equals_quot, grw_sg, jacobian_identity_check, og_expected_dim, sg_expected_dim,
    GrassmannianKind,
};
use crate::invariants::{
    a_sympl, a_sympl_poly, compatibility_check, duality_check, virtual_dim, Form, InsertionPoly,
    QuotFamily,
};
use crate::localize::{intersect_oracle_g0, InsertionMonomial};
use crate::rootsum::{
    bivar, sum_over_pairs, sum_rational_over_roots, sum_rational_over_roots_enum,
    RationalFunctionBi, RationalFunctionUni,
};
use crate::scalar::{q_int, q_pow, q_ratio, rational_string, sign_pow, Rational};
use crate::series::MultiSeries;
use crate::symprod::{brute_force_g0, compositions, lb_theta_sum, yvars, LBInput, LocusExpansion};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub details: String,
}

impl CheckResult {
    fn equality(suite: &'static str, name: String, left: &Rational, right: &Rational) -> Self {
        CheckResult {
            suite,
            name,
            pass: left == right,
            details: format!("{} == {}", rational_string(left), rational_string(right)),
        }
    }

    fn error(suite: &'static str, name: String, err: impl std::fmt::Display) -> Self {
        CheckResult {
            suite,
            name,
            pass: false,
            details: format!("error: {err}"),
        }
    }
}

pub const SUITE_NAMES: [&str; 6] = [
    "engine-agreement",
    "oracle-agreement",
    "grw-quot",
    "duality",
    "compatibility",
    "jacobian",
];

pub fn run_suite(name: &str) -> Option<Vec<CheckResult>> {
    match name {
        "engine-agreement" => Some(engine_agreement()),
        "oracle-agreement" => Some(oracle_agreement()),
        "grw-quot" => Some(grw_quot()),
        "duality" => Some(duality()),
        "compatibility" => Some(compatibility()),
        "jacobian" => Some(jacobian()),
        _ => None,
    }
}

pub fn run_all() -> Vec<CheckResult> {
    SUITE_NAMES
        .iter()
        .flat_map(|s| run_suite(s).unwrap())
        .collect()
}

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

fn random_rational_function(state: &mut u64) -> RationalFunctionUni {
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
    let num = if num.is_zero() {
        Polynomial::one()
    } else {
        num
    };
    RationalFunctionUni::new(num, den)
}

/// Trace engine versus cyclotomic enumeration, plus the pair-count sanity
/// sum and the pair-to-single reduction.
pub fn engine_agreement() -> Vec<CheckResult> {
    const SUITE: &str = "engine-agreement";
    let mut out = Vec::new();
    let mut state = 0x5eed_c0ffee_0001u64;
    for case in 0..50 {
        let n = 4 + 2 * (xorshift(&mut state) % 5) as u32; // 4..=12 even
        let f = random_rational_function(&mut state);
        let name = format!("trace-vs-enumeration N={n} case {case}");
        match (
            sum_rational_over_roots(n, &f),
            sum_rational_over_roots_enum(n, &f),
        ) {
            (Ok(a), Ok(b)) => out.push(CheckResult::equality(SUITE, name, &a, &b)),
            (Err(e), _) | (_, Err(e)) => out.push(CheckResult::error(SUITE, name, e)),
        }
    }
    for n in [4u32, 6, 8, 10] {
        let one = RationalFunctionBi::from_poly(MultiSeries::one(bivar()));
        let name = format!("pair-count N={n}");
        match sum_over_pairs(n, &one) {
            Ok(v) => out.push(CheckResult::equality(
                SUITE,
                name,
                &v,
                &q_int((n * (n - 2) / 2) as i64),
            )),
            Err(e) => out.push(CheckResult::error(SUITE, name, e)),
        }
    }
    out
}

fn monomials_of_weighted_degree(vd: i64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut m2 = 0i64;
    while 2 * m2 <= vd {
        out.push(((vd - 2 * m2) as u32, m2 as u32));
        m2 += 1;
    }
    out
}

/// Localization oracle against both closed-form a-class engines, and the
/// coefficient-extraction identity behind the summation engine.
pub fn oracle_agreement() -> Vec<CheckResult> {
    const SUITE: &str = "oracle-agreement";
    let mut out = Vec::new();
    for n in [4u32, 6] {
        for d in 0..=3u32 {
            let vd = (n as i64 - 1) * d as i64 + (2 * n as i64 - 5);
            for (m1, m2) in monomials_of_weighted_degree(vd) {
                let name = format!("localization-vs-closed-forms N={n} d={d} m1={m1} m2={m2}");
                let run = || -> Result<(Rational, Rational, Rational)> {
                    let oracle =
                        intersect_oracle_g0(n, d, &InsertionMonomial { m1, m2, f2: 0 })?;
                    let trace = a_sympl(n, 0, d, m1, m2)?;
                    let pairs = a_sympl_poly(n, 0, d, &InsertionPoly::monomial(m1, m2))?;
                    Ok((oracle, trace, pairs))
                };
                match run() {
                    Ok((oracle, trace, pairs)) => out.push(CheckResult {
                        suite: SUITE,
                        name,
                        pass: oracle == trace && trace == pairs,
                        details: format!(
                            "oracle {} / trace {} / pairs {}",
                            rational_string(&oracle),
                            rational_string(&trace),
                            rational_string(&pairs)
                        ),
                    }),
                    Err(e) => out.push(CheckResult::error(SUITE, name, e)),
                }
            }
        }
    }
    // Lagrange-Buermann closed form versus direct coefficient extraction.
    for n in [4u32, 6] {
        for d in 0..=3u32 {
            let s = (n as i64) * (d as i64) + 2 * (n as i64 - 1);
            let (e1, e2) = (s as u32 / 2, s as u32 - s as u32 / 2);
            let input = LBInput {
                n,
                g: 0,
                d,
                r: 2,
                a: q_int(n as i64),
                b: q_int(0),
                p: vec![0, 0],
                r_num: MultiSeries::monomial(yvars(2), vec![e1, e2], Rational::one()),
                r_den: MultiSeries::one(yvars(2)),
                weights: vec![0, 1],
            };
            let name = format!("lagrange-buermann-vs-bruteforce N={n} d={d}");
            let run = || -> Result<(crate::exactnum::Cyclo, crate::exactnum::Cyclo)> {
                let closed = lb_theta_sum(&input)?;
                let mut total = crate::exactnum::Cyclo::zero();
                for degrees in compositions(d, 2) {
                    let lx = LocusExpansion::new(&input, &degrees);
                    let mut f = lx.eval_y_rational(&input.r_num, &input.r_den)?;
                    for i in 0..2 {
                        f = f.mul(&lx.h_power(i));
                    }
                    total = total + brute_force_g0(degrees[0], degrees[1], &f)?;
                }
                Ok((closed, total))
            };
            match run() {
                Ok((closed, brute)) => out.push(CheckResult {
                    suite: SUITE,
                    name,
                    pass: closed == brute,
                    details: format!("{closed} == {brute}"),
                }),
                Err(e) => out.push(CheckResult::error(SUITE, name, e)),
            }
        }
    }
    out
}

/// GRW residues against the Quot-scheme closed forms, including the
/// fat-point special cases.
pub fn grw_quot() -> Vec<CheckResult> {
    const SUITE: &str = "grw-quot";
    let mut out = Vec::new();
    for n in [2u32, 3, 4] {
        for g in 0..=3u32 {
            for d in g..=(g + 3) {
                let vd = sg_expected_dim(n, g, d);
                if vd < 0 {
                    continue;
                }
                let mut pass = true;
                let mut count = 0;
                let mut details = String::new();
                for (m1, m2) in monomials_of_weighted_degree(vd) {
                    match grw_equals_quot(GrassmannianKind::SG, n, g, d, m1, m2) {
                        Ok((a, b)) => {
                            if a != b {
                                pass = false;
                                details = format!(
                                    "mismatch at m1={m1} m2={m2}: {} vs {}",
                                    rational_string(&a),
                                    rational_string(&b)
                                );
                            }
                        }
                        Err(e) => {
                            pass = false;
                            details = format!("error at m1={m1} m2={m2}: {e}");
                        }
                    }
                    count += 1;
                }
                if details.is_empty() {
                    details = format!("{count} monomials agree");
                }
                out.push(CheckResult {
                    suite: SUITE,
                    name: format!("sg-vs-quot n={n} g={g} d={d}"),
                    pass,
                    details,
                });
            }
        }
    }
    // special d < g cases for n = 2: d = gbar, and (g, d) = (1, 0)
    for g in 2..=4u32 {
        let d = g - 1;
        let name = format!("sg-fat-point n=2 g={g} d={d}");
        let expected = q_pow(&q_int(2), g as i64 - 1) * q_pow(&q_int(3), g as i64)
            + sign_pow(g as i64 - 1) * q_pow(&q_int(2), d as i64);
        let run = || -> Result<(Rational, Rational)> {
            Ok((grw_sg(2, g, d, 0, 0)?, a_sympl(4, g, d, 0, 0)?))
        };
        match run() {
            Ok((grw, quot)) => out.push(CheckResult {
                suite: SUITE,
                name,
                pass: grw == expected && quot == expected,
                details: format!(
                    "grw {} / quot {} / closed {}",
                    rational_string(&grw),
                    rational_string(&quot),
                    rational_string(&expected)
                ),
            }),
            Err(e) => out.push(CheckResult::error(SUITE, name, e)),
        }
    }
    for n in [2u32, 3, 4] {
        let name = format!("sg-genus-one-degree-zero n={n}");
        let expected = q_int(2 * n as i64 * (n as i64 - 1));
        let run = || -> Result<(Rational, Rational)> {
            Ok((grw_sg(n, 1, 0, 0, 0)?, a_sympl(2 * n, 1, 0, 0, 0)?))
        };
        match run() {
            Ok((grw, quot)) => out.push(CheckResult {
                suite: SUITE,
                name,
                pass: grw == expected && quot == expected,
                details: format!(
                    "grw {} / quot {} / closed {}",
                    rational_string(&grw),
                    rational_string(&quot),
                    rational_string(&expected)
                ),
            }),
            Err(e) => out.push(CheckResult::error(SUITE, name, e)),
        }
    }
    // OG versus the symmetric family
    {
        let n = 3u32;
        for g in 0..=2u32 {
            for d in g..=(g + 2) {
                let vd = og_expected_dim(n, g, d);
                if vd < 0 {
                    continue;
                }
                let mut pass = true;
                let mut count = 0;
                let mut details = String::new();
                for (m1, m2) in monomials_of_weighted_degree(vd) {
                    match grw_equals_quot(GrassmannianKind::OG, n, g, d, m1, m2) {
                        Ok((a, b)) => {
                            if a != b {
                                pass = false;
                                details = format!(
                                    "mismatch at m1={m1} m2={m2}: {} vs {}",
                                    rational_string(&a),
                                    rational_string(&b)
                                );
                            }
                        }
                        Err(e) => {
                            pass = false;
                            details = format!("error at m1={m1} m2={m2}: {e}");
                        }
                    }
                    count += 1;
                }
                if details.is_empty() {
                    details = format!("{count} monomials agree");
                }
                out.push(CheckResult {
                    suite: SUITE,
                    name: format!("og-vs-quot n={n} g={g} d={d}"),
                    pass,
                    details,
                });
            }
        }
    }
    out
}

/// Admissible parameter sets for the symmetric/symplectic duality.
pub fn duality_cases() -> Vec<(u32, u32, u32, u32, u32)> {
    vec![
        (4, 0, 1, 0, 3),
        (4, 0, 1, 2, 2),
        (4, 0, 1, 6, 0),
        (4, 0, 2, 1, 4),
        (4, 1, 1, 1, 1),
        (4, 1, 2, 0, 3),
        (4, 2, 3, 0, 3),
        (6, 0, 1, 0, 6),
        (6, 1, 1, 1, 2),
        (6, 2, 3, 0, 4),
    ]
}

pub fn duality() -> Vec<CheckResult> {
    const SUITE: &str = "duality";
    duality_cases()
        .into_iter()
        .map(|(n, g, d, m1, m2)| {
            let name = format!("duality N={n} g={g} d={d} m1={m1} m2={m2}");
            match duality_check(n, g, d, m1, m2) {
                Ok((left, right)) => CheckResult::equality(SUITE, name, &left, &right),
                Err(e) => CheckResult::error(SUITE, name, e),
            }
        })
        .collect()
}

/// Admissible parameter sets (all with d >= g) for the degree-shift identity.
pub fn compatibility_cases() -> Vec<(u32, u32, u32, u32, u32)> {
    vec![
        (4, 0, 0, 1, 0),
        (4, 0, 1, 0, 2),
        (4, 0, 1, 4, 0),
        (4, 1, 1, 1, 0),
        (4, 1, 2, 2, 1),
        (4, 2, 2, 1, 0),
        (6, 0, 0, 3, 1),
        (6, 1, 1, 3, 0),
        (6, 1, 2, 2, 3),
        (6, 2, 2, 1, 0),
    ]
}

pub fn compatibility() -> Vec<CheckResult> {
    const SUITE: &str = "compatibility";
    compatibility_cases()
        .into_iter()
        .map(|(n, g, d, m1, m2)| {
            let name = format!("compatibility N={n} g={g} d={d} m1={m1} m2={m2}");
            match compatibility_check(n, g, d, m1, m2) {
                Ok((left, right)) => CheckResult::equality(SUITE, name, &left, &right),
                Err(e) => CheckResult::error(SUITE, name, e),
            }
        })
        .collect()
}

pub fn jacobian() -> Vec<CheckResult> {
    const SUITE: &str = "jacobian";
    [2u32, 3, 4]
        .into_iter()
        .map(|n| {
            let pass = jacobian_identity_check(n);
            CheckResult {
                suite: SUITE,
                name: format!("jacobian-identity n={n}"),
                pass,
                details: if pass {
                    "reduced 2x2 form and raw determinant equal the closed form".into()
                } else {
                    "symbolic mismatch".into()
                },
            }
        })
        .collect()
}

/// Sanity helper used by tests: checks that the compatibility cases really
/// satisfy the degree constraints.
pub fn validate_case_degrees() -> bool {
    duality_cases().iter().all(|&(n, g, d, m1, m2)| {
        virtual_dim(&QuotFamily {
            form: Form::Symplectic,
            n,
            r: 2,
            g,
            d,
        })
        .map_or(false, |vd| {
            m1 as i64 + 2 * m2 as i64 == vd && m2 as i64 - (g as i64 - 1) > 0
        })
    }) && compatibility_cases().iter().all(|&(n, g, d, m1, m2)| {
        d >= g
            && virtual_dim(&QuotFamily {
                form: Form::Symplectic,
                n,
                r: 2,
                g,
                d,
            })
            .map_or(false, |vd| m1 as i64 + 2 + 2 * m2 as i64 == vd)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_lists_are_admissible() {
        assert!(validate_case_degrees());
        assert_eq!(duality_cases().len(), 10);
        assert_eq!(compatibility_cases().len(), 10);
    }

    #[test]
    fn small_suites_pass() {
        for suite in ["duality", "compatibility", "jacobian"] {
            let results = run_suite(suite).unwrap();
            assert!(!results.is_empty());
            for r in &results {
                assert!(r.pass, "{} / {}: {}", r.suite, r.name, r.details);
            }
        }
    }
}
