//! Randomized invariants: parser fidelity, transform equivariance of the
//! tropical set, and agreement of the fast membership test with a
//! brute-force exact oracle.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed};
use proptest::prelude::*;

use archtrop::poly::{self, Term};
use archtrop::tropical::{self, Membership, QueryPoint};
use archtrop::{parse_laurent, Coefficient, ExactLogValue, LaurentPoly};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn coeff_strategy() -> impl Strategy<Value = (i64, i64)> {
    // nonzero numerator, positive denominator
    (
        (1i64..=500).prop_flat_map(|n| prop_oneof![Just(n), Just(-n)]),
        1i64..=500,
    )
}

fn poly_strategy(n: usize, max_exp: i64) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(-max_exp..=max_exp, n),
            coeff_strategy(),
        ),
        2..=6,
    )
    .prop_filter_map("terms must not cancel to the empty polynomial", move |ts| {
        LaurentPoly::new(
            n,
            ts.into_iter()
                .map(|(e, (num, den))| Term {
                    exponent: e,
                    coeff: Coefficient::real(rat(num, den)).unwrap(),
                })
                .collect(),
        )
        .ok()
        .filter(|f| f.term_count() >= 2)
    })
}

fn format_poly(f: &LaurentPoly) -> String {
    let mut out = String::new();
    for (i, t) in f.terms().iter().enumerate() {
        let c = match &t.coeff {
            Coefficient::Rational { re, .. } => re.clone(),
            _ => unreachable!(),
        };
        if i > 0 {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        } else if c.is_negative() {
            out.push_str("-");
        }
        out.push_str(&format!("{}/{}", c.numer().abs(), c.denom()));
        for (j, e) in t.exponent.iter().enumerate() {
            if *e != 0 {
                out.push_str(&format!("*x{}^{}", j + 1, e));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // printing a polynomial and parsing it back is the identity
    #[test]
    fn parse_round_trip(f in poly_strategy(2, 6)) {
        let g = parse_laurent(&format_poly(&f), 2).unwrap();
        prop_assert_eq!(f.term_count(), g.term_count());
        for t in f.terms() {
            prop_assert!(
                g.terms().iter().any(|u| u.exponent == t.exponent && u.coeff == t.coeff),
                "term {:?} lost in round trip", t.exponent
            );
        }
    }

    // multiplying by a monomial c*x^b leaves the tropical set unchanged
    #[test]
    fn monomial_scaling_invariance(
        f in poly_strategy(1, 10),
        b in -5i64..=5,
        (num, den) in coeff_strategy(),
    ) {
        let g = poly::rescale_transform(
            &f,
            &Coefficient::real(rat(num, den)).unwrap(),
            &[b],
            &[Coefficient::one()],
        ).unwrap();
        let tf = tropical::archtrop_1d(&f).unwrap();
        let tg = tropical::archtrop_1d(&g).unwrap();
        prop_assert_eq!(tf.points.len(), tg.points.len());
        for (a, c) in tf.points.iter().zip(&tg.points) {
            prop_assert!(a.0 == c.0 && a.1 == c.1);
        }
    }

    // substituting beta*x shifts every tropical point by -log|beta|
    #[test]
    fn rescale_equivariance(
        f in poly_strategy(1, 8),
        (num, den) in coeff_strategy(),
    ) {
        let beta = rat(num, den);
        let g = poly::rescale_transform(
            &f,
            &Coefficient::one(),
            &[0],
            &[Coefficient::real(beta.clone()).unwrap()],
        ).unwrap();
        let shift = ExactLogValue::from_log(beta.abs(), BigRational::one());
        let tf = tropical::archtrop_1d(&f).unwrap();
        let tg = tropical::archtrop_1d(&g).unwrap();
        prop_assert_eq!(tf.points.len(), tg.points.len());
        for (a, c) in tf.points.iter().zip(&tg.points) {
            prop_assert!(a.0.sub(&shift) == c.0, "shifted slope mismatch");
            prop_assert_eq!(a.1, c.1);
        }
    }

    // the reciprocal polynomial negates the tropical set
    #[test]
    fn reciprocal_negates(f in poly_strategy(1, 8)) {
        let g = poly::reciprocal(&f).unwrap();
        let tf = tropical::archtrop_1d(&f).unwrap();
        let tg = tropical::archtrop_1d(&g).unwrap();
        prop_assert_eq!(tf.points.len(), tg.points.len());
        for (a, c) in tf.points.iter().zip(tg.points.iter().rev()) {
            prop_assert!(a.0.neg() == c.0);
            prop_assert_eq!(a.1, c.1);
        }
    }

    // every reported tropical point passes exact membership
    #[test]
    fn slopes_are_members(f in poly_strategy(1, 8)) {
        let trop = tropical::archtrop_1d(&f).unwrap();
        for (s, _) in &trop.points {
            let verdict = tropical::member_log(&f, std::slice::from_ref(s)).unwrap();
            prop_assert_eq!(verdict.status, Membership::In);
        }
    }

    // fast membership agrees with brute-force exact rational comparison
    #[test]
    fn member_matches_brute_force(
        f in poly_strategy(2, 6),
        q in prop::collection::vec((1i64..=20, 1i64..=20), 2),
    ) {
        let v: Vec<BigRational> = q.iter().map(|(n, d)| rat(*n, *d)).collect();
        let verdict = tropical::member(&f, &QueryPoint::Rational(v.clone())).unwrap();

        // squared magnitudes are exact rationals
        let values: Vec<BigRational> = f.terms().iter().map(|t| {
            let mut m = match &t.coeff {
                Coefficient::Rational { re, im } => re * re + im * im,
                _ => unreachable!(),
            };
            for (a, x) in t.exponent.iter().zip(&v) {
                let p = if *a >= 0 {
                    num::pow::pow(x.clone(), *a as usize)
                } else {
                    num::pow::pow(x.clone(), (-*a) as usize).recip()
                };
                m *= &p * &p;
            }
            m
        }).collect();
        let max = values.iter().max().unwrap();
        let dominating: Vec<usize> = values.iter().enumerate()
            .filter(|(_, m)| *m == max).map(|(i, _)| i).collect();
        let status = if dominating.len() >= 2 { Membership::In } else { Membership::Out };
        prop_assert_eq!(verdict.status, status);
        prop_assert_eq!(verdict.dominating, dominating);
    }

    // scaling a query point by t moves it along a line that leaves and
    // re-enters domination regions consistently: the dominating term at a
    // far-out point has maximal exponent in the direction of travel
    #[test]
    fn far_query_dominated_by_extreme_exponent(f in poly_strategy(1, 6)) {
        let big = rat(1_000_000_000, 1);
        let verdict = tropical::member(&f, &QueryPoint::Rational(vec![big])).unwrap();
        let max_exp = f.terms().iter().map(|t| t.exponent[0]).max().unwrap();
        for i in &verdict.dominating {
            prop_assert_eq!(f.terms()[*i].exponent[0], max_exp);
        }
    }
}

#[test]
fn zero_sum_terms_rejected() {
    assert!(parse_laurent("x1 - x1", 1).is_err());
    assert!(LaurentPoly::new(
        1,
        vec![
            Term {
                exponent: vec![3],
                coeff: Coefficient::real(rat(2, 7)).unwrap(),
            },
            Term {
                exponent: vec![3],
                coeff: Coefficient::real(rat(-2, 7)).unwrap(),
            },
        ],
    )
    .is_err());
}
