//! Quantitative univariate root-norm bounds: Cauchy annulus, Montel,
//! smallest-root bracket, gap-based exact root counting, Hausdorff-bound
//! selection, and the Jensen-type annulus certificate.

use std::cmp::Ordering;

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlog::ExactLogValue;
use crate::poly::LaurentPoly;
use crate::tropical::{archtrop_1d, UnivariateArchTrop};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundProvenance {
    Cauchy,
    Jensen,
    Elbow,
}

/// Log-space annulus `[inner, outer]` guaranteed to contain the relevant
/// root log-norms; values carry certified error radii.
#[derive(Debug, Clone)]
pub struct AnnulusBound {
    pub inner: (f64, f64),
    pub outer: (f64, f64),
    pub provenance: BoundProvenance,
}

/// `log((sqrt(5)-1)/2)`, a few ulps of error at most
fn log_phi_inv() -> (f64, f64) {
    let v = ((5f64.sqrt() - 1.0) / 2.0).ln();
    (v, 1e-15)
}

fn log_phi() -> (f64, f64) {
    let v = ((5f64.sqrt() + 1.0) / 2.0).ln();
    (v, 1e-15)
}

/// All nonzero roots of `f` have log-norm in
/// `[log((sqrt(5)-1)/2) + sigma_-, log((sqrt(5)+1)/2) + sigma_+]`.
pub fn cauchy_annulus(f: &LaurentPoly) -> Result<AnnulusBound> {
    let trop = archtrop_1d(f)?;
    let (sm, esm) = trop.min_slope().approx();
    let (sp, esp) = trop.max_slope().approx();
    let (lo, elo) = log_phi_inv();
    let (hi, ehi) = log_phi();
    Ok(AnnulusBound {
        inner: (lo + sm, elo + esm),
        outer: (hi + sp, ehi + esp),
        provenance: BoundProvenance::Cauchy,
    })
}

fn binomial(n: u32, k: u32) -> BigUint {
    let mut v = BigUint::one();
    for i in 0..k.min(n - k) {
        v = v * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    v
}

/// Log of the Montel bound `|c0/cp|^{1/p} * C(p+q, q)^{1/p}`: some root of
/// `c0 + cp x^p + ... + c_{p+q} x^{p+q}` has norm at most the bound.
pub fn montel_bound(c0: &BigRational, cp: &BigRational, p: u32, q: u32) -> Result<ExactLogValue> {
    if cp.is_zero() {
        return Err(Error::ZeroLeading);
    }
    assert!(p >= 1);
    let inv_p = BigRational::new(BigInt::one(), BigInt::from(p));
    let mut v = ExactLogValue::from_log(c0.abs() / cp.abs(), inv_p.clone());
    let binom = BigRational::from(BigInt::from(binomial(p + q, q)));
    v.add_assign(&ExactLogValue::from_log(binom, inv_p));
    Ok(v)
}

/// Bracket for the log-norm of the smallest-norm root:
/// `[log((sqrt(5)-1)/2) + sigma_-, 1 + log(t-1) + sigma_-]`, and no roots
/// below the lower end.
pub fn smallest_root_bracket(f: &LaurentPoly) -> Result<AnnulusBound> {
    let trop = archtrop_1d(f)?;
    let t = f.term_count();
    let (sm, esm) = trop.min_slope().approx();
    let (lo, elo) = log_phi_inv();
    Ok(AnnulusBound {
        inner: (lo + sm, elo + esm),
        outer: (1.0 + ((t - 1) as f64).ln() + sm, esm + 1e-15),
        provenance: BoundProvenance::Elbow,
    })
}

/// Half-open log-space region; `None` ends are infinite.
#[derive(Debug, Clone)]
pub struct LogInterval {
    pub lo: Option<ExactLogValue>,
    pub hi: Option<ExactLogValue>,
}

#[derive(Debug, Clone)]
pub struct GapCountReport {
    /// qualifying consecutive slope pairs with `sigma_{j+1} - sigma_j > 2 log(t-1)`
    pub cut_pairs: Vec<(ExactLogValue, ExactLogValue)>,
    /// disjoint regions and the exact number of root log-norms (with
    /// multiplicity) in each
    pub counts: Vec<(LogInterval, i64)>,
}

/// Exact root counts in the regions separated by large slope gaps.
///
/// A gap between consecutive ArchTrop slopes qualifies when it strictly
/// exceeds `2 log(t-1)`; each separated region
/// `[sigma_a - log(t-1), sigma_b + log(t-1)]` then contains exactly the
/// roots of its slopes, counted by edge length.
pub fn gap_counts(f: &LaurentPoly) -> Result<GapCountReport> {
    let trop = archtrop_1d(f)?;
    let t = f.term_count();
    let margin = ExactLogValue::log_of_int((t - 1) as u64);
    let two_margin = margin.scale(&BigRational::from(BigInt::from(2)));

    let mut cut_pairs = Vec::new();
    let mut cut_after = Vec::new();
    for (i, w) in trop.points.windows(2).enumerate() {
        let gap = w[1].0.sub(&w[0].0);
        if gap.try_cmp(&two_margin)? == Ordering::Greater {
            cut_pairs.push((w[0].0.clone(), w[1].0.clone()));
            cut_after.push(i);
        }
    }
    if cut_pairs.is_empty() {
        return Ok(GapCountReport {
            cut_pairs,
            counts: Vec::new(),
        });
    }
    let mut counts = Vec::new();
    let mut start = 0usize;
    let groups: Vec<usize> = cut_after.iter().map(|&i| i + 1).collect();
    let ends: Vec<usize> = groups
        .iter()
        .copied()
        .chain(std::iter::once(trop.points.len()))
        .collect();
    for (gi, &end) in ends.iter().enumerate() {
        let total: i64 = trop.points[start..end].iter().map(|(_, m)| m).sum();
        let lo = if gi == 0 {
            None
        } else {
            Some(trop.points[start].0.sub(&margin))
        };
        let hi = if end == trop.points.len() {
            None
        } else {
            Some(trop.points[end - 1].0.add(&margin))
        };
        counts.push((LogInterval { lo, hi }, total));
        start = end;
    }
    Ok(GapCountReport { cut_pairs, counts })
}

/// One entry of the Hausdorff bound menu; `directed` names the one-sided
/// direction when the bound is not symmetric.
#[derive(Debug, Clone)]
pub struct HausdorffBound {
    pub value: f64,
    pub provenance: &'static str,
    pub directed: Option<&'static str>,
}

/// Every applicable upper bound on the (directed) Hausdorff distance
/// between Amoeba(f) and ArchTrop(f), from the term count `t`, Newton
/// dimension `k`, optional distinct-slope count `ell` (n=1), optional
/// degree `d`, and whether the support is the vertex set of its hull.
pub fn hausdorff_upper(
    t: usize,
    k: usize,
    ell: Option<usize>,
    d: Option<i64>,
    vertex_support: bool,
) -> Result<Vec<HausdorffBound>> {
    if t < k + 1 {
        return Err(Error::InvalidArity);
    }
    let logt1 = ((t - 1) as f64).ln();
    let mut out = vec![
        HausdorffBound {
            value: (2 * t - 3) as f64 * logt1,
            provenance: "general",
            directed: None,
        },
        HausdorffBound {
            value: logt1,
            provenance: "amoeba-within-log(t-1)",
            directed: Some("amoeba-to-archtrop"),
        },
    ];
    if let Some(l) = ell {
        out.push(HausdorffBound {
            value: (2 * l - 1) as f64 * logt1,
            provenance: "slope-count",
            directed: None,
        });
        match l {
            3 => out.push(HausdorffBound {
                value: 1.0 + 3.0 * logt1,
                provenance: "three-slopes",
                directed: None,
            }),
            2 => out.push(HausdorffBound {
                value: 1.0 + logt1,
                provenance: "two-slopes",
                directed: None,
            }),
            1 => {
                if let Some(d) = d {
                    let r = 2.0 * (t as f64).ln() / (d - 1) as f64;
                    if (d - 1) as f64 > 2.0 * (t as f64).ln() {
                        out.push(HausdorffBound {
                            value: -(1.0 - r).ln(),
                            provenance: "one-slope",
                            directed: None,
                        });
                    }
                }
            }
            _ => {}
        }
    }
    if t == k + 1 || vertex_support {
        out.push(HausdorffBound {
            value: 0.0,
            provenance: "archtrop-inside-amoeba",
            directed: Some("archtrop-to-amoeba"),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct JensenCertificate {
    /// the epsilon of the annulus `[1-eps, 1/(1-eps)]`, with error radius
    pub epsilon: (f64, f64),
    pub annulus: AnnulusBound,
}

/// Certified root annulus around the unit circle after internal
/// normalization (exponents shifted to start at 0, coefficients scaled so
/// max magnitude is 1): when `0 < eps < 1` for
/// `eps = 2 log(t / sqrt(|c_1 c_t|)) / (a_t - 1)`, some root has norm in
/// `[1 - eps, 1/(1-eps)]`. Returns `None` when the formula does not apply.
pub fn annulus_certificate(f: &LaurentPoly) -> Result<Option<JensenCertificate>> {
    if f.n() != 1 {
        return Err(Error::NotUnivariate);
    }
    let t = f.term_count();
    if t < 2 {
        return Err(Error::SinglePoint);
    }
    let (a1, at) = f.exponent_range(0);
    let span = at - a1;
    if span < 2 {
        return Ok(None);
    }
    // after dividing by the largest coefficient magnitude, first/last |c|
    // become |c_1|/cmax, |c_t|/cmax
    let log_mags: Vec<ExactLogValue> = f.terms().iter().map(|tm| tm.coeff.log_mag()).collect();
    let mut cmax = log_mags[0].clone();
    for lm in &log_mags[1..] {
        if lm.try_cmp(&cmax)? == Ordering::Greater {
            cmax = lm.clone();
        }
    }
    let first = f
        .terms()
        .iter()
        .position(|tm| tm.exponent[0] == a1)
        .unwrap();
    let last = f
        .terms()
        .iter()
        .position(|tm| tm.exponent[0] == at)
        .unwrap();
    // eps = (2 log t - log|c_1| - log|c_t| + 2 log cmax) / (a_t - 1)
    // with exponents shifted so a_1 = 0
    let mut s = ExactLogValue::log_of_int(t as u64)
        .scale(&BigRational::from(BigInt::from(2)));
    s.sub_assign(&log_mags[first]);
    s.sub_assign(&log_mags[last]);
    s.add_assign(&cmax.scale(&BigRational::from(BigInt::from(2))));
    let eps = s.scale(&BigRational::new(BigInt::one(), BigInt::from(span - 1)));
    let one = ExactLogValue::from_int(1);
    if eps.try_sign()? != Ordering::Greater || eps.try_cmp(&one)? != Ordering::Less {
        return Ok(None);
    }
    let (e, ee) = eps.approx();
    let inner = (1.0 - e).ln();
    let err = ee / (1.0 - e) + 1e-15;
    Ok(Some(JensenCertificate {
        epsilon: (e, ee),
        annulus: AnnulusBound {
            inner: (inner, err),
            outer: (-inner, err),
            provenance: BoundProvenance::Jensen,
        },
    }))
}

/// Distinct-slope count of `ArchTrop(f)` for the bound menu.
pub fn slope_count(trop: &UnivariateArchTrop) -> usize {
    trop.points.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_laurent;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn cauchy_examples() {
        let f = parse_laurent("x1^2 - x1 - 1", 1).unwrap();
        let b = cauchy_annulus(&f).unwrap();
        close(b.inner.0, ((5f64.sqrt() - 1.0) / 2.0).ln(), 1e-12);
        close(b.outer.0, ((5f64.sqrt() + 1.0) / 2.0).ln(), 1e-12);
        // golden-ratio roots sit exactly at the annulus boundary
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        close(b.outer.0, phi.ln(), 1e-12);
        close(b.inner.0, -phi.ln(), 1e-12);

        let g = parse_laurent("2 - x1", 1).unwrap();
        let b = cauchy_annulus(&g).unwrap();
        let l2 = 2f64.ln();
        assert!(b.inner.0 < l2 && l2 < b.outer.0);

        let h = parse_laurent("1 + 4x1 + 6x1^2 + 4x1^3 + x1^4", 1).unwrap();
        let b = cauchy_annulus(&h).unwrap();
        assert!(b.inner.0 < 0.0 && 0.0 < b.outer.0);

        assert_eq!(
            cauchy_annulus(&parse_laurent("7x1", 1).unwrap()).unwrap_err(),
            Error::SinglePoint
        );
    }

    #[test]
    fn montel_examples() {
        let one = BigRational::one();
        let b = montel_bound(&one, &one, 1, 1).unwrap();
        assert_eq!(b, ExactLogValue::log_of_int(2));
        // q = 0: plain |c0/cp|^{1/p}
        let b = montel_bound(&BigRational::from(BigInt::from(8)), &one, 3, 0).unwrap();
        assert_eq!(b, ExactLogValue::log_of_int(2));
        assert_eq!(
            montel_bound(&one, &BigRational::zero(), 1, 0).unwrap_err(),
            Error::ZeroLeading
        );
    }

    #[test]
    fn bracket_example() {
        let f = parse_laurent("x1^2 - x1 - 1", 1).unwrap();
        let b = smallest_root_bracket(&f).unwrap();
        close(b.inner.0, ((5f64.sqrt() - 1.0) / 2.0).ln(), 1e-12);
        close(b.outer.0, 1.0 + 2f64.ln(), 1e-12);
        // smallest root norm 1/phi is exactly the lower end
        let small = ((5f64.sqrt() - 1.0) / 2.0).ln();
        assert!(b.inner.0 <= small + 1e-12 && small <= b.outer.0);
    }

    #[test]
    fn gap_count_examples() {
        // t = 3, slopes {0, 9 log 10}, huge gap
        let f = parse_laurent("1 + x1 + 1/1000000000*x1^2", 1).unwrap();
        let r = gap_counts(&f).unwrap();
        assert_eq!(r.cut_pairs.len(), 1);
        assert_eq!(r.counts.len(), 2);
        assert_eq!(r.counts[0].1, 1);
        assert_eq!(r.counts[1].1, 1);
        assert!(r.counts[0].0.lo.is_none());
        // first region reaches up to sigma_1 + log 2
        let hi = r.counts[0].0.hi.as_ref().unwrap();
        assert_eq!(*hi, ExactLogValue::log_of_int(2));
        // second region starts at 9 log 10 - log 2
        let lo = r.counts[1].0.lo.as_ref().unwrap();
        let expect = ExactLogValue::log_of_int(10)
            .scale(&BigRational::from(BigInt::from(9)))
            .sub(&ExactLogValue::log_of_int(2));
        assert_eq!(*lo, expect);

        // boundary case: gap exactly 2 log 2 is excluded
        let g = parse_laurent("1 + 2x1 + x1^2", 1).unwrap();
        let r = gap_counts(&g).unwrap();
        assert!(r.cut_pairs.is_empty() && r.counts.is_empty());

        // t = 4 with two qualifying gaps
        let h = parse_laurent(
            "1 + x1 + 1/1000000000*x1^2 + 1/1000000000000000000000000000*x1^3",
            1,
        )
        .unwrap();
        let r = gap_counts(&h).unwrap();
        assert_eq!(r.cut_pairs.len(), 2);
        let counts: Vec<i64> = r.counts.iter().map(|c| c.1).collect();
        assert_eq!(counts, vec![1, 1, 1]);
    }

    #[test]
    fn counts_sum_to_degree_span() {
        for src in [
            "1 + x1 + 1/1000000000*x1^2",
            "1 + 2x1 + x1^2",
            "3 - 5x1^2 + x1^3 + 2x1^4 + x1^7",
        ] {
            let f = parse_laurent(src, 1).unwrap();
            let r = gap_counts(&f).unwrap();
            if !r.counts.is_empty() {
                let total: i64 = r.counts.iter().map(|c| c.1).sum();
                let (a1, at) = f.exponent_range(0);
                assert_eq!(total, at - a1, "for {src}");
            }
        }
    }

    #[test]
    fn hausdorff_menu() {
        let b = hausdorff_upper(4, 1, None, None, false).unwrap();
        close(b[0].value, 5.0 * 3f64.ln(), 1e-12);
        close(b[1].value, 3f64.ln(), 1e-12);

        let b = hausdorff_upper(5, 1, Some(3), None, false).unwrap();
        assert!(b
            .iter()
            .any(|x| x.provenance == "three-slopes" && (x.value - (1.0 + 3.0 * 4f64.ln())).abs() < 1e-12));

        let b = hausdorff_upper(20, 1, Some(1), Some(100), false).unwrap();
        let one_slope = b.iter().find(|x| x.provenance == "one-slope").unwrap();
        close(one_slope.value, -(1.0 - 2.0 * 20f64.ln() / 99.0).ln(), 1e-4);

        // general bound dominates directed bound for t >= 3
        for t in 3..30 {
            let b = hausdorff_upper(t, 1, None, None, false).unwrap();
            assert!(b[0].value >= b[1].value);
        }

        // simplex support: zero directed bound present
        let b = hausdorff_upper(3, 2, None, None, true).unwrap();
        assert!(b.iter().any(|x| x.value == 0.0));
        assert_eq!(
            hausdorff_upper(2, 2, None, None, false).unwrap_err(),
            Error::InvalidArity
        );
    }

    #[test]
    fn jensen_examples() {
        // 1 + x + ... + x^19: eps = 2 log 20 / 18
        let src = (0..20)
            .map(|i| if i == 0 { "1".to_string() } else { format!("x1^{i}") })
            .collect::<Vec<_>>()
            .join(" + ");
        let f = parse_laurent(&src, 1).unwrap();
        let c = annulus_certificate(&f).unwrap().unwrap();
        close(c.epsilon.0, 2.0 * 20f64.ln() / 18.0, 1e-12);
        assert!(c.annulus.inner.0 < 0.0 && c.annulus.outer.0 > 0.0);
        // roots of unity (norm 1, log-norm 0) inside
        assert!(c.annulus.inner.0 <= 0.0 && 0.0 <= c.annulus.outer.0);

        // binomial 1 - x^100: eps = 2 log 2 / 99
        let g = parse_laurent("1 - x1^100", 1).unwrap();
        let c = annulus_certificate(&g).unwrap().unwrap();
        close(c.epsilon.0, 2.0 * 2f64.ln() / 99.0, 1e-12);

        // eps >= 1: tiny end coefficient forces inapplicability
        let h = parse_laurent("1/100000000000000000000 + x1 + x1^2 + x1^3", 1).unwrap();
        assert!(annulus_certificate(&h).unwrap().is_none());

        // span < 2
        let k = parse_laurent("1 + x1", 1).unwrap();
        assert!(annulus_certificate(&k).unwrap().is_none());
    }
}
