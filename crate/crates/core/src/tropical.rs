//! ArchTrop(f): slope multisets for n = 1, polyhedral curves for n = 2, and
//! exact membership for arbitrary n.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::integer::gcd;
use num::rational::BigRational;
use num::Signed;

use crate::error::{Error, Result};
use crate::exactlog::ExactLogValue;
use crate::newton::{arch_newton, lower_hull};
use crate::poly::LaurentPoly;

/// ArchTrop of a univariate polynomial: the lower-edge slopes with
/// multiplicity equal to the horizontal edge length.
#[derive(Debug, Clone)]
pub struct UnivariateArchTrop {
    /// sorted by slope, strictly increasing
    pub points: Vec<(ExactLogValue, i64)>,
}

impl UnivariateArchTrop {
    pub fn min_slope(&self) -> &ExactLogValue {
        &self.points.first().expect("nonempty by construction").0
    }

    pub fn max_slope(&self) -> &ExactLogValue {
        &self.points.last().expect("nonempty by construction").0
    }

    /// Distance from `v` to the nearest slope, with an error bound.
    pub fn distance_to(&self, v: f64) -> Result<(f64, f64)> {
        if self.points.is_empty() {
            return Err(Error::EmptyTropicalSet);
        }
        let mut best = (f64::INFINITY, 0.0);
        for (s, _) in &self.points {
            let (x, e) = s.approx();
            let d = (v - x).abs();
            if d < best.0 {
                best = (d, e);
            }
        }
        Ok(best)
    }
}

pub fn archtrop_1d(f: &LaurentPoly) -> Result<UnivariateArchTrop> {
    if f.n() != 1 {
        return Err(Error::NotUnivariate);
    }
    if f.term_count() < 2 {
        return Err(Error::SinglePoint);
    }
    let hull = lower_hull(&arch_newton(f))?;
    let mut points = Vec::new();
    for face in hull {
        let xs: Vec<i64> = face
            .members
            .iter()
            .map(|&i| f.terms()[i].exponent[0])
            .collect();
        let len = xs.iter().max().unwrap() - xs.iter().min().unwrap();
        points.push((face.normal[0].clone(), len));
    }
    Ok(UnivariateArchTrop { points })
}

#[derive(Debug, Clone)]
pub struct CurveVertex {
    pub x: ExactLogValue,
    pub y: ExactLogValue,
    /// term indices tying at this point
    pub terms: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CurveSegment {
    pub ends: [usize; 2],
    pub dominating: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CurveRay {
    pub base: usize,
    pub dir: [i64; 2],
    pub dominating: Vec<usize>,
}

/// ArchTrop of a bivariate polynomial as a piecewise-linear curve.
#[derive(Debug, Clone, Default)]
pub struct TropicalCurve {
    pub vertices: Vec<CurveVertex>,
    pub segments: Vec<CurveSegment>,
    pub rays: Vec<CurveRay>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// `log|c_i| + a_i . w`
pub fn term_value(f: &LaurentPoly, i: usize, w: &[ExactLogValue]) -> ExactLogValue {
    let term = &f.terms()[i];
    let mut v = term.coeff.log_mag();
    for (e, wc) in term.exponent.iter().zip(w) {
        if *e != 0 {
            v.add_assign(&wc.scale(&rat(*e)));
        }
    }
    v
}

struct EndBound {
    s: ExactLogValue,
    achievers: Vec<usize>,
}

fn tighten(
    cur: &mut Option<EndBound>,
    s: ExactLogValue,
    m: usize,
    want: Ordering,
) -> Result<()> {
    match cur {
        None => {
            *cur = Some(EndBound {
                s,
                achievers: vec![m],
            })
        }
        Some(b) => match s.try_cmp(&b.s)? {
            Ordering::Equal => b.achievers.push(m),
            o if o == want => {
                *cur = Some(EndBound {
                    s,
                    achievers: vec![m],
                })
            }
            _ => {}
        },
    }
    Ok(())
}

impl TropicalCurve {
    fn vertex_index(&mut self, x: ExactLogValue, y: ExactLogValue, terms: &[usize]) -> usize {
        for (i, v) in self.vertices.iter_mut().enumerate() {
            if v.x == x && v.y == y {
                for &t in terms {
                    if !v.terms.contains(&t) {
                        v.terms.push(t);
                    }
                }
                v.terms.sort_unstable();
                return i;
            }
        }
        let mut ts = terms.to_vec();
        ts.sort_unstable();
        ts.dedup();
        self.vertices.push(CurveVertex { x, y, terms: ts });
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.segments.is_empty() && self.rays.is_empty()
    }

    /// Euclidean distance from `p` to the curve, with an error bound.
    pub fn distance_to(&self, p: [f64; 2]) -> Result<(f64, f64)> {
        if self.is_empty() {
            return Err(Error::EmptyTropicalSet);
        }
        let coords = |i: usize| -> ([f64; 2], f64) {
            let (x, ex) = self.vertices[i].x.approx();
            let (y, ey) = self.vertices[i].y.approx();
            ([x, y], ex.max(ey))
        };
        let mut best = (f64::INFINITY, 0.0);
        let mut consider = |d: f64, e: f64| {
            if d < best.0 {
                best = (d, e);
            }
        };
        for i in 0..self.vertices.len() {
            let (v, e) = coords(i);
            consider(((p[0] - v[0]).powi(2) + (p[1] - v[1]).powi(2)).sqrt(), e);
        }
        for seg in &self.segments {
            let (a, ea) = coords(seg.ends[0]);
            let (b, eb) = coords(seg.ends[1]);
            let d = dist_to_piece(p, a, [b[0] - a[0], b[1] - a[1]], Some(1.0));
            consider(d, ea.max(eb));
        }
        for ray in &self.rays {
            let (a, ea) = coords(ray.base);
            let d = dist_to_piece(p, a, [ray.dir[0] as f64, ray.dir[1] as f64], None);
            consider(d, ea);
        }
        Ok(best)
    }
}

/// Distance from `p` to `{a + t*d : 0 <= t <= hi}` (`hi = None` for a ray).
fn dist_to_piece(p: [f64; 2], a: [f64; 2], d: [f64; 2], hi: Option<f64>) -> f64 {
    let dd = d[0] * d[0] + d[1] * d[1];
    let mut t = if dd == 0.0 {
        0.0
    } else {
        ((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / dd
    };
    t = t.max(0.0);
    if let Some(h) = hi {
        t = t.min(h);
    }
    let q = [a[0] + t * d[0], a[1] + t * d[1]];
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// Build the tropical curve by enumerating term pairs: each pair's tie line,
/// restricted to where the pair dominates all other terms, is one candidate
/// cell; cell endpoints are the curve's vertices.
pub fn archtrop_2d(f: &LaurentPoly) -> Result<TropicalCurve> {
    if f.n() != 2 {
        return Err(Error::NotPlanar);
    }
    let t = f.term_count();
    if t < 2 {
        return Ok(TropicalCurve::default());
    }
    let exps: Vec<[i64; 2]> = f
        .terms()
        .iter()
        .map(|tm| [tm.exponent[0], tm.exponent[1]])
        .collect();
    let logc: Vec<ExactLogValue> = f.terms().iter().map(|tm| tm.coeff.log_mag()).collect();

    let mut curve = TropicalCurve::default();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();

    for i in 0..t {
        'pair: for j in (i + 1)..t {
            let delta = [exps[i][0] - exps[j][0], exps[i][1] - exps[j][1]];
            let g = gcd(delta[0].abs(), delta[1].abs());
            let dir = [-delta[1] / g, delta[0] / g];
            let rhs = logc[j].sub(&logc[i]);
            let denom = rat(delta[0] * delta[0] + delta[1] * delta[1]);
            let v0 = [
                rhs.scale(&(rat(delta[0]) / &denom)),
                rhs.scale(&(rat(delta[1]) / &denom)),
            ];
            // value_i(v0 + s*dir) - value_m(v0 + s*dir) = beta_m + s*alpha_m
            let mut lo: Option<EndBound> = None;
            let mut hi: Option<EndBound> = None;
            let mut dominating = vec![i, j];
            for m in 0..t {
                if m == i || m == j {
                    continue;
                }
                let da = [exps[i][0] - exps[m][0], exps[i][1] - exps[m][1]];
                let alpha = da[0] * dir[0] + da[1] * dir[1];
                let mut beta = logc[i].sub(&logc[m]);
                beta.add_assign(&v0[0].scale(&rat(da[0])));
                beta.add_assign(&v0[1].scale(&rat(da[1])));
                if alpha == 0 {
                    match beta.try_sign()? {
                        Ordering::Less => continue 'pair,
                        Ordering::Equal => dominating.push(m),
                        Ordering::Greater => {}
                    }
                } else {
                    let s = beta.scale(&(rat(-1) / rat(alpha)));
                    if alpha > 0 {
                        tighten(&mut lo, s, m, Ordering::Greater)?;
                    } else {
                        tighten(&mut hi, s, m, Ordering::Less)?;
                    }
                }
            }
            dominating.sort_unstable();
            if !seen.insert(dominating.clone()) {
                continue;
            }
            let at = |s: &ExactLogValue| -> (ExactLogValue, ExactLogValue) {
                (
                    v0[0].add(&s.scale(&rat(dir[0]))),
                    v0[1].add(&s.scale(&rat(dir[1]))),
                )
            };
            match (&lo, &hi) {
                (Some(l), Some(h)) => match l.s.try_cmp(&h.s)? {
                    Ordering::Greater => {}
                    Ordering::Equal => {
                        let (x, y) = at(&l.s);
                        let mut ts = dominating.clone();
                        ts.extend_from_slice(&l.achievers);
                        ts.extend_from_slice(&h.achievers);
                        curve.vertex_index(x, y, &ts);
                    }
                    Ordering::Less => {
                        let (xl, yl) = at(&l.s);
                        let (xh, yh) = at(&h.s);
                        let mut tl = dominating.clone();
                        tl.extend_from_slice(&l.achievers);
                        let mut th = dominating.clone();
                        th.extend_from_slice(&h.achievers);
                        let a = curve.vertex_index(xl, yl, &tl);
                        let b = curve.vertex_index(xh, yh, &th);
                        curve.segments.push(CurveSegment {
                            ends: [a, b],
                            dominating: dominating.clone(),
                        });
                    }
                },
                (Some(l), None) => {
                    let (x, y) = at(&l.s);
                    let mut ts = dominating.clone();
                    ts.extend_from_slice(&l.achievers);
                    let a = curve.vertex_index(x, y, &ts);
                    curve.rays.push(CurveRay {
                        base: a,
                        dir,
                        dominating: dominating.clone(),
                    });
                }
                (None, Some(h)) => {
                    let (x, y) = at(&h.s);
                    let mut ts = dominating.clone();
                    ts.extend_from_slice(&h.achievers);
                    let a = curve.vertex_index(x, y, &ts);
                    curve.rays.push(CurveRay {
                        base: a,
                        dir: [-dir[0], -dir[1]],
                        dominating: dominating.clone(),
                    });
                }
                (None, None) => {
                    // full tie line; anchor two opposite rays at a point on it
                    let a = curve.vertex_index(v0[0].clone(), v0[1].clone(), &dominating);
                    curve.rays.push(CurveRay {
                        base: a,
                        dir,
                        dominating: dominating.clone(),
                    });
                    curve.rays.push(CurveRay {
                        base: a,
                        dir: [-dir[0], -dir[1]],
                        dominating: dominating.clone(),
                    });
                }
            }
        }
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
}

#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub status: Membership,
    /// term indices attaining the maximum, sorted
    pub dominating: Vec<usize>,
}

/// A query point given either as a strictly positive rational vector `v`
/// (the tropical query point is `Log|v|`) or directly by rational
/// log-coordinates `u` (`v_i = e^{u_i}`).
#[derive(Debug, Clone)]
pub enum QueryPoint {
    Rational(Vec<BigRational>),
    Log(Vec<BigRational>),
}

/// Exact membership of `Log|v|` in ArchTrop(f).
pub fn member(f: &LaurentPoly, q: &QueryPoint) -> Result<MembershipVerdict> {
    let w: Vec<ExactLogValue> = match q {
        QueryPoint::Rational(v) => {
            if v.len() != f.n() {
                return Err(Error::DimensionMismatch {
                    index: v.len(),
                    n: f.n(),
                });
            }
            if f.is_log_polar() {
                return Err(Error::ModelMismatch);
            }
            if v.iter().any(|c| !c.is_positive()) {
                return Err(Error::NonpositiveQuery);
            }
            v.iter()
                .map(|c| ExactLogValue::from_log(c.clone(), BigRational::from(BigInt::from(1))))
                .collect()
        }
        QueryPoint::Log(u) => {
            if u.len() != f.n() {
                return Err(Error::DimensionMismatch {
                    index: u.len(),
                    n: f.n(),
                });
            }
            u.iter()
                .map(|c| ExactLogValue::from_rational(c.clone()))
                .collect()
        }
    };
    member_log(f, &w)
}

/// Membership with exact-log query coordinates; shared by [`member`] and the
/// system-isolation verifier.
pub fn member_log(f: &LaurentPoly, w: &[ExactLogValue]) -> Result<MembershipVerdict> {
    assert_eq!(w.len(), f.n());
    let mut dominating = vec![0usize];
    let mut max = term_value(f, 0, w);
    for i in 1..f.term_count() {
        let v = term_value(f, i, w);
        match v.try_cmp(&max)? {
            Ordering::Greater => {
                max = v;
                dominating = vec![i];
            }
            Ordering::Equal => dominating.push(i),
            Ordering::Less => {}
        }
    }
    let status = if dominating.len() >= 2 {
        Membership::In
    } else {
        Membership::Out
    };
    Ok(MembershipVerdict { status, dominating })
}
