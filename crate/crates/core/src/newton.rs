//! Lifted Newton polytopes, their lower hulls, and vertex sets of the
//! ordinary Newton polytope.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed};

use crate::error::{Error, Result};
use crate::exactlog::ExactLogValue;
use crate::linsolve::{int_rank, solve_rational, solve_system, SolveOutcome};
use crate::poly::LaurentPoly;

/// One term of `f`, lifted to `(a_i, -log|c_i|)`.
#[derive(Debug, Clone)]
pub struct LiftedPoint {
    pub exponent: Vec<i64>,
    pub lift: ExactLogValue,
}

#[derive(Debug, Clone)]
pub struct LiftedPolytope {
    pub n: usize,
    pub points: Vec<LiftedPoint>,
}

/// A maximal lower face, i.e. one with an outer normal of the form `(v, -1)`.
///
/// `members` lists every term index lying on the face, in sorted order;
/// collinear interior points are included, not split off.
#[derive(Debug, Clone)]
pub struct LowerFace {
    pub members: Vec<usize>,
    /// The `v` part of the outer normal `(v, -1)`; on the face,
    /// `v . a_i - lift_i` is maximal over all lifted points.
    pub normal: Vec<ExactLogValue>,
    pub dim: usize,
}

pub fn arch_newton(f: &LaurentPoly) -> LiftedPolytope {
    LiftedPolytope {
        n: f.n(),
        points: f
            .terms()
            .iter()
            .map(|t| LiftedPoint {
                exponent: t.exponent.clone(),
                lift: t.coeff.log_mag().neg(),
            })
            .collect(),
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn exponent_differences(points: &[LiftedPoint]) -> Vec<Vec<i64>> {
    let base = &points[0].exponent;
    points[1..]
        .iter()
        .map(|p| {
            p.exponent
                .iter()
                .zip(base)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect()
}

/// Greedily pick a coordinate subset on which the exponent differences have
/// full rank `k`; the projection restricted to the affine span is then
/// injective.
fn spanning_coordinates(diffs: &[Vec<i64>], n: usize) -> Vec<usize> {
    let mut cols: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let mut trial = cols.clone();
        trial.push(c);
        let projected: Vec<Vec<i64>> = diffs
            .iter()
            .map(|d| trial.iter().map(|&j| d[j]).collect())
            .collect();
        let r = int_rank(&projected);
        if r > rank {
            cols = trial;
            rank = r;
        }
    }
    cols
}

/// All maximal lower faces of the lifted polytope.
///
/// n = 1 uses an exact monotone chain; n >= 2 enumerates candidate facets
/// over (k+1)-subsets of lifted points, where k is the affine dimension of
/// the support, and certifies each by exact sign tests.
pub fn lower_hull(p: &LiftedPolytope) -> Result<Vec<LowerFace>> {
    if p.points.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    if p.points.len() == 1 {
        return Ok(Vec::new());
    }
    if p.n == 1 {
        return lower_hull_1d(p);
    }
    lower_hull_nd(p)
}

fn lower_hull_1d(p: &LiftedPolytope) -> Result<Vec<LowerFace>> {
    let mut order: Vec<usize> = (0..p.points.len()).collect();
    order.sort_by_key(|&i| p.points[i].exponent[0]);

    // Monotone chain keeping only strict convex vertices.
    let mut chain: Vec<usize> = Vec::new();
    for &i in &order {
        while chain.len() >= 2 {
            let a = &p.points[chain[chain.len() - 2]];
            let b = &p.points[chain[chain.len() - 1]];
            let c = &p.points[i];
            // cross = (b-a) x (c-b); pop b unless it is a strict right-to-left
            // convex turn (cross > 0).
            let abx = rat(b.exponent[0] - a.exponent[0]);
            let bcx = rat(c.exponent[0] - b.exponent[0]);
            let cross = c
                .lift
                .sub(&b.lift)
                .scale(&abx)
                .sub(&b.lift.sub(&a.lift).scale(&bcx));
            if cross.try_sign()? == Ordering::Greater {
                break;
            }
            chain.pop();
        }
        chain.push(i);
    }

    let mut faces = Vec::new();
    for w in chain.windows(2) {
        let (l, r) = (w[0], w[1]);
        let (pl, pr) = (&p.points[l], &p.points[r]);
        let dx = pr.exponent[0] - pl.exponent[0];
        let slope = pr
            .lift
            .sub(&pl.lift)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(dx)));
        // interior collinear members
        let mut members = Vec::new();
        for &j in &order {
            let pj = &p.points[j];
            if pj.exponent[0] < pl.exponent[0] || pj.exponent[0] > pr.exponent[0] {
                continue;
            }
            let on_line = pj
                .lift
                .sub(&pl.lift)
                .sub(&slope.scale(&rat(pj.exponent[0] - pl.exponent[0])));
            if on_line.try_sign()? == Ordering::Equal {
                members.push(j);
            }
        }
        members.sort_unstable();
        faces.push(LowerFace {
            members,
            normal: vec![slope],
            dim: 1,
        });
    }
    Ok(faces)
}

fn lower_hull_nd(p: &LiftedPolytope) -> Result<Vec<LowerFace>> {
    let t = p.points.len();
    let diffs = exponent_differences(&p.points);
    let k = int_rank(&diffs);
    if k == 0 {
        // duplicate exponents are merged upstream, so k = 0 means t = 1
        return Ok(Vec::new());
    }
    if k == 1 {
        // support on a line: reuse the exact 1-d chain on a spanning coordinate
        let cols = spanning_coordinates(&diffs, p.n);
        let c = cols[0];
        let projected = LiftedPolytope {
            n: 1,
            points: p
                .points
                .iter()
                .map(|pt| LiftedPoint {
                    exponent: vec![pt.exponent[c]],
                    lift: pt.lift.clone(),
                })
                .collect(),
        };
        let mut faces = lower_hull_1d(&projected)?;
        for f in &mut faces {
            let mut normal = vec![ExactLogValue::zero(); p.n];
            normal[c] = f.normal[0].clone();
            f.normal = normal;
        }
        return Ok(faces);
    }

    let cols = spanning_coordinates(&diffs, p.n);
    debug_assert_eq!(cols.len(), k);
    let proj = |e: &[i64]| -> Vec<i64> { cols.iter().map(|&c| e[c]).collect() };

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut faces = Vec::new();
    let mut subset = vec![0usize; k + 1];
    enumerate_subsets(t, k + 1, &mut subset, 0, 0, &mut |s| -> Result<()> {
        let base = proj(&p.points[s[0]].exponent);
        let rows: Vec<Vec<i64>> = s[1..]
            .iter()
            .map(|&i| {
                proj(&p.points[i].exponent)
                    .iter()
                    .zip(&base)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        if int_rank(&rows) < k {
            return Ok(());
        }
        // solve (a_i - a_0) . v = lift_i - lift_0 for the projected normal
        let a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect();
        let b: Vec<ExactLogValue> = s[1..]
            .iter()
            .map(|&i| p.points[i].lift.sub(&p.points[s[0]].lift))
            .collect();
        let v = match solve_system(&a, &b)? {
            SolveOutcome::Unique(v) => v,
            _ => unreachable!("full-rank square system"),
        };
        // supporting value at the subset, then test every lifted point
        let height = |i: usize| -> ExactLogValue {
            let mut h = p.points[i].lift.neg();
            for (vc, &e) in v.iter().zip(proj(&p.points[i].exponent).iter()) {
                h.add_assign(&vc.scale(&rat(e)));
            }
            h
        };
        let h0 = height(s[0]);
        let mut members = Vec::new();
        for j in 0..t {
            match height(j).sub(&h0).try_sign()? {
                Ordering::Greater => return Ok(()),
                Ordering::Equal => members.push(j),
                Ordering::Less => {}
            }
        }
        if seen.insert(members.clone()) {
            let mut normal = vec![ExactLogValue::zero(); p.n];
            for (&c, vc) in cols.iter().zip(&v) {
                normal[c] = vc.clone();
            }
            faces.push(LowerFace {
                members,
                normal,
                dim: k,
            });
        }
        Ok(())
    })?;
    Ok(faces)
}

fn enumerate_subsets(
    t: usize,
    size: usize,
    subset: &mut Vec<usize>,
    depth: usize,
    start: usize,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if depth == size {
        return f(subset);
    }
    for i in start..t {
        subset[depth] = i;
        enumerate_subsets(t, size, subset, depth + 1, i + 1, f)?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct NewtVertices {
    pub vertices: Vec<Vec<i64>>,
    /// affine dimension of Newt(f)
    pub dim: usize,
    /// true iff every support point is a vertex
    pub vertex_support: bool,
}

/// Vertex set of `Newt(f) = Conv(Supp(f))`, found by exact Caratheodory
/// tests: a support point is a non-vertex iff it is a convex combination of
/// an affinely independent (k+1)-subset of the others.
pub fn newt_vertices(f: &LaurentPoly) -> NewtVertices {
    let support: Vec<Vec<i64>> = f.terms().iter().map(|t| t.exponent.clone()).collect();
    let t = support.len();
    let diffs: Vec<Vec<i64>> = support[1..]
        .iter()
        .map(|e| e.iter().zip(&support[0]).map(|(a, b)| a - b).collect())
        .collect();
    let k = if t <= 1 { 0 } else { int_rank(&diffs) };
    if t <= k + 1 {
        return NewtVertices {
            vertices: support,
            dim: k,
            vertex_support: true,
        };
    }

    let mut vertices = Vec::new();
    for (i, p) in support.iter().enumerate() {
        let others: Vec<usize> = (0..t).filter(|&j| j != i).collect();
        let mut subset = vec![0usize; k + 1];
        let mut contained = false;
        enumerate_subsets(
            others.len(),
            k + 1,
            &mut subset,
            0,
            0,
            &mut |s| -> Result<()> {
                if contained {
                    return Ok(());
                }
                let pts: Vec<&Vec<i64>> = s.iter().map(|&j| &support[others[j]]).collect();
                let rows: Vec<Vec<i64>> = pts[1..]
                    .iter()
                    .map(|q| q.iter().zip(pts[0]).map(|(a, b)| a - b).collect())
                    .collect();
                if int_rank(&rows) < k {
                    return Ok(());
                }
                // barycentric coordinates: sum lambda = 1, sum lambda * a_j = p
                let mut a: Vec<Vec<BigRational>> = Vec::new();
                let mut b: Vec<BigRational> = Vec::new();
                a.push(vec![BigRational::one(); k + 1]);
                b.push(BigRational::one());
                for c in 0..f.n() {
                    a.push(pts.iter().map(|q| rat(q[c])).collect());
                    b.push(rat(p[c]));
                }
                if let Some(lambda) = solve_rational(&a, &b) {
                    if lambda.iter().all(|l| !l.is_negative()) {
                        contained = true;
                    }
                }
                Ok(())
            },
        )
        .expect("rational-only test cannot exhaust precision");
        if !contained {
            vertices.push(p.clone());
        }
    }
    let vertex_support = vertices.len() == t;
    NewtVertices {
        vertices,
        dim: k,
        vertex_support,
    }
}
